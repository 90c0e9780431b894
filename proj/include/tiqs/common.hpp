#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace tiqs {

using cplx = std::complex<double>;

// Error taxonomy. The CLI maps these onto process exit codes:
// input/format problems -> 2, numerical-guard trips -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input-side errors
class LayoutError : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class DataError : public Error {
 public:
  using Error::Error;
};

// Numerical-guard errors
class TruncationError : public Error {
 public:
  using Error::Error;
};
class NormalizationError : public Error {
 public:
  using Error::Error;
};
class SymmetryError : public Error {
 public:
  using Error::Error;
};
class SamplingError : public Error {
 public:
  using Error::Error;
};
class WindowingError : public Error {
 public:
  using Error::Error;
};
class SaddlePointError : public Error {
 public:
  using Error::Error;
};
class ProtocolError : public Error {
 public:
  using Error::Error;
};
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Number of worker threads for parameter scans. Controlled by the
// TIQS_THREADS environment variable; defaults to the hardware count.
int thread_count();

// Runs fn(0..n-1), splitting the range over thread_count() threads.
// Work items must write to disjoint slots so results are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tiqs
