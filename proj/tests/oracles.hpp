#pragma once

// Independent test oracles. Everything here is built from first
// principles (explicit Kronecker products, occupation-number sign rules,
// closed-form factors) so the checks stay independent of the bitwise
// kernels and gate compilations they validate.

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "tiqs/hilbert.hpp"

namespace oracles {

using tiqs::cplx;

inline Eigen::Matrix2cd pauli(char letter) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const cplx i(0, 1);
  switch (letter) {
    case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
    case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'Y': m(0, 1) = -i; m(1, 0) = i; break;
    default:  m(0, 0) = 1; m(1, 1) = -1; break;
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Explicit Kronecker build of a Pauli string (qubit 1 most significant).
inline Eigen::MatrixXcd pauli_string(const std::string& letters) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : letters) m = kron(m, pauli(c));
  return m;
}

inline Eigen::MatrixXcd pauli_sum(const tiqs::PauliTermSum& sum) {
  const Eigen::Index d = Eigen::Index{1} << sum.qubit_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : sum.terms()) m += t.coeff * pauli_string(t.letters);
  return m;
}

// Fermionic creation operator straight from the occupation-number sign
// rule: c†p |n1..nM> = (-1)^{Σ_{m<p} n_m} (1 - n_p) |.. n_p=1 ..>, with
// orbital 1 on the most significant bit (matching the global layout).
inline Eigen::MatrixXcd creation_op(int n_modes, int p /*0-based*/) {
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int bitpos = n_modes - 1 - p;
    if ((col >> bitpos) & 1) continue;  // already occupied
    int parity = 0;
    for (int q = 0; q < p; ++q) parity += (col >> (n_modes - 1 - q)) & 1;
    const Eigen::Index row = col | (Eigen::Index{1} << bitpos);
    m(row, col) = parity % 2 ? -1.0 : 1.0;
  }
  return m;
}

inline Eigen::MatrixXcd annihilation_op(int n_modes, int p) {
  return creation_op(n_modes, p).adjoint();
}

// Mode ladder operator on a truncated Fock space.
inline Eigen::MatrixXcd mode_lowering(int d) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Franck-Condon weights of a displaced oscillator (equal frequencies):
// |<m| D(λ) |0>|^2 = e^{-λ²} λ^{2m} / m!.
inline double displaced_vacuum_weight(double lambda, int m) {
  double w = std::exp(-lambda * lambda);
  for (int k = 1; k <= m; ++k) w *= lambda * lambda / k;
  return w;
}

inline tiqs::HybridState random_state(const tiqs::HilbertLayout& layout,
                                      std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  tiqs::HybridState s;
  s.layout = layout;
  s.amp.resize(static_cast<Eigen::Index>(layout.dim()));
  for (Eigen::Index k = 0; k < s.amp.size(); ++k) s.amp[k] = cplx(gauss(rng), gauss(rng));
  s.amp /= s.amp.norm();
  return s;
}

inline std::string random_pauli_string(int n_qubits, std::mt19937_64& rng,
                                       bool avoid_identity = true) {
  static const char alphabet[] = {'I', 'X', 'Y', 'Z'};
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  do {
    for (auto& c : s) c = alphabet[rng() % 4];
  } while (avoid_identity && tiqs::pauli_weight(s) == 0);
  return s;
}

}  // namespace oracles
