#include "tiqs/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tiqs {

std::size_t HilbertLayout::boson_dim() const {
  std::size_t d = 1;
  for (int dm : mode_dims) {
    if (dm < 1) throw LayoutError("mode truncation must be >= 1");
    d *= static_cast<std::size_t>(dm);
  }
  return d;
}

std::size_t HilbertLayout::dim() const {
  if (qubit_count < 0) throw LayoutError("negative qubit count");
  if (qubit_count > 24) throw LayoutError("qubit count exceeds the desk-scale memory budget");
  std::size_t d = (std::size_t{1} << qubit_count) * boson_dim();
  if (d > (std::size_t{1} << 22))
    throw LayoutError("total dimension exceeds the desk-scale memory budget");
  return d;
}

std::size_t HilbertLayout::mode_stride(int mode) const {
  if (mode < 1 || mode > mode_count()) throw LayoutError("mode index out of range");
  std::size_t s = 1;
  for (int m = mode; m < mode_count(); ++m) s *= static_cast<std::size_t>(mode_dims[m]);
  return s;
}

std::size_t HilbertLayout::index_of(std::uint64_t bits, const std::vector<int>& focks) const {
  if (bits >> qubit_count)
    throw LayoutError("bit pattern has more qubits than the layout");
  if (static_cast<int>(focks.size()) != mode_count())
    throw LayoutError("fock occupation list does not match the mode count");
  std::size_t b = 0;
  for (int m = 0; m < mode_count(); ++m) {
    if (focks[m] < 0 || focks[m] >= mode_dims[m])
      throw TruncationError("fock occupation at or above the mode truncation");
    b = b * static_cast<std::size_t>(mode_dims[m]) + static_cast<std::size_t>(focks[m]);
  }
  return static_cast<std::size_t>(bits) * boson_dim() + b;
}

void HilbertLayout::decode(std::size_t index, std::uint64_t& bits, std::vector<int>& focks) const {
  const std::size_t bd = boson_dim();
  bits = index / bd;
  std::size_t rem = index % bd;
  focks.assign(mode_dims.size(), 0);
  for (int m = mode_count() - 1; m >= 0; --m) {
    focks[m] = static_cast<int>(rem % static_cast<std::size_t>(mode_dims[m]));
    rem /= static_cast<std::size_t>(mode_dims[m]);
  }
}

bool HilbertLayout::operator==(const HilbertLayout& other) const {
  return qubit_count == other.qubit_count && mode_dims == other.mode_dims;
}

void HybridState::renormalize() {
  double n = norm();
  if (n == 0.0) throw NormalizationError("cannot renormalize the zero vector");
  amp /= n;
}

void HybridState::check_normalized(double tol) const {
  if (std::abs(norm() - 1.0) > tol)
    throw NormalizationError("state norm drifted from 1 beyond tolerance");
}

HybridState basis_state(const HilbertLayout& layout, std::uint64_t bits,
                        const std::vector<int>& focks) {
  std::vector<int> f = focks;
  if (f.empty()) f.assign(layout.mode_dims.size(), 0);
  HybridState s;
  s.layout = layout;
  s.amp = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dim()));
  s.amp[static_cast<Eigen::Index>(layout.index_of(bits, f))] = 1.0;
  return s;
}

HybridState basis_state(const HilbertLayout& layout, const std::string& bits,
                        const std::vector<int>& focks) {
  if (static_cast<int>(bits.size()) != layout.qubit_count)
    throw LayoutError("bitstring length does not match the qubit count");
  std::uint64_t w = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw LayoutError("bitstring must contain only 0/1");
    w = (w << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return basis_state(layout, w, focks);
}

PauliTermSum::PauliTermSum(int qubit_count, std::vector<PauliTerm> terms)
    : qubit_count_(qubit_count) {
  if (qubit_count < 0) throw LayoutError("negative qubit count");
  std::map<std::string, double> merged;
  for (const auto& t : terms) {
    if (static_cast<int>(t.letters.size()) != qubit_count)
      throw LayoutError("Pauli string length does not match the qubit count");
    for (char c : t.letters)
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
        throw DomainError("Pauli letters must be one of I,X,Y,Z");
    merged[t.letters] += t.coeff;
  }
  for (const auto& [s, c] : merged)
    if (std::abs(c) > 1e-14) terms_.push_back({c, s});
}

double PauliTermSum::identity_coefficient() const {
  const std::string id = identity_string(qubit_count_);
  for (const auto& t : terms_)
    if (t.letters == id) return t.coeff;
  return 0.0;
}

PauliTermSum PauliTermSum::without_identity() const {
  const std::string id = identity_string(qubit_count_);
  std::vector<PauliTerm> kept;
  for (const auto& t : terms_)
    if (t.letters != id) kept.push_back(t);
  return PauliTermSum(qubit_count_, std::move(kept));
}

int pauli_weight(const std::string& letters) {
  return static_cast<int>(std::count_if(letters.begin(), letters.end(),
                                        [](char c) { return c != 'I'; }));
}

void apply_pauli_string(HybridState& state, const std::string& letters) {
  const HilbertLayout& L = state.layout;
  if (static_cast<int>(letters.size()) != L.qubit_count)
    throw LayoutError("Pauli string length does not match the layout");
  const std::size_t bd = L.boson_dim();
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());

  std::uint64_t flip = 0;  // X/Y flip mask over the qubit word
  std::uint64_t ymask = 0;
  std::uint64_t zmask = 0;
  for (int q = 1; q <= L.qubit_count; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << L.bit_shift(q);
    switch (letters[static_cast<std::size_t>(q - 1)]) {
      case 'X': flip |= bit; break;
      case 'Y': flip |= bit; ymask |= bit; break;
      case 'Z': zmask |= bit; break;
      default: break;
    }
  }

  Eigen::VectorXcd out(state.amp.size());
  const int ycount = static_cast<int>(__builtin_popcountll(ymask));
  // global factor i^{ycount} with per-basis sign bookkeeping below
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx yfactor = ipow[ycount % 4];
  for (std::size_t i = 0; i < dim; ++i) {
    const std::uint64_t w = i / bd;
    const std::size_t rem = i % bd;
    // phase: Z letters on set bits give -1; Y letters give i on bit 0, -i on bit 1
    // (folded into yfactor and a sign from the set Y bits).
    int sign = __builtin_popcountll(w & zmask) + __builtin_popcountll(w & ymask);
    const std::uint64_t wj = w ^ flip;
    const std::size_t j = static_cast<std::size_t>(wj) * bd + rem;
    out[static_cast<Eigen::Index>(j)] =
        ((sign & 1) ? -yfactor : yfactor) * state.amp[static_cast<Eigen::Index>(i)];
  }
  state.amp.swap(out);
}

double expectation(const HybridState& state, const PauliTermSum& observable) {
  const HilbertLayout& L = state.layout;
  if (observable.qubit_count() != L.qubit_count)
    throw LayoutError("observable qubit count does not match the state layout");
  state.check_normalized(1e-10);
  const std::size_t bd = L.boson_dim();
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  cplx acc = 0.0;
  for (const auto& term : observable.terms()) {
    std::uint64_t flip = 0, ymask = 0, zmask = 0;
    for (int q = 1; q <= L.qubit_count; ++q) {
      const std::uint64_t bit = std::uint64_t{1} << L.bit_shift(q);
      switch (term.letters[static_cast<std::size_t>(q - 1)]) {
        case 'X': flip |= bit; break;
        case 'Y': flip |= bit; ymask |= bit; break;
        case 'Z': zmask |= bit; break;
        default: break;
      }
    }
    const cplx yfactor = ipow[__builtin_popcountll(ymask) % 4];
    // <psi|P|psi> = sum_i conj(psi[map(i)]) phase(i) psi[i], no copy
    cplx term_acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const std::uint64_t w = i / bd;
      const std::size_t j = static_cast<std::size_t>(w ^ flip) * bd + i % bd;
      const int sign = __builtin_popcountll(w & zmask) + __builtin_popcountll(w & ymask);
      const cplx phase = (sign & 1) ? -yfactor : yfactor;
      term_acc += std::conj(state.amp[static_cast<Eigen::Index>(j)]) * phase *
                  state.amp[static_cast<Eigen::Index>(i)];
    }
    acc += term.coeff * term_acc;
  }
  if (std::abs(acc.imag()) > 1e-10)
    throw SymmetryError("expectation has a non-negligible imaginary residual");
  return acc.real();
}

double fidelity(const HybridState& a, const HybridState& b) {
  if (a.layout != b.layout) throw LayoutError("fidelity requires matching layouts");
  return std::norm(a.amp.dot(b.amp));
}

void apply_single_qubit_op(HybridState& state, int qubit, const Eigen::Matrix2cd& u) {
  const HilbertLayout& L = state.layout;
  if (qubit < 1 || qubit > L.qubit_count) throw LayoutError("qubit index out of range");
  const std::size_t step = L.boson_dim() << L.bit_shift(qubit);
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  for (std::size_t base = 0; base < dim; base += 2 * step) {
    for (std::size_t k = 0; k < step; ++k) {
      const Eigen::Index i0 = static_cast<Eigen::Index>(base + k);
      const Eigen::Index i1 = static_cast<Eigen::Index>(base + k + step);
      const cplx a0 = state.amp[i0], a1 = state.amp[i1];
      state.amp[i0] = u(0, 0) * a0 + u(0, 1) * a1;
      state.amp[i1] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

void apply_mode_op(HybridState& state, int mode, const Eigen::MatrixXcd& u) {
  const HilbertLayout& L = state.layout;
  if (mode < 1 || mode > L.mode_count()) throw LayoutError("mode index out of range");
  const int d = L.mode_dims[static_cast<std::size_t>(mode - 1)];
  if (u.rows() != d || u.cols() != d) throw LayoutError("mode operator dimension mismatch");
  const std::size_t stride = L.mode_stride(mode);
  const std::size_t block = stride * static_cast<std::size_t>(d);
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  Eigen::VectorXcd vec(d);
  for (std::size_t base = 0; base < dim; base += block) {
    for (std::size_t k = 0; k < stride; ++k) {
      for (int v = 0; v < d; ++v)
        vec[v] = state.amp[static_cast<Eigen::Index>(base + k + stride * static_cast<std::size_t>(v))];
      Eigen::VectorXcd res = u * vec;
      for (int v = 0; v < d; ++v)
        state.amp[static_cast<Eigen::Index>(base + k + stride * static_cast<std::size_t>(v))] = res[v];
    }
  }
}

void apply_qubit_mode_op(HybridState& state, int qubit, int mode, const Eigen::MatrixXcd& u) {
  const HilbertLayout& L = state.layout;
  if (qubit < 1 || qubit > L.qubit_count) throw LayoutError("qubit index out of range");
  if (mode < 1 || mode > L.mode_count()) throw LayoutError("mode index out of range");
  const int d = L.mode_dims[static_cast<std::size_t>(mode - 1)];
  if (u.rows() != 2 * d || u.cols() != 2 * d)
    throw LayoutError("qubit-mode operator dimension mismatch");
  const std::size_t qstep = L.boson_dim() << L.bit_shift(qubit);
  const std::size_t mstride = L.mode_stride(mode);
  const std::size_t mblock = mstride * static_cast<std::size_t>(d);
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  Eigen::VectorXcd vec(2 * d);
  // Iterate over all indices with qubit bit 0 and fock 0 for the targets.
  for (std::size_t qbase = 0; qbase < dim; qbase += 2 * qstep) {
    for (std::size_t off = 0; off < qstep; off += mblock) {
      for (std::size_t k = 0; k < mstride; ++k) {
        const std::size_t root = qbase + off + k;
        for (int b = 0; b < 2; ++b)
          for (int v = 0; v < d; ++v)
            vec[b * d + v] = state.amp[static_cast<Eigen::Index>(
                root + static_cast<std::size_t>(b) * qstep + mstride * static_cast<std::size_t>(v))];
        Eigen::VectorXcd res = u * vec;
        for (int b = 0; b < 2; ++b)
          for (int v = 0; v < d; ++v)
            state.amp[static_cast<Eigen::Index>(
                root + static_cast<std::size_t>(b) * qstep + mstride * static_cast<std::size_t>(v))] =
                res[b * d + v];
      }
    }
  }
}

void scale_global_phase(HybridState& state, cplx phase) { state.amp *= phase; }

double top_level_population(const HybridState& state, int mode) {
  const HilbertLayout& L = state.layout;
  if (mode < 1 || mode > L.mode_count()) throw LayoutError("mode index out of range");
  const int d = L.mode_dims[static_cast<std::size_t>(mode - 1)];
  const std::size_t stride = L.mode_stride(mode);
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  double pop = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const int f = static_cast<int>((i / stride) % static_cast<std::size_t>(d));
    if (f == d - 1) pop += std::norm(state.amp[static_cast<Eigen::Index>(i)]);
  }
  return pop;
}

}  // namespace tiqs
