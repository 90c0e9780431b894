#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tiqs/common.hpp"

namespace tiqs {

// Basis conventions, fixed globally and relied on by every module:
//
//   * qubit 1 is the most significant tensor factor; bosonic modes follow
//     the qubits, mode 1 most significant among the modes;
//   * a basis index decomposes as
//         index = bits * boson_dim + fock_index
//     where bits places qubit q at bit position (qubit_count - q) and
//     fock_index is the mixed-radix number over the mode occupations;
//   * qubit bit 1 is spin-up |↑> (occupied orbital), bit 0 is spin-down,
//     so bitstring "1100" is the state |↑↑↓↓>. With the standard Pauli
//     matrices this means Z|0> = +|0>, Z|1> = -|1>.
struct HilbertLayout {
  int qubit_count = 0;
  std::vector<int> mode_dims;

  int mode_count() const { return static_cast<int>(mode_dims.size()); }
  std::size_t boson_dim() const;
  std::size_t dim() const;

  // Bit position of 1-based qubit q inside the qubit word.
  int bit_shift(int qubit) const { return qubit_count - qubit; }

  std::size_t index_of(std::uint64_t bits, const std::vector<int>& focks) const;
  void decode(std::size_t index, std::uint64_t& bits, std::vector<int>& focks) const;

  // Stride of mode m (1-based): product of dims of the modes after it.
  std::size_t mode_stride(int mode) const;

  bool operator==(const HilbertLayout& other) const;
  bool operator!=(const HilbertLayout& other) const { return !(*this == other); }
};

struct HybridState {
  HilbertLayout layout;
  Eigen::VectorXcd amp;

  double norm() const { return amp.norm(); }
  void renormalize();
  // Throws NormalizationError if the L2 norm drifted beyond tol from 1.
  void check_normalized(double tol = 1e-12) const;
};

// Unit vector on the given computational basis index. bits is written
// qubit 1 first ("1100" = |↑↑↓↓>).
HybridState basis_state(const HilbertLayout& layout, const std::string& bits,
                        const std::vector<int>& focks = {});
HybridState basis_state(const HilbertLayout& layout, std::uint64_t bits,
                        const std::vector<int>& focks = {});

struct PauliTerm {
  double coeff = 0.0;
  std::string letters;  // one of I,X,Y,Z per qubit, length = qubit_count
};

// Weighted sum of Pauli strings with real coefficients. Terms with equal
// strings are merged on construction; coefficients below 1e-14 in
// magnitude are dropped as exact cancellations.
class PauliTermSum {
 public:
  PauliTermSum() = default;
  PauliTermSum(int qubit_count, std::vector<PauliTerm> terms);

  int qubit_count() const { return qubit_count_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double identity_coefficient() const;
  PauliTermSum without_identity() const;

  static std::string identity_string(int qubit_count) {
    return std::string(static_cast<std::size_t>(qubit_count), 'I');
  }

 private:
  int qubit_count_ = 0;
  std::vector<PauliTerm> terms_;  // sorted by string for deterministic order
};

// Number of non-identity letters.
int pauli_weight(const std::string& letters);

// In-place |psi> -> P|psi> for one Pauli string (bitwise kernel).
void apply_pauli_string(HybridState& state, const std::string& letters);

// <psi| sum_l g_l P_l |psi>. Checks normalization, asserts the imaginary
// residual is below 1e-10 and discards it.
double expectation(const HybridState& state, const PauliTermSum& observable);

// |<a|b>|^2.
double fidelity(const HybridState& a, const HybridState& b);

// --- state-vector kernels shared by the gate layer ---

void apply_single_qubit_op(HybridState& state, int qubit, const Eigen::Matrix2cd& u);
// u acts on the (mode) factor alone; dimension d x d.
void apply_mode_op(HybridState& state, int mode, const Eigen::MatrixXcd& u);
// u acts on (qubit ⊗ mode) with the qubit bit major: dimension 2d x 2d.
void apply_qubit_mode_op(HybridState& state, int qubit, int mode, const Eigen::MatrixXcd& u);
void scale_global_phase(HybridState& state, cplx phase);

// Population of the top Fock level of a mode; the truncation-leakage guard.
double top_level_population(const HybridState& state, int mode);

}  // namespace tiqs
