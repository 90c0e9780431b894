#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tiqs/fermion.hpp"
#include "tiqs/hilbert.hpp"
#include "tiqs/ionops.hpp"
#include "tiqs/measure.hpp"

namespace tiqs {

// Cluster amplitudes T = T1 + T2 over a Hartree-Fock reference with the
// N lowest spin orbitals occupied: singles t_i^a (i occupied, a virtual)
// and doubles t_ij^ab (i<j, a<b). Amplitudes are real. The flat-vector
// serialization is deterministic: singles in lexicographic (i,a) order,
// then doubles in lexicographic (i,j,a,b) order, all 0-based.
class ClusterAmplitudes {
 public:
  ClusterAmplitudes() = default;
  ClusterAmplitudes(int n_spin_orbitals, int n_electrons);

  int n_spin_orbitals() const { return m_; }
  int n_electrons() const { return n_; }
  int singles_count() const;
  int doubles_count() const;
  int parameter_count() const { return singles_count() + doubles_count(); }

  double& single(int i, int a);
  double single(int i, int a) const;
  double& double_amp(int i, int j, int a, int b);
  double double_amp(int i, int j, int a, int b) const;

  Eigen::VectorXd to_vector() const;
  void from_vector(const Eigen::VectorXd& v);

  // Excitation operators in serialization order: singles c†a c_i, then
  // doubles c†a c†b c_j c_i.
  struct Excitation {
    int rank = 1;
    std::vector<int> occupied;  // i (or i,j)
    std::vector<int> virtuals;  // a (or a,b)
  };
  std::vector<Excitation> excitations() const;

 private:
  int m_ = 0, n_ = 0;
  std::vector<double> singles_;
  std::vector<double> doubles_;
};

// K = i(T - T†) as a Hermitian Pauli sum (anti-Hermiticity of T - T†
// verified through the transform).
PauliTermSum cluster_generator(const ClusterAmplitudes& t);

// Per-excitation generators i(E_mu - E_mu†) at unit amplitude, grouped by
// rank in serialization order; scaled by the amplitudes during state prep.
std::vector<PauliTermSum> excitation_generators(const ClusterAmplitudes& shape);

// Pseudo time evolution e^{-iK} ≈ (e^{-iK2 δ} e^{-iK1 δ})^{1/δ}, each
// excitation factor compiled exactly through its (mutually commuting)
// Pauli strings. 1/δ must be a positive integer.
HybridState prepare_ucc_state(const HybridState& reference, const ClusterAmplitudes& t,
                              double delta, CircuitTrace* trace = nullptr);

double ucc_energy(const ClusterAmplitudes& t, const PauliTermSum& h,
                  const HybridState& reference, double delta);

enum class GradientMode { commutator, finite_difference, both };

struct GradientResult {
  Eigen::VectorXd finite_difference;
  Eigen::VectorXd commutator;
  double max_discrepancy = 0.0;  // filled in mode both
};

// finite_difference: central differences on ucc_energy, step 1e-5.
// commutator: Hellmann-Feynman elements <φ|[H, E_mu - E_mu†]|φ> on the
// prepared state (first order in T for the Trotterized ansatz; descent is
// gated on the finite-difference gradient).
GradientResult ucc_gradient(const ClusterAmplitudes& t, const PauliTermSum& h,
                            const HybridState& reference, double delta, GradientMode mode);

struct OptimizerConfig {
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double min_step = 1e-12;
  double armijo_c = 1e-4;
  GradientMode gradient_mode = GradientMode::finite_difference;
  double tolerance = 1e-8;  // on |ΔE| between accepted iterates
  int max_iterations = 200;
  double delta = 1.0 / 16;  // Trotter slice for state prep
};

struct OptimIterate {
  int iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct OptimResult {
  ClusterAmplitudes amplitudes;
  double energy = 0.0;
  std::vector<OptimIterate> trace;  // accepted iterates, energies non-increasing
  bool converged = false;
  bool stagnated = false;
  HybridState state;  // optimized state, ready for phase estimation
};

// Gradient descent T ← T - a_k ∇E with backtracking on a_k; the accepted
// energy sequence is non-increasing by construction. Works on the
// electronic Hamiltonian (no nuclear-repulsion constant).
OptimResult quantum_assisted_optimize(const MolecularIntegrals& ints,
                                      const OptimizerConfig& config);

struct PesPeaConfig {
  double t_max = 64.0;
  int samples = 256;
  double max_abs_omega = 10.0;
};

struct PesRow {
  std::string label;
  double e_nuc = 0.0;
  double energy_opt = 0.0;        // electronic
  double energy_opt_total = 0.0;  // + V_N
  std::vector<SpectralLine> lines;  // PEA lines, electronic, + V_N applied in totals
  std::vector<double> line_totals;
  bool failed = false;
  std::string error;
};

// Optimize + phase-estimate per geometry file; failures are recorded per
// row and the sweep continues. Rows follow the input file order.
std::vector<PesRow> potential_energy_surface(const std::vector<std::string>& integral_files,
                                             const OptimizerConfig& config,
                                             const PesPeaConfig& pea);

}  // namespace tiqs
