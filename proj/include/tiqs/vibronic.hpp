#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tiqs/hilbert.hpp"

namespace tiqs {

// Two-surface spin-boson model. The electronic qubit uses |0> = ground
// surface, |1> = excited surface; excited-surface modes are related to the
// ground ones by b_k = Σ_j s_kj a_j + λ_k. Δ_g and Δ_e are the bare
// electronic offsets (phonon zero-point energy excluded).
struct VibronicModel {
  double delta_g = 0.0;
  double delta_e = 0.0;
  std::vector<double> omega_g;  // ground-surface frequencies, > 0
  std::vector<double> omega_e;  // excited-surface frequencies, > 0
  Eigen::MatrixXd duschinsky;   // s, orthogonal (identity when rotations off)
  std::vector<double> lambda;   // dimensionless shifts
  double mu_ge = 1.0;           // Condon transition dipole
  double temperature = 0.0;     // builds Boltzmann p_n when no explicit list
  std::vector<double> thermal_weights;  // optional explicit p_n (row-major
                                        // over mode occupations)

  int n_modes() const { return static_cast<int>(omega_g.size()); }
  void validate() const;

  // flat key-value text: scalar keys delta_g, delta_e, mu_ge, temperature;
  // array keys omega_g, omega_e, lambda, p; key s holds the row-major
  // Duschinsky matrix.
  static VibronicModel load(const std::string& path);
};

// Thermal weights over ground-surface phonon levels within the truncation,
// normalized on the truncated space.
std::vector<double> thermal_weights(const VibronicModel& model, const std::vector<int>& dims);

bool truncation_heuristic_ok(const VibronicModel& model, const std::vector<int>& dims);

// Dense Hermitian Hamiltonian on (electronic qubit ⊗ modes), basis index
// = bit * Π d + fock mixed-radix, matching HilbertLayout{1, dims}.
Eigen::MatrixXcd build_hamiltonian(const VibronicModel& model, const std::vector<int>& dims,
                                   std::vector<std::string>* warnings = nullptr);

// C_μμ(t) = Σ_n p_n μ² <n,g| e^{iHt} σ_x e^{-iHt} σ_x |n,g>.
std::vector<cplx> dipole_correlation(const VibronicModel& model,
                                     const std::vector<double>& t_grid,
                                     const std::vector<int>& dims);

struct SpectrumPeak {
  double omega = 0.0;
  double weight = 0.0;  // Lorentzian line weight, Σ ≈ μ²
};

struct SpectrumResult {
  std::vector<double> omega;
  std::vector<double> sigma;
  std::vector<SpectrumPeak> peaks;
  double sum_rule_integral = 0.0;  // ∫ σ dω / 2π, equals C(0) = μ² up to FT error
  double bin_width = 0.0;
};

// Discrete transform of the damped, conjugate-symmetrized series,
// σ(ω) = ∫ e^{iωt} C(t) e^{-γ|t|} dt, reported against the transition
// frequency (positive peaks at E_e - E_g). Line weights are read off the
// Lorentzian peak heights (w = σ_max γ / 2).
SpectrumResult absorption_spectrum(const std::vector<double>& t_grid,
                                   const std::vector<cplx>& correlation, double gamma,
                                   double rel_threshold = 0.01);

// Scanned potential surface on a regular tensor grid (mass-weighted
// coordinates assumed).
struct SurfaceScan {
  std::vector<std::vector<double>> axes;  // per-coordinate grid values
  std::vector<double> energies;           // row-major over the axes

  std::size_t point_count() const;
  double energy_at(const std::vector<int>& indices) const;
};

struct HarmonicFit {
  Eigen::VectorXd minimum;        // refined R*
  double energy_min = 0.0;        // quadratic-model energy at R*
  Eigen::MatrixXd hessian;        // ∂²E/∂R∂R by central differences
  std::vector<double> frequencies;  // ω_α = sqrt(eig(Hessian)), unit mass
  Eigen::MatrixXd normal_modes;   // columns are the eigenvectors
};

HarmonicFit harmonic_fit(const SurfaceScan& scan);

// Digital-analog single-mode protocol on two ions ⊗ one mode: dispersive
// shift for Ω(σ_z) a†a, carrier-conjugated bichromatic drives for the
// conditional displacement, the second ion (prepared in a σ_z eigenstate)
// supplying the unconditional (a+a†) term. Layout: 2 qubits ⊗ 1 mode,
// qubit 1 electronic.
struct ProtocolResult {
  HybridState state;
  double fidelity = 0.0;  // vs dense e^{-iHt} on the (qubit 1 ⊗ mode) factor
};

ProtocolResult ion_protocol_evolve(const VibronicModel& model, double t, int slices,
                                   const HybridState& initial);

}  // namespace tiqs
