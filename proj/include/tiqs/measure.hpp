#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tiqs/hilbert.hpp"

namespace tiqs {

// One-qubit encoding of a nonlocal spin correlator: rotate by
// e^{-iθ X⊗X⊗...} on the support at θ = π/4 after mapping the target
// string onto the canonical Y₁⊗X₂⊗...⊗X form, then read <σz> on the first
// support qubit. The conjugation identity carries the angle doubled
// (cos2θ / sin2θ), so the applied angle π/4 returns the pure correlator;
// the convention is pinned by the dense oracle in the test suite.
double measure_nonlocal(const HybridState& state, const std::string& letters);

// Correlator <P ⊗ (a+a†)> from the θ-derivative of the same one-qubit
// readout, taken by a central finite difference (default step 1e-4 rad).
double measure_pauli_boson(const HybridState& state, const std::string& letters, int mode,
                           double step = 1e-4);

// Ancilla coherence record g(t): the (1,0) off-diagonal of the reduced
// ancilla density matrix, g(t) = (1/2) Σ_k |α_k|^2 e^{-iω_k t}.
struct AncillaSeries {
  std::vector<double> t;
  std::vector<cplx> g;

  void validate() const;  // |g| <= 1/2 + 1e-9, matching sizes
};

enum class PeaMode { dense, trotter };

// Single-ancilla phase estimation: ancilla in |+>, controlled e^{-iHt},
// system traced out. PeaMode::trotter routes the controlled evolution
// through the compiled product formula instead of the dense propagator.
AncillaSeries phase_estimation_scan(const HybridState& input, const PauliTermSum& h,
                                    const std::vector<double>& t_grid,
                                    PeaMode mode = PeaMode::dense, int trotter_steps = 1);

struct SpectralLine {
  double omega = 0.0;
  double weight = 0.0;
};

// Classical Fourier extraction: windowed zero-padded DFT for peak
// positions (refined by local interpolation), least-squares refit of the
// raw series for the weights. max_abs_omega is the caller-declared
// spectral bound used for the Nyquist check.
std::vector<SpectralLine> extract_spectrum(const AncillaSeries& series, double max_abs_omega,
                                           double rel_threshold = 0.005);

// Weak-measurement estimate of <e|A|g>, in the gauge where
// <e|Q|g> = i q with q > 0. Exact ancilla tomography, O(λ) bias.
cplx weak_transition_element(const Eigen::VectorXcd& ground, const Eigen::VectorXcd& excited,
                             const PauliTermSum& a_op, double lambda,
                             const PauliTermSum& q_op);

}  // namespace tiqs
