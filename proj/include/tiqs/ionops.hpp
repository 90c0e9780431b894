#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tiqs/hilbert.hpp"

namespace tiqs {

// The three resonant ion-phonon interactions (hbar = 1, coefficients in
// the energy unit of the ingested problem):
//   carrier  H_c = Ω (σ+ e^{iφ} + σ- e^{-iφ})
//   red      H_r = i η Ω (σ+ a  e^{iφ} - σ- a† e^{-iφ})
//   blue     H_b = i η Ω (σ+ a† e^{iφ} - σ- a  e^{-iφ})
// with σ+ = |↑><↓| = |1><0| in the global bit convention.
enum class Sideband { carrier, red, blue };

struct LaserPulse {
  double rabi = 0.0;
  Sideband detuning = Sideband::carrier;
  double phase = 0.0;
  double lamb_dicke = 0.0;
  double duration = 0.0;
  int qubit = 1;  // 1-based
  int mode = 1;   // 1-based, sidebands only
};

// U_MS(θ,φ) = exp[-iθ (cosφ S_x + sinφ S_y)^2 / 4] on the qubit subset
// (empty subset = all qubits).
struct MsGate {
  double theta = 0.0;
  double phase = 0.0;
  std::vector<int> qubits;
};

struct CircuitOp {
  std::string kind;            // ms, rx, ry, rz, pulse, pauli-boson, dispersive, modephase
  std::vector<double> params;
  std::vector<int> targets;
};

// Ordered gate record, one op per line in the text export. Feeds the
// resource estimator and the golden-file tests.
struct CircuitTrace {
  std::vector<CircuitOp> ops;

  void add(std::string kind, std::vector<double> params, std::vector<int> targets);
  int ms_count() const;
  int local_rotation_count() const;
  std::string to_text() const;
};

void apply_pulse(HybridState& state, const LaserPulse& pulse, CircuitTrace* trace = nullptr);
void apply_ms(HybridState& state, const MsGate& gate, CircuitTrace* trace = nullptr);

// R_N(φ) case rule of the MS sandwich: axis 'z' or 'y', result is
// exp(+i sign φ σ_axis) on the first qubit of the string.
struct RnRule {
  char axis;
  int sign;
};
RnRule r_n_rule(int n_qubits);
Eigen::Matrix2cd r_n(int n_qubits, double phi);

// Applies e^{+iφ P} for a Pauli string P by (i) local basis changes onto
// the canonical Z⊗X⊗...⊗X form, (ii) the U_MS(-π/2,0)·R_N(φ)·U_MS(π/2,0)
// sandwich on the support, (iii) the inverse basis change.
// Basis-change convention (fixed): X→Z via a -π/2 rotation about Y,
// Y→Z via a π/2 rotation about X, Y→X via a -π/2 rotation about Z,
// Z→X via a π/2 rotation about Y, where R_a(θ) = exp(-iθ σ_a/2).
void exp_pauli_string(HybridState& state, double phi, const std::string& letters,
                      CircuitTrace* trace = nullptr);

// Applies e^{-iθ P ⊗ (a + a†)} on the target mode: same sandwich with the
// local rotation replaced by the spin-conditioned displacement.
void exp_pauli_boson(HybridState& state, double theta, const std::string& letters,
                     int mode, CircuitTrace* trace = nullptr);

// --- extra pulse-level primitives for the vibronic protocol ---

// e^{-i angle a†a}: free phase evolution of one mode.
void apply_mode_phase(HybridState& state, int mode, double angle, CircuitTrace* trace = nullptr);

// e^{-i strength σ_z a†a}: dispersive Jaynes-Cummings shift (detuned red
// sideband with the residual local term removed by a carrier rotation).
void apply_dispersive_shift(HybridState& state, int qubit, int mode, double strength,
                            CircuitTrace* trace = nullptr);

// Simultaneous red+blue drive with equal Rabi and Lamb-Dicke and common
// laser phase φ: H = η Ω (cosφ σ_y - sinφ σ_x)(a + a†). area = η Ω t.
void apply_bichromatic(HybridState& state, int qubit, int mode, double area, double phase,
                       CircuitTrace* trace = nullptr);

}  // namespace tiqs
