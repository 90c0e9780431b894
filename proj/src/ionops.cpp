#include "tiqs/ionops.hpp"

#include <cmath>
#include <cstdio>

#include "tiqs/linalg.hpp"

namespace tiqs {

namespace {

constexpr double kLeakageThreshold = 1e-8;

void guard_leakage(const HybridState& state, int mode) {
  if (top_level_population(state, mode) > kLeakageThreshold)
    throw TruncationError("Fock population leaked into the top truncation level");
}

// R_a(θ) = exp(-iθ σ_a / 2)
Eigen::Matrix2cd axis_rotation(char axis, double theta) {
  const Eigen::Matrix2cd sigma = pauli_matrix(axis == 'x' ? 'X' : axis == 'y' ? 'Y' : 'Z');
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return c * Eigen::Matrix2cd::Identity() - cplx(0, s) * sigma;
}

void local_rotation(HybridState& state, int qubit, char axis, double theta,
                    CircuitTrace* trace) {
  apply_single_qubit_op(state, qubit, axis_rotation(axis, theta));
  if (trace) trace->add(std::string("r") + axis, {theta}, {qubit});
}

// Mode ladder operator on the truncated space.
Eigen::MatrixXcd annihilation(int d) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// σ+ = |1><0| and σ- in the global bit convention.
Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1;
  return m;
}

std::vector<int> resolve_subset(const HilbertLayout& layout, const std::vector<int>& qubits) {
  std::vector<int> subset = qubits;
  if (subset.empty())
    for (int q = 1; q <= layout.qubit_count; ++q) subset.push_back(q);
  for (int q : subset)
    if (q < 1 || q > layout.qubit_count) throw LayoutError("qubit index out of range");
  return subset;
}

struct Canonicalized {
  std::vector<int> support;              // 1-based, ascending
  std::vector<std::pair<int, std::pair<char, double>>> pre;  // (qubit, (axis, angle))
};

// Local rotations V with V P V† = Z ⊗ X ⊗ ... ⊗ X on the support.
Canonicalized canonicalize(const HilbertLayout& layout, const std::string& letters) {
  if (static_cast<int>(letters.size()) != layout.qubit_count)
    throw LayoutError("Pauli string length does not match the layout");
  Canonicalized c;
  for (int q = 1; q <= layout.qubit_count; ++q)
    if (letters[static_cast<std::size_t>(q - 1)] != 'I') c.support.push_back(q);
  if (c.support.empty())
    throw DomainError("all-identity Pauli string; use a global phase instead");
  for (std::size_t k = 0; k < c.support.size(); ++k) {
    const int q = c.support[k];
    const char letter = letters[static_cast<std::size_t>(q - 1)];
    if (k == 0) {
      if (letter == 'X') c.pre.push_back({q, {'y', -M_PI / 2}});
      else if (letter == 'Y') c.pre.push_back({q, {'x', M_PI / 2}});
    } else {
      if (letter == 'Y') c.pre.push_back({q, {'z', -M_PI / 2}});
      else if (letter == 'Z') c.pre.push_back({q, {'y', M_PI / 2}});
    }
  }
  return c;
}

}  // namespace

void CircuitTrace::add(std::string kind, std::vector<double> params, std::vector<int> targets) {
  ops.push_back({std::move(kind), std::move(params), std::move(targets)});
}

int CircuitTrace::ms_count() const {
  int n = 0;
  for (const auto& op : ops)
    if (op.kind == "ms") ++n;
  return n;
}

int CircuitTrace::local_rotation_count() const {
  int n = 0;
  for (const auto& op : ops)
    if (op.kind == "rx" || op.kind == "ry" || op.kind == "rz") ++n;
  return n;
}

std::string CircuitTrace::to_text() const {
  std::string out;
  char buf[64];
  for (const auto& op : ops) {
    out += op.kind;
    for (double p : op.params) {
      std::snprintf(buf, sizeof(buf), " %.17g", p);
      out += buf;
    }
    out += " |";
    for (int t : op.targets) {
      std::snprintf(buf, sizeof(buf), " %d", t);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void apply_pulse(HybridState& state, const LaserPulse& pulse, CircuitTrace* trace) {
  const HilbertLayout& L = state.layout;
  if (pulse.qubit < 1 || pulse.qubit > L.qubit_count)
    throw LayoutError("pulse qubit out of range");
  if (pulse.duration < 0) throw DomainError("pulse duration must be >= 0");
  if (pulse.lamb_dicke < 0) throw DomainError("Lamb-Dicke parameter must be >= 0");

  if (pulse.detuning == Sideband::carrier) {
    // exp(-i Ωt (cosφ σx + sinφ σy)), analytic
    const double area = pulse.rabi * pulse.duration;
    const Eigen::Matrix2cd axis = std::cos(pulse.phase) * pauli_matrix('X') +
                                  std::sin(pulse.phase) * pauli_matrix('Y');
    const Eigen::Matrix2cd u = std::cos(area) * Eigen::Matrix2cd::Identity() -
                               cplx(0, std::sin(area)) * axis;
    apply_single_qubit_op(state, pulse.qubit, u);
    if (trace) trace->add("pulse", {pulse.rabi, 0.0, pulse.phase, pulse.duration},
                          {pulse.qubit});
    return;
  }

  if (L.mode_count() == 0)
    throw LayoutError("sideband pulse requires at least one bosonic mode");
  if (pulse.mode < 1 || pulse.mode > L.mode_count())
    throw LayoutError("pulse mode out of range");
  const int d = L.mode_dims[static_cast<std::size_t>(pulse.mode - 1)];

  const Eigen::MatrixXcd a = annihilation(d);
  const Eigen::Matrix2cd sp = sigma_plus();
  const Eigen::Matrix2cd sm = sp.adjoint();
  const cplx eip = std::exp(cplx(0, pulse.phase));
  const cplx i(0, 1);
  const double g = pulse.lamb_dicke * pulse.rabi;
  Eigen::MatrixXcd h;
  if (pulse.detuning == Sideband::red)
    h = i * g * (eip * kron(sp, a) - std::conj(eip) * kron(sm, a.adjoint()));
  else
    h = i * g * (eip * kron(sp, a.adjoint()) - std::conj(eip) * kron(sm, a));
  Eigen::MatrixXcd u = exact_unitary(h, pulse.duration);
  apply_qubit_mode_op(state, pulse.qubit, pulse.mode, u);
  guard_leakage(state, pulse.mode);
  if (trace)
    trace->add("pulse",
               {pulse.rabi, pulse.detuning == Sideband::red ? -1.0 : 1.0, pulse.phase,
                pulse.duration, pulse.lamb_dicke},
               {pulse.qubit, pulse.mode});
}

void apply_ms(HybridState& state, const MsGate& gate, CircuitTrace* trace) {
  const HilbertLayout& L = state.layout;
  const std::vector<int> subset = resolve_subset(L, gate.qubits);
  if (subset.empty()) throw DomainError("MS gate needs at least one qubit");

  // S_φ = Σ cosφ σx + sinφ σy diagonalizes as a product of single-qubit
  // changes of basis; the gate is a phase on the joint eigenvalue
  // m = (#plus - #minus): exp(-iθ m^2 / 4).
  const cplx eip = std::exp(cplx(0, gate.phase));
  Eigen::Matrix2cd w;
  w << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0),
       eip / std::sqrt(2.0), -eip / std::sqrt(2.0);
  const Eigen::Matrix2cd wdag = w.adjoint();
  for (int q : subset) apply_single_qubit_op(state, q, wdag);

  std::uint64_t mask = 0;
  for (int q : subset) mask |= std::uint64_t{1} << L.bit_shift(q);
  const std::size_t bd = L.boson_dim();
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  const int nsub = static_cast<int>(subset.size());
  for (std::size_t i = 0; i < dim; ++i) {
    const std::uint64_t wbits = i / bd;
    const int k = static_cast<int>(__builtin_popcountll(wbits & mask));
    const double m = static_cast<double>(nsub - 2 * k);
    state.amp[static_cast<Eigen::Index>(i)] *= std::exp(cplx(0, -gate.theta * m * m / 4.0));
  }

  for (int q : subset) apply_single_qubit_op(state, q, w);
  if (trace) trace->add("ms", {gate.theta, gate.phase}, subset);
}

RnRule r_n_rule(int n_qubits) {
  if (n_qubits < 1) throw DomainError("R_N needs N >= 1");
  switch (n_qubits % 4) {
    case 1: return {'z', +1};   // N = 4m+1
    case 3: return {'z', -1};   // N = 4m-1
    case 0: return {'y', +1};   // N = 4m
    default: return {'y', -1};  // N = 4m-2
  }
}

Eigen::Matrix2cd r_n(int n_qubits, double phi) {
  const RnRule rule = r_n_rule(n_qubits);
  const Eigen::Matrix2cd sigma = pauli_matrix(rule.axis == 'z' ? 'Z' : 'Y');
  return std::cos(phi) * Eigen::Matrix2cd::Identity() +
         cplx(0, rule.sign * std::sin(phi)) * sigma;
}

void exp_pauli_string(HybridState& state, double phi, const std::string& letters,
                      CircuitTrace* trace) {
  const Canonicalized c = canonicalize(state.layout, letters);
  const int n = static_cast<int>(c.support.size());
  const int first = c.support.front();

  for (const auto& [q, rot] : c.pre) local_rotation(state, q, rot.first, rot.second, trace);

  apply_ms(state, {M_PI / 2, 0.0, c.support}, trace);
  const RnRule rule = r_n_rule(n);
  // exp(+i sign φ σ_axis) = R_axis(-2 sign φ)
  local_rotation(state, first, rule.axis, -2.0 * rule.sign * phi, trace);
  apply_ms(state, {-M_PI / 2, 0.0, c.support}, trace);

  for (auto it = c.pre.rbegin(); it != c.pre.rend(); ++it)
    local_rotation(state, it->first, it->second.first, -it->second.second, trace);
}

void exp_pauli_boson(HybridState& state, double theta, const std::string& letters,
                     int mode, CircuitTrace* trace) {
  const HilbertLayout& L = state.layout;
  if (mode < 1 || mode > L.mode_count()) throw LayoutError("target mode out of range");
  const Canonicalized c = canonicalize(L, letters);
  const int n = static_cast<int>(c.support.size());
  const int first = c.support.front();
  const int d = L.mode_dims[static_cast<std::size_t>(mode - 1)];

  for (const auto& [q, rot] : c.pre) local_rotation(state, q, rot.first, rot.second, trace);

  apply_ms(state, {M_PI / 2, 0.0, c.support}, trace);
  // replace R_N(φ) by exp(+i sign φ σ_axis ⊗ (a+a†)) with φ = -θ
  const RnRule rule = r_n_rule(n);
  const double phi = -theta;
  const Eigen::MatrixXcd pos = annihilation(d);
  const Eigen::MatrixXcd x = pos + pos.adjoint();
  const Eigen::MatrixXcd gen =
      -static_cast<double>(rule.sign) * phi *
      kron(pauli_matrix(rule.axis == 'z' ? 'Z' : 'Y'), x);  // e^{-i gen} = e^{+i sign φ σ x}
  apply_qubit_mode_op(state, first, mode, exact_unitary(gen, 1.0));
  guard_leakage(state, mode);
  if (trace) trace->add("pauli-boson", {phi}, {first, mode});
  apply_ms(state, {-M_PI / 2, 0.0, c.support}, trace);

  for (auto it = c.pre.rbegin(); it != c.pre.rend(); ++it)
    local_rotation(state, it->first, it->second.first, -it->second.second, trace);
}

void apply_mode_phase(HybridState& state, int mode, double angle, CircuitTrace* trace) {
  const HilbertLayout& L = state.layout;
  if (mode < 1 || mode > L.mode_count()) throw LayoutError("mode index out of range");
  const int d = L.mode_dims[static_cast<std::size_t>(mode - 1)];
  const std::size_t stride = L.mode_stride(mode);
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  for (std::size_t i = 0; i < dim; ++i) {
    const int f = static_cast<int>((i / stride) % static_cast<std::size_t>(d));
    state.amp[static_cast<Eigen::Index>(i)] *= std::exp(cplx(0, -angle * f));
  }
  if (trace) trace->add("modephase", {angle}, {mode});
}

void apply_dispersive_shift(HybridState& state, int qubit, int mode, double strength,
                            CircuitTrace* trace) {
  const HilbertLayout& L = state.layout;
  if (qubit < 1 || qubit > L.qubit_count) throw LayoutError("qubit index out of range");
  if (mode < 1 || mode > L.mode_count()) throw LayoutError("mode index out of range");
  const int d = L.mode_dims[static_cast<std::size_t>(mode - 1)];
  const std::size_t stride = L.mode_stride(mode);
  const std::uint64_t qbit = std::uint64_t{1} << L.bit_shift(qubit);
  const std::size_t bd = L.boson_dim();
  const std::size_t dim = static_cast<std::size_t>(state.amp.size());
  for (std::size_t i = 0; i < dim; ++i) {
    const int f = static_cast<int>((i / stride) % static_cast<std::size_t>(d));
    const double z = ((i / bd) & qbit) ? -1.0 : 1.0;  // Z|0> = +|0>
    state.amp[static_cast<Eigen::Index>(i)] *= std::exp(cplx(0, -strength * z * f));
  }
  if (trace) trace->add("dispersive", {strength}, {qubit, mode});
}

void apply_bichromatic(HybridState& state, int qubit, int mode, double area, double phase,
                       CircuitTrace* trace) {
  const HilbertLayout& L = state.layout;
  if (L.mode_count() == 0) throw LayoutError("bichromatic pulse requires a bosonic mode");
  if (mode < 1 || mode > L.mode_count()) throw LayoutError("mode index out of range");
  const int d = L.mode_dims[static_cast<std::size_t>(mode - 1)];
  const Eigen::MatrixXcd a = annihilation(d);
  const Eigen::MatrixXcd x = a + a.adjoint();
  const Eigen::Matrix2cd axis = std::cos(phase) * pauli_matrix('Y') -
                                std::sin(phase) * pauli_matrix('X');
  const Eigen::MatrixXcd h = kron(axis, x);
  apply_qubit_mode_op(state, qubit, mode, exact_unitary(h, area));
  guard_leakage(state, mode);
  if (trace) trace->add("bichromatic", {area, phase}, {qubit, mode});
}

}  // namespace tiqs
