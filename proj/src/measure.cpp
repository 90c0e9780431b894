#include "tiqs/measure.hpp"

#include <algorithm>
#include <cmath>

#include "tiqs/common.hpp"
#include "tiqs/ionops.hpp"
#include "tiqs/linalg.hpp"
#include "tiqs/trotter.hpp"

namespace tiqs {

namespace {

struct MeasurePrep {
  std::vector<int> support;
  std::string x_string;  // X on the support, I elsewhere
  std::string z_first;   // Z on the first support qubit
};

// Local rotations mapping the target string onto Y ⊗ X ⊗ ... ⊗ X:
// first letter X→Y via R_z(π/2), Z→Y via R_x(-π/2); others Y→X via
// R_z(-π/2), Z→X via R_y(π/2).
MeasurePrep prepare_readout_frame(HybridState& state, const std::string& letters) {
  const HilbertLayout& L = state.layout;
  if (static_cast<int>(letters.size()) != L.qubit_count)
    throw LayoutError("Pauli string length does not match the layout");
  MeasurePrep prep;
  for (int q = 1; q <= L.qubit_count; ++q)
    if (letters[static_cast<std::size_t>(q - 1)] != 'I') prep.support.push_back(q);
  if (prep.support.empty()) throw DomainError("cannot measure the identity string");

  const auto rot = [&](int q, char axis, double angle) {
    const Eigen::Matrix2cd sigma =
        pauli_matrix(axis == 'x' ? 'X' : axis == 'y' ? 'Y' : 'Z');
    const Eigen::Matrix2cd u = std::cos(angle / 2) * Eigen::Matrix2cd::Identity() -
                               cplx(0, std::sin(angle / 2)) * sigma;
    apply_single_qubit_op(state, q, u);
  };

  for (std::size_t k = 0; k < prep.support.size(); ++k) {
    const int q = prep.support[k];
    const char letter = letters[static_cast<std::size_t>(q - 1)];
    if (k == 0) {
      if (letter == 'X') rot(q, 'z', M_PI / 2);
      else if (letter == 'Z') rot(q, 'x', -M_PI / 2);
    } else {
      if (letter == 'Y') rot(q, 'z', -M_PI / 2);
      else if (letter == 'Z') rot(q, 'y', M_PI / 2);
    }
  }

  prep.x_string.assign(static_cast<std::size_t>(L.qubit_count), 'I');
  prep.z_first = prep.x_string;
  for (int q : prep.support) prep.x_string[static_cast<std::size_t>(q - 1)] = 'X';
  prep.z_first[static_cast<std::size_t>(prep.support.front() - 1)] = 'Z';
  return prep;
}

}  // namespace

double measure_nonlocal(const HybridState& state, const std::string& letters) {
  state.check_normalized(1e-10);
  HybridState psi = state;
  const MeasurePrep prep = prepare_readout_frame(psi, letters);
  exp_pauli_string(psi, -M_PI / 4, prep.x_string);
  return expectation(psi, PauliTermSum(psi.layout.qubit_count, {{1.0, prep.z_first}}));
}

double measure_pauli_boson(const HybridState& state, const std::string& letters, int mode,
                           double step) {
  state.check_normalized(1e-10);
  if (mode < 1 || mode > state.layout.mode_count())
    throw LayoutError("target mode out of range");
  HybridState framed = state;
  const MeasurePrep prep = prepare_readout_frame(framed, letters);
  const PauliTermSum readout(framed.layout.qubit_count, {{1.0, prep.z_first}});

  const auto protocol = [&](double theta) {
    HybridState psi = framed;
    exp_pauli_boson(psi, theta, prep.x_string, mode);
    return expectation(psi, readout);
  };
  const double derivative = (protocol(step) - protocol(-step)) / (2 * step);
  // d/dθ <σz>|0 = 2 <(Y⊗X⊗...)(a+a†)>, pinned by the dense oracle
  return derivative / 2.0;
}

void AncillaSeries::validate() const {
  if (t.size() != g.size()) throw DomainError("ancilla series sizes do not match");
  for (const cplx& v : g)
    if (std::abs(v) > 0.5 + 1e-9)
      throw DomainError("ancilla coherence exceeds the 1/2 bound");
}

AncillaSeries phase_estimation_scan(const HybridState& input, const PauliTermSum& h,
                                    const std::vector<double>& t_grid, PeaMode mode,
                                    int trotter_steps) {
  input.check_normalized(1e-10);
  if (t_grid.size() >= 2) {
    const double dt = t_grid[1] - t_grid[0];
    for (std::size_t k = 1; k < t_grid.size(); ++k)
      if (std::abs((t_grid[k] - t_grid[k - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
        throw SamplingError("phase-estimation scan needs a uniform time grid");
  }

  AncillaSeries series;
  series.t = t_grid;
  series.g.resize(t_grid.size());

  const Eigen::Index dim = input.amp.size();
  if (mode == PeaMode::dense) {
    Propagator prop(operator_dense(h, input.layout));
    parallel_for(t_grid.size(), [&](std::size_t k) {
      // ancilla ⊗ system, ancilla most significant: |χ> = (|0>ψ + |1>Uψ)/√2
      Eigen::VectorXcd chi(2 * dim);
      chi.head(dim) = input.amp / std::sqrt(2.0);
      chi.tail(dim) = prop.apply(t_grid[k], input.amp) / std::sqrt(2.0);
      // trace out the system: ρ₁₀ = Σ_s χ[1,s] conj(χ[0,s])
      cplx rho10 = 0.0;
      for (Eigen::Index s = 0; s < dim; ++s) rho10 += chi[dim + s] * std::conj(chi[s]);
      series.g[k] = rho10;
    });
  } else {
    parallel_for(t_grid.size(), [&](std::size_t k) {
      HybridState evolved =
          trotter_evolve(input, h, TrotterPlan::make(h, trotter_steps, t_grid[k]));
      Eigen::VectorXcd chi(2 * dim);
      chi.head(dim) = input.amp / std::sqrt(2.0);
      chi.tail(dim) = evolved.amp / std::sqrt(2.0);
      cplx rho10 = 0.0;
      for (Eigen::Index s = 0; s < dim; ++s) rho10 += chi[dim + s] * std::conj(chi[s]);
      series.g[k] = rho10;
    });
  }
  series.validate();
  return series;
}

std::vector<SpectralLine> extract_spectrum(const AncillaSeries& series, double max_abs_omega,
                                           double rel_threshold) {
  series.validate();
  const std::size_t n = series.t.size();
  if (n < 64) throw SamplingError("spectrum extraction needs at least 64 samples");
  const double dt = series.t[1] - series.t[0];
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs((series.t[k] - series.t[k - 1]) - dt) > 1e-9 * std::max(1.0, dt))
      throw SamplingError("spectrum extraction needs a uniform time grid");
  const double nyquist = M_PI / dt;
  if (nyquist < max_abs_omega)
    throw SamplingError("time grid violates the Nyquist bound for the declared range");

  // f(t) = 2 g(t) = Σ_k w_k e^{-iω_k t}; Blackman window keeps the
  // sidelobes of a dominant line below the pick threshold.
  std::vector<cplx> f(n);
  std::vector<double> window(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = 2 * M_PI * m / (n - 1);
    window[m] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2 * x);
    f[m] = 2.0 * series.g[m] * window[m];
  }

  const std::size_t nfine = 8 * n;
  const double domega = 2 * nyquist / static_cast<double>(nfine);
  std::vector<double> mag(nfine);
  std::vector<double> omegas(nfine);
  parallel_for(nfine, [&](std::size_t j) {
    const double w = -nyquist + domega * static_cast<double>(j);
    cplx s = 0.0;
    for (std::size_t m = 0; m < n; ++m) s += f[m] * std::exp(cplx(0, w * series.t[m]));
    omegas[j] = w;
    mag[j] = std::abs(s);
  });

  const double peak_max = *std::max_element(mag.begin(), mag.end());
  if (peak_max <= 0) return {};

  // aliasing guard: spectral mass at the grid edge
  const double edge = std::max({mag[0], mag[1], mag[nfine - 2], mag[nfine - 1]});
  if (edge > 0.01 * peak_max)
    throw SamplingError("spectral mass at the Nyquist edge exceeds 1%; sampling rate too low");

  std::vector<double> centers;
  for (std::size_t j = 1; j + 1 < nfine; ++j) {
    if (mag[j] > mag[j - 1] && mag[j] >= mag[j + 1] && mag[j] > rel_threshold * peak_max) {
      const double denom = mag[j - 1] - 2 * mag[j] + mag[j + 1];
      double shift = 0.0;
      if (std::abs(denom) > 1e-30) shift = 0.5 * (mag[j - 1] - mag[j + 1]) / denom;
      shift = std::clamp(shift, -0.5, 0.5);
      centers.push_back(omegas[j] + shift * domega);
    }
  }
  if (centers.empty()) return {};

  // least-squares weights on the raw (unwindowed) series:
  // 2 g(t_m) ≈ Σ_k w_k e^{-iω_k t_m}, w real >= 0
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(n);
  const Eigen::Index cols = static_cast<Eigen::Index>(centers.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (std::size_t m = 0; m < n; ++m) {
    const cplx fm = 2.0 * series.g[m];
    b[static_cast<Eigen::Index>(2 * m)] = fm.real();
    b[static_cast<Eigen::Index>(2 * m + 1)] = fm.imag();
    for (Eigen::Index k = 0; k < cols; ++k) {
      const cplx e = std::exp(cplx(0, -centers[static_cast<std::size_t>(k)] * series.t[m]));
      a(static_cast<Eigen::Index>(2 * m), k) = e.real();
      a(static_cast<Eigen::Index>(2 * m + 1), k) = e.imag();
    }
  }
  Eigen::VectorXd w = a.colPivHouseholderQr().solve(b);

  // spurious window-leakage candidates refit to ~zero weight; drop them
  double weight_sum = 0.0;
  for (Eigen::Index k = 0; k < cols; ++k) weight_sum += std::max(0.0, w[k]);
  std::vector<SpectralLine> lines;
  for (Eigen::Index k = 0; k < cols; ++k) {
    double weight = std::max(0.0, w[k]);
    if (weight < rel_threshold * std::max(weight_sum, 1e-12)) continue;
    lines.push_back({centers[static_cast<std::size_t>(k)], weight});
  }
  std::sort(lines.begin(), lines.end(),
            [](const SpectralLine& x, const SpectralLine& y) { return x.omega < y.omega; });
  return lines;
}

cplx weak_transition_element(const Eigen::VectorXcd& ground, const Eigen::VectorXcd& excited,
                             const PauliTermSum& a_op, double lambda,
                             const PauliTermSum& q_op) {
  if (lambda <= 0 || lambda > 0.1)
    throw DomainError("perturbation strength must lie in (0, 0.1]");
  const Eigen::MatrixXcd qdense = operator_dense(q_op);
  const Eigen::MatrixXcd adense = operator_dense(a_op);
  if (ground.size() != qdense.rows() || excited.size() != qdense.rows())
    throw LayoutError("state dimension does not match the operators");

  const cplx c = excited.dot(qdense * ground);  // <e|Q|g>
  if (std::abs(c) < 1e-12)
    throw ProtocolError("<e|Q|g> = iq must be nonzero for the weak-measurement protocol");
  // gauge the excited-state phase so <e|Q|g> = i q with q > 0
  const double alpha = std::arg(c) - M_PI / 2;
  const Eigen::VectorXcd e_fixed = excited * std::exp(cplx(0, alpha));

  const Eigen::VectorXcd i_state = exact_unitary(qdense, lambda) * ground;
  const Eigen::VectorXcd ua_i = exact_unitary(adense, lambda) * i_state;

  const cplx a0 = e_fixed.dot(i_state);
  const cplx a1 = e_fixed.dot(ua_i);
  const double post_prob = 0.5 * (std::norm(a0) + std::norm(a1));
  if (post_prob < 1e-12)
    throw DegenerateError("post-selection probability onto |e> is vanishing");
  if (std::abs(a0) < 1e-14)
    throw DegenerateError("reference amplitude vanished; cannot fix the ancilla phase");

  // tomography reads the ancilla pair up to a global phase; anchor it on
  // the |0> component, which is q λ > 0 to first order
  const cplx anchor = std::exp(cplx(0, -std::arg(a0)));
  const cplx b0 = a0 * anchor;
  const cplx b1 = a1 * anchor;
  return cplx(0, 1) * (b1 - b0) / lambda;
}

}  // namespace tiqs
