#include "tiqs/vibronic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tiqs/common.hpp"
#include "tiqs/ionops.hpp"
#include "tiqs/linalg.hpp"

namespace tiqs {

namespace {

Eigen::MatrixXcd mode_annihilation(int d) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// a_j embedded on the full boson space (mode j 0-based, mixed radix,
// mode 0 most significant).
Eigen::MatrixXcd embedded_annihilation(const std::vector<int>& dims, int j) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int m = 0; m < static_cast<int>(dims.size()); ++m) {
    const int d = dims[static_cast<std::size_t>(m)];
    out = kron(out, m == j ? mode_annihilation(d)
                           : Eigen::MatrixXcd::Identity(d, d));
  }
  return out;
}

std::size_t boson_dim(const std::vector<int>& dims) {
  std::size_t bd = 1;
  for (int d : dims) bd *= static_cast<std::size_t>(d);
  return bd;
}

}  // namespace

void VibronicModel::validate() const {
  const int k = n_modes();
  if (k < 1) throw DomainError("vibronic model needs at least one mode");
  if (static_cast<int>(omega_e.size()) != k || static_cast<int>(lambda.size()) != k)
    throw DomainError("omega_e and lambda must match the mode count");
  for (double w : omega_g)
    if (w <= 0) throw DomainError("ground frequencies must be positive");
  for (double w : omega_e)
    if (w <= 0) throw DomainError("excited frequencies must be positive");
  if (duschinsky.rows() != k || duschinsky.cols() != k)
    throw DomainError("Duschinsky matrix must be K x K");
  const double defect =
      (duschinsky.transpose() * duschinsky - Eigen::MatrixXd::Identity(k, k))
          .cwiseAbs()
          .maxCoeff();
  if (defect > 1e-8) throw DomainError("Duschinsky matrix must be orthogonal within 1e-8");
  if (temperature < 0) throw DomainError("temperature must be >= 0");
  if (!thermal_weights.empty()) {
    double sum = 0;
    for (double p : thermal_weights) {
      if (p < 0) throw DomainError("thermal weights must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw DomainError("explicit thermal weights must sum to 1");
  }
}

VibronicModel VibronicModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  std::map<std::string, std::vector<double>> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (vals.empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": key without values");
    values[key] = std::move(vals);
  }
  const auto scalar = [&](const std::string& key, double fallback, bool required) {
    auto it = values.find(key);
    if (it == values.end()) {
      if (required) throw ParseError(path + ": missing key " + key);
      return fallback;
    }
    if (it->second.size() != 1) throw ParseError(path + ": key " + key + " must be scalar");
    return it->second[0];
  };
  VibronicModel model;
  model.delta_g = scalar("delta_g", 0.0, false);
  model.delta_e = scalar("delta_e", 0.0, true);
  if (!values.count("omega_g")) throw ParseError(path + ": missing key omega_g");
  model.omega_g = values["omega_g"];
  model.omega_e = values.count("omega_e") ? values["omega_e"] : model.omega_g;
  if (!values.count("lambda")) throw ParseError(path + ": missing key lambda");
  model.lambda = values["lambda"];
  const int k = model.n_modes();
  model.duschinsky = Eigen::MatrixXd::Identity(k, k);
  if (values.count("s")) {
    const auto& flat = values["s"];
    if (static_cast<int>(flat.size()) != k * k)
      throw ParseError(path + ": key s must hold K*K row-major entries");
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c)
        model.duschinsky(r, c) = flat[static_cast<std::size_t>(r * k + c)];
  }
  model.mu_ge = scalar("mu_ge", 1.0, false);
  model.temperature = scalar("temperature", 0.0, false);
  if (values.count("p")) model.thermal_weights = values["p"];
  model.validate();
  return model;
}

std::vector<double> thermal_weights(const VibronicModel& model, const std::vector<int>& dims) {
  const std::size_t bd = boson_dim(dims);
  if (!model.thermal_weights.empty()) {
    if (model.thermal_weights.size() > bd)
      throw DomainError("explicit thermal weights exceed the truncated boson space");
    std::vector<double> padded(bd, 0.0);
    std::copy(model.thermal_weights.begin(), model.thermal_weights.end(), padded.begin());
    return padded;
  }
  std::vector<double> p(bd, 0.0);
  if (model.temperature <= 0) {
    p[0] = 1.0;
    return p;
  }
  double z = 0.0;
  for (std::size_t idx = 0; idx < bd; ++idx) {
    std::size_t rem = idx;
    double energy = 0.0;
    for (int m = static_cast<int>(dims.size()) - 1; m >= 0; --m) {
      const int d = dims[static_cast<std::size_t>(m)];
      energy += model.omega_g[static_cast<std::size_t>(m)] *
                static_cast<double>(rem % static_cast<std::size_t>(d));
      rem /= static_cast<std::size_t>(d);
    }
    p[idx] = std::exp(-energy / model.temperature);
    z += p[idx];
  }
  for (double& v : p) v /= z;
  return p;
}

bool truncation_heuristic_ok(const VibronicModel& model, const std::vector<int>& dims) {
  const double lmax = *std::max_element(model.lambda.begin(), model.lambda.end(),
                                        [](double a, double b) {
                                          return std::abs(a) < std::abs(b);
                                        });
  const double need = 4.0 * lmax * lmax + 10.0;
  for (int d : dims)
    if (d < need) return false;
  return true;
}

Eigen::MatrixXcd build_hamiltonian(const VibronicModel& model, const std::vector<int>& dims,
                                   std::vector<std::string>* warnings) {
  model.validate();
  if (static_cast<int>(dims.size()) != model.n_modes())
    throw DomainError("truncation list must match the mode count");
  for (int d : dims)
    if (d < 2) throw DomainError("mode truncation must be >= 2");
  if (!truncation_heuristic_ok(model, dims) && warnings)
    warnings->push_back("Fock truncation below the 4λ²+10 heuristic; watch for leakage");

  const int k = model.n_modes();
  const Eigen::Index bd = static_cast<Eigen::Index>(boson_dim(dims));

  // ground-surface phonons: Σ ω_g,k a†a
  Eigen::MatrixXcd hg = Eigen::MatrixXcd::Zero(bd, bd);
  for (int j = 0; j < k; ++j) {
    const Eigen::MatrixXcd a = embedded_annihilation(dims, j);
    hg += model.omega_g[static_cast<std::size_t>(j)] * (a.adjoint() * a);
  }
  // excited surface: Σ_k ω_e,k b†b with b_k = Σ_j s_kj a_j + λ_k
  Eigen::MatrixXcd he = Eigen::MatrixXcd::Zero(bd, bd);
  for (int kk = 0; kk < k; ++kk) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(bd, bd);
    for (int j = 0; j < k; ++j)
      b += model.duschinsky(kk, j) * embedded_annihilation(dims, j);
    b += model.lambda[static_cast<std::size_t>(kk)] *
         Eigen::MatrixXcd::Identity(bd, bd);
    he += model.omega_e[static_cast<std::size_t>(kk)] * (b.adjoint() * b);
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * bd, 2 * bd);
  h.topLeftCorner(bd, bd) =
      hg + model.delta_g * Eigen::MatrixXcd::Identity(bd, bd);
  h.bottomRightCorner(bd, bd) =
      he + model.delta_e * Eigen::MatrixXcd::Identity(bd, bd);
  if (hermiticity_defect(h) > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw SymmetryError("vibronic Hamiltonian failed the Hermiticity check");
  return h;
}

std::vector<cplx> dipole_correlation(const VibronicModel& model,
                                     const std::vector<double>& t_grid,
                                     const std::vector<int>& dims) {
  model.validate();
  const std::vector<double> p = thermal_weights(model, dims);
  const Eigen::MatrixXcd h = build_hamiltonian(model, dims);
  const Eigen::Index bd = h.rows() / 2;
  Propagator prop(h);

  std::vector<std::size_t> support;
  for (std::size_t idx = 0; idx < p.size(); ++idx)
    if (p[idx] > 1e-12) support.push_back(idx);
  // p_n must live inside the truncation with room for the top level
  for (std::size_t idx : support)
    if (static_cast<Eigen::Index>(idx) >= bd)
      throw TruncationError("thermal support exceeds the Fock truncation");

  const double mu2 = model.mu_ge * model.mu_ge;
  std::vector<cplx> c(t_grid.size(), 0.0);
  parallel_for(t_grid.size(), [&](std::size_t ti) {
    const double t = t_grid[ti];
    cplx acc = 0.0;
    for (std::size_t idx : support) {
      // |n, g> has the electronic bit 0: index = idx in the upper block
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * bd);
      psi[static_cast<Eigen::Index>(idx)] = 1.0;
      // σ_x flips the electronic bit
      Eigen::VectorXcd xpsi = Eigen::VectorXcd::Zero(2 * bd);
      xpsi.tail(bd) = psi.head(bd);
      xpsi.head(bd) = psi.tail(bd);
      const Eigen::VectorXcd left = prop.apply(t, psi);
      const Eigen::VectorXcd right = prop.apply(t, xpsi);
      // <ψ| e^{iHt} σx e^{-iHt} σx |ψ> = <e^{-iHt}ψ| σx |e^{-iHt} σx ψ>
      Eigen::VectorXcd xright(2 * bd);
      xright.head(bd) = right.tail(bd);
      xright.tail(bd) = right.head(bd);
      acc += p[idx] * left.dot(xright);
    }
    c[ti] = mu2 * acc;
  });
  return c;
}

SpectrumResult absorption_spectrum(const std::vector<double>& t_grid,
                                   const std::vector<cplx>& correlation, double gamma,
                                   double rel_threshold) {
  const std::size_t n = t_grid.size();
  if (n < 16 || correlation.size() != n)
    throw DomainError("spectrum needs a correlation series on its time grid");
  if (std::abs(t_grid[0]) > 1e-12) throw DomainError("time grid must start at t = 0");
  const double dt = t_grid[1] - t_grid[0];
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs((t_grid[k] - t_grid[k - 1]) - dt) > 1e-9 * std::max(1.0, dt))
      throw DomainError("time grid must be uniform");
  if (gamma <= 0) throw DomainError("damping must be positive");
  const double t_max = t_grid.back();
  const double c0 = std::abs(correlation[0]);
  if (std::abs(correlation.back()) * std::exp(-gamma * t_max) >= 1e-4 * std::max(c0, 1e-300))
    throw WindowingError("series has not decayed below 1e-4 of C(0) at t_max");

  // two-sided transform with C(-t) = C(t)*: σ(ω) is real by construction
  const double nyquist = M_PI / dt;
  const std::size_t nw = 4 * n;
  SpectrumResult result;
  result.omega.resize(nw);
  result.sigma.resize(nw);
  result.bin_width = 2 * nyquist / static_cast<double>(nw);
  parallel_for(nw, [&](std::size_t j) {
    const double w = -nyquist + result.bin_width * static_cast<double>(j);
    double acc = std::real(correlation[0]) * dt;
    for (std::size_t m = 1; m < n; ++m) {
      const double weight = (m + 1 == n) ? 0.5 : 1.0;  // trapezoid end
      const cplx term =
          correlation[m] * std::exp(-gamma * t_grid[m]) * std::exp(cplx(0, w * t_grid[m]));
      acc += 2.0 * weight * dt * term.real();
    }
    result.omega[j] = w;
    result.sigma[j] = acc;
  });

  double total = 0.0;
  for (double s : result.sigma) total += s;
  result.sum_rule_integral = total * result.bin_width / (2 * M_PI);

  const double sigma_max = *std::max_element(result.sigma.begin(), result.sigma.end());
  std::vector<double> heights;
  for (std::size_t j = 1; j + 1 < nw; ++j) {
    if (result.sigma[j] > result.sigma[j - 1] && result.sigma[j] >= result.sigma[j + 1] &&
        result.sigma[j] > rel_threshold * sigma_max) {
      const double denom = result.sigma[j - 1] - 2 * result.sigma[j] + result.sigma[j + 1];
      double shift = 0.0;
      double height = result.sigma[j];
      if (std::abs(denom) > 1e-30) {
        shift = 0.5 * (result.sigma[j - 1] - result.sigma[j + 1]) / denom;
        shift = std::clamp(shift, -0.5, 0.5);
        height = result.sigma[j] - 0.25 * (result.sigma[j - 1] - result.sigma[j + 1]) * shift;
      }
      result.peaks.push_back({result.omega[j] + shift * result.bin_width, 0.0});
      heights.push_back(height);
    }
  }
  // peak height -> line weight (w = σ_max γ/2), with the Lorentzian tails
  // of the other lines subtracted iteratively so faint lines stay accurate
  for (std::size_t k = 0; k < result.peaks.size(); ++k)
    result.peaks[k].weight = heights[k] * gamma / 2.0;
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> corrected(result.peaks.size());
    for (std::size_t k = 0; k < result.peaks.size(); ++k) {
      double tail = 0.0;
      for (std::size_t j = 0; j < result.peaks.size(); ++j) {
        if (j == k) continue;
        const double d = result.peaks[k].omega - result.peaks[j].omega;
        tail += 2 * result.peaks[j].weight * gamma / (d * d + gamma * gamma);
      }
      corrected[k] = std::max(0.0, (heights[k] - tail) * gamma / 2.0);
    }
    for (std::size_t k = 0; k < result.peaks.size(); ++k)
      result.peaks[k].weight = corrected[k];
  }
  return result;
}

std::size_t SurfaceScan::point_count() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.size();
  return n;
}

double SurfaceScan::energy_at(const std::vector<int>& indices) const {
  if (indices.size() != axes.size()) throw DomainError("index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t d = 0; d < axes.size(); ++d) {
    if (indices[d] < 0 || indices[d] >= static_cast<int>(axes[d].size()))
      throw DomainError("scan index out of range");
    flat = flat * axes[d].size() + static_cast<std::size_t>(indices[d]);
  }
  return energies[flat];
}

HarmonicFit harmonic_fit(const SurfaceScan& scan) {
  const int dim = static_cast<int>(scan.axes.size());
  if (dim < 1) throw SamplingError("surface scan has no coordinates");
  if (scan.energies.size() != scan.point_count())
    throw DomainError("energy tensor does not match the grid");
  std::vector<double> h(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    const auto& axis = scan.axes[static_cast<std::size_t>(d)];
    if (axis.size() < 3)
      throw SamplingError("harmonic fit needs at least 3 points per coordinate");
    const double step = axis[1] - axis[0];
    for (std::size_t k = 1; k < axis.size(); ++k)
      if (std::abs((axis[k] - axis[k - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step)))
        throw SamplingError("harmonic fit needs uniform axes");
    h[static_cast<std::size_t>(d)] = step;
  }

  // grid minimum
  std::size_t best = 0;
  for (std::size_t k = 1; k < scan.energies.size(); ++k)
    if (scan.energies[k] < scan.energies[best]) best = k;
  std::vector<int> center(static_cast<std::size_t>(dim));
  {
    std::size_t rem = best;
    for (int d = dim - 1; d >= 0; --d) {
      const std::size_t len = scan.axes[static_cast<std::size_t>(d)].size();
      center[static_cast<std::size_t>(d)] = static_cast<int>(rem % len);
      rem /= len;
    }
  }
  for (int d = 0; d < dim; ++d) {
    const int c = center[static_cast<std::size_t>(d)];
    if (c == 0 || c + 1 == static_cast<int>(scan.axes[static_cast<std::size_t>(d)].size()))
      throw SamplingError("scan does not bracket the minimum (grid edge reached)");
  }

  const auto e_at = [&](std::vector<int> idx) { return scan.energy_at(idx); };
  const double e0 = e_at(center);
  Eigen::VectorXd grad(dim);
  Eigen::MatrixXd hess(dim, dim);
  for (int a = 0; a < dim; ++a) {
    std::vector<int> up = center, dn = center;
    ++up[static_cast<std::size_t>(a)];
    --dn[static_cast<std::size_t>(a)];
    const double ha = h[static_cast<std::size_t>(a)];
    grad[a] = (e_at(up) - e_at(dn)) / (2 * ha);
    hess(a, a) = (e_at(up) - 2 * e0 + e_at(dn)) / (ha * ha);
    for (int b = a + 1; b < dim; ++b) {
      const double hb = h[static_cast<std::size_t>(b)];
      std::vector<int> pp = center, pm = center, mp = center, mm = center;
      ++pp[static_cast<std::size_t>(a)]; ++pp[static_cast<std::size_t>(b)];
      ++pm[static_cast<std::size_t>(a)]; --pm[static_cast<std::size_t>(b)];
      --mp[static_cast<std::size_t>(a)]; ++mp[static_cast<std::size_t>(b)];
      --mm[static_cast<std::size_t>(a)]; --mm[static_cast<std::size_t>(b)];
      hess(a, b) = hess(b, a) =
          (e_at(pp) - e_at(pm) - e_at(mp) + e_at(mm)) / (4 * ha * hb);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hess);
  HarmonicFit fit;
  fit.hessian = hess;
  fit.normal_modes = solver.eigenvectors();
  for (int a = 0; a < dim; ++a) {
    const double ev = solver.eigenvalues()[a];
    if (ev <= 0)
      throw SaddlePointError("Hessian has a nonpositive eigenvalue; not a minimum");
    fit.frequencies.push_back(std::sqrt(ev));
  }
  // Newton refinement of the minimum from the central grid point
  Eigen::VectorXd x0(dim);
  for (int d = 0; d < dim; ++d)
    x0[d] = scan.axes[static_cast<std::size_t>(d)][static_cast<std::size_t>(
        center[static_cast<std::size_t>(d)])];
  const Eigen::VectorXd shift = hess.ldlt().solve(grad);
  fit.minimum = x0 - shift;
  fit.energy_min = e0 - 0.5 * grad.dot(shift);
  return fit;
}

ProtocolResult ion_protocol_evolve(const VibronicModel& model, double t, int slices,
                                   const HybridState& initial) {
  model.validate();
  if (model.n_modes() != 1)
    throw DomainError("the two-ion protocol is defined for single-mode models");
  if (slices < 1) throw DomainError("slice count must be >= 1");
  const HilbertLayout& L = initial.layout;
  if (L.qubit_count != 2 || L.mode_count() != 1)
    throw LayoutError("protocol layout must be 2 qubits ⊗ 1 mode");
  initial.check_normalized(1e-10);
  const int d = L.mode_dims[0];

  // the second ion must sit in a σ_z eigenstate
  const std::size_t bd = L.boson_dim();
  double pop_up = 0.0, pop_dn = 0.0;
  for (Eigen::Index i = 0; i < initial.amp.size(); ++i) {
    const std::uint64_t bits = static_cast<std::size_t>(i) / bd;
    if (bits & 1u)
      pop_up += std::norm(initial.amp[i]);  // qubit 2 is the least significant bit
    else
      pop_dn += std::norm(initial.amp[i]);
  }
  if (std::min(pop_up, pop_dn) > 1e-12)
    throw ProtocolError("second ion is not in a σ_z eigenstate");
  const double s2 = pop_up > pop_dn ? -1.0 : 1.0;  // Z|0> = +1, Z|1> = -1

  const double omega_g = model.omega_g[0];
  const double omega_e = model.omega_e[0];
  const double lam = model.lambda[0];
  const double tau = t / slices;
  // Ω(Z) a†a = [ (ω_g+ω_e)/2 + (ω_g-ω_e)/2 Z ] a†a  (ground = Z+1)
  const double omega_bar = 0.5 * (omega_g + omega_e);
  const double chi = 0.5 * (omega_g - omega_e);
  // coupling (λ ω_e / 2)(I - Z)(a+a†) on the excited projector
  const double c = 0.5 * lam * omega_e;

  HybridState state = initial;
  const LaserPulse v_fwd{1.0, Sideband::carrier, -M_PI / 2, 0.0, M_PI / 4, 1, 1};
  const LaserPulse v_bwd{1.0, Sideband::carrier, M_PI / 2, 0.0, M_PI / 4, 1, 1};
  LaserPulse v2_fwd = v_fwd, v2_bwd = v_bwd;
  v2_fwd.qubit = v2_bwd.qubit = 2;

  for (int s = 0; s < slices; ++s) {
    // conditional + unconditional displacement: e^{-i c (I - Z1)(a+a†) τ}.
    // Pulses compose right-to-left: V† first, then the bichromatic drive,
    // then V, giving V e^{±i c τ σx(a+a†)} V† = e^{±i c τ σz(a+a†)}.
    if (lam != 0.0) {
      // Z1 part with positive sign: e^{+i c Z1 (a+a†) τ}
      apply_pulse(state, v_bwd);
      apply_bichromatic(state, 1, 1, c * tau, M_PI / 2);
      apply_pulse(state, v_fwd);
      // scalar part through ion 2 in its eigenstate: e^{-i c (a+a†) τ}
      apply_pulse(state, v2_bwd);
      apply_bichromatic(state, 2, 1, c * tau, -s2 * M_PI / 2);
      apply_pulse(state, v2_fwd);
    }
    // dispersive piece: e^{-i (ω̄ + χ Z1) a†a τ}
    apply_mode_phase(state, 1, omega_bar * tau);
    if (chi != 0.0) apply_dispersive_shift(state, 1, 1, chi * tau);
  }
  // H_S commutes with every piece: apply the surface offsets once,
  // Δ_e picking up the ω_e λ² shift from the displaced-mode expansion
  const double delta_e_eff = model.delta_e + omega_e * lam * lam;
  Eigen::Matrix2cd hs_phase = Eigen::Matrix2cd::Zero();
  hs_phase(0, 0) = std::exp(cplx(0, -model.delta_g * t));
  hs_phase(1, 1) = std::exp(cplx(0, -delta_e_eff * t));
  apply_single_qubit_op(state, 1, hs_phase);

  ProtocolResult result;
  result.state = state;
  // dense oracle on the (qubit 1 ⊗ mode) factor, ion 2 a spectator
  const Eigen::MatrixXcd h = build_hamiltonian(model, {d});
  HybridState expected = initial;
  apply_qubit_mode_op(expected, 1, 1, exact_unitary(h, t));
  result.fidelity = fidelity(result.state, expected);
  return result;
}

}  // namespace tiqs
