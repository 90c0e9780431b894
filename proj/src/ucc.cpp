#include "tiqs/ucc.hpp"

#include <algorithm>
#include <cmath>

#include "tiqs/linalg.hpp"

namespace tiqs {

ClusterAmplitudes::ClusterAmplitudes(int n_spin_orbitals, int n_electrons)
    : m_(n_spin_orbitals), n_(n_electrons) {
  if (n_ < 0 || n_ > m_) throw DomainError("electron count must satisfy 0 <= N <= M");
  singles_.assign(static_cast<std::size_t>(singles_count()), 0.0);
  doubles_.assign(static_cast<std::size_t>(doubles_count()), 0.0);
}

int ClusterAmplitudes::singles_count() const { return n_ * (m_ - n_); }

int ClusterAmplitudes::doubles_count() const {
  const int occ_pairs = n_ * (n_ - 1) / 2;
  const int vir = m_ - n_;
  const int vir_pairs = vir * (vir - 1) / 2;
  return occ_pairs * vir_pairs;
}

namespace {

int singles_index(int m, int n, int i, int a) {
  if (i < 0 || i >= n) throw DomainError("singles index i must be occupied");
  if (a < n || a >= m) throw DomainError("singles index a must be virtual");
  return i * (m - n) + (a - n);
}

int doubles_index(int m, int n, int i, int j, int a, int b) {
  if (!(0 <= i && i < j && j < n)) throw DomainError("doubles need occupied i < j");
  if (!(n <= a && a < b && b < m)) throw DomainError("doubles need virtual a < b");
  const int vir = m - n;
  const int vir_pairs = vir * (vir - 1) / 2;
  const auto pair_rank = [](int lo, int hi, int count) {
    // rank of (lo,hi) with lo<hi in lexicographic order over `count` items
    return lo * count - lo * (lo + 1) / 2 + (hi - lo - 1);
  };
  const int occ_rank = pair_rank(i, j, n);
  const int vir_rank = pair_rank(a - n, b - n, vir);
  return occ_rank * vir_pairs + vir_rank;
}

}  // namespace

double& ClusterAmplitudes::single(int i, int a) {
  return singles_[static_cast<std::size_t>(singles_index(m_, n_, i, a))];
}
double ClusterAmplitudes::single(int i, int a) const {
  return singles_[static_cast<std::size_t>(singles_index(m_, n_, i, a))];
}
double& ClusterAmplitudes::double_amp(int i, int j, int a, int b) {
  return doubles_[static_cast<std::size_t>(doubles_index(m_, n_, i, j, a, b))];
}
double ClusterAmplitudes::double_amp(int i, int j, int a, int b) const {
  return doubles_[static_cast<std::size_t>(doubles_index(m_, n_, i, j, a, b))];
}

Eigen::VectorXd ClusterAmplitudes::to_vector() const {
  Eigen::VectorXd v(parameter_count());
  Eigen::Index k = 0;
  for (double x : singles_) v[k++] = x;
  for (double x : doubles_) v[k++] = x;
  return v;
}

void ClusterAmplitudes::from_vector(const Eigen::VectorXd& v) {
  if (v.size() != parameter_count())
    throw DomainError("amplitude vector length does not match the excitation space");
  Eigen::Index k = 0;
  for (double& x : singles_) x = v[k++];
  for (double& x : doubles_) x = v[k++];
}

std::vector<ClusterAmplitudes::Excitation> ClusterAmplitudes::excitations() const {
  std::vector<Excitation> ex;
  for (int i = 0; i < n_; ++i)
    for (int a = n_; a < m_; ++a) ex.push_back({1, {i}, {a}});
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int a = n_; a < m_; ++a)
        for (int b = a + 1; b < m_; ++b) ex.push_back({2, {i, j}, {a, b}});
  return ex;
}

namespace {

// i(E - E†) for one excitation at unit amplitude
FermionOpSum excitation_generator_op(const ClusterAmplitudes::Excitation& ex) {
  FermionOpSum op;
  const cplx i(0, 1);
  if (ex.rank == 1) {
    op.add(i, {{ex.virtuals[0], true}, {ex.occupied[0], false}});
    op.add(-i, {{ex.occupied[0], true}, {ex.virtuals[0], false}});
  } else {
    // T2 term: c†a c†b c_j c_i
    op.add(i, {{ex.virtuals[0], true},
               {ex.virtuals[1], true},
               {ex.occupied[1], false},
               {ex.occupied[0], false}});
    op.add(-i, {{ex.occupied[0], true},
                {ex.occupied[1], true},
                {ex.virtuals[1], false},
                {ex.virtuals[0], false}});
  }
  return op;
}

}  // namespace

std::vector<PauliTermSum> excitation_generators(const ClusterAmplitudes& shape) {
  std::vector<PauliTermSum> gens;
  for (const auto& ex : shape.excitations())
    gens.push_back(jordan_wigner(excitation_generator_op(ex), shape.n_spin_orbitals()));
  return gens;
}

PauliTermSum cluster_generator(const ClusterAmplitudes& t) {
  const int m = t.n_spin_orbitals();
  FermionOpSum op;
  const Eigen::VectorXd v = t.to_vector();
  const auto ex = t.excitations();
  for (std::size_t k = 0; k < ex.size(); ++k) {
    if (v[static_cast<Eigen::Index>(k)] == 0.0) continue;
    FermionOpSum gen = excitation_generator_op(ex[k]);
    for (const auto& term : gen.terms())
      op.add(v[static_cast<Eigen::Index>(k)] * term.coeff, term.factors);
  }
  if (op.empty()) return PauliTermSum(m, {});
  return jordan_wigner(op, m);
}

HybridState prepare_ucc_state(const HybridState& reference, const ClusterAmplitudes& t,
                              double delta, CircuitTrace* trace) {
  if (reference.layout.qubit_count != t.n_spin_orbitals())
    throw LayoutError("reference layout does not match the spin-orbital count");
  const double slices_real = 1.0 / delta;
  const int slices = static_cast<int>(std::lround(slices_real));
  if (delta <= 0 || slices < 1 || std::abs(slices_real - slices) > 1e-9)
    throw DomainError("1/δ must be a positive integer");

  const Eigen::VectorXd v = t.to_vector();
  const auto gens = excitation_generators(t);
  HybridState state = reference;
  for (int s = 0; s < slices; ++s) {
    // rank-ordered split: K1 factors first, then K2, per slice
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const double amp = v[static_cast<Eigen::Index>(k)];
      if (std::abs(amp) < 1e-15) continue;
      for (const auto& term : gens[k].terms())
        exp_pauli_string(state, -term.coeff * amp * delta, term.letters, trace);
    }
  }
  return state;
}

double ucc_energy(const ClusterAmplitudes& t, const PauliTermSum& h,
                  const HybridState& reference, double delta) {
  return expectation(prepare_ucc_state(reference, t, delta), h);
}

GradientResult ucc_gradient(const ClusterAmplitudes& t, const PauliTermSum& h,
                            const HybridState& reference, double delta, GradientMode mode) {
  GradientResult result;
  const int np = t.parameter_count();

  if (mode == GradientMode::finite_difference || mode == GradientMode::both) {
    const double step = 1e-5;
    result.finite_difference.resize(np);
    const Eigen::VectorXd v0 = t.to_vector();
    for (int k = 0; k < np; ++k) {
      ClusterAmplitudes tp = t, tm = t;
      Eigen::VectorXd vp = v0, vm = v0;
      vp[k] += step;
      vm[k] -= step;
      tp.from_vector(vp);
      tm.from_vector(vm);
      result.finite_difference[k] =
          (ucc_energy(tp, h, reference, delta) - ucc_energy(tm, h, reference, delta)) /
          (2 * step);
    }
  }

  if (mode == GradientMode::commutator || mode == GradientMode::both) {
    result.commutator.resize(np);
    const HybridState phi = prepare_ucc_state(reference, t, delta);
    ComplexPauliSum hc(h.qubit_count());
    for (const auto& term : h.terms()) hc.add(term.letters, term.coeff);
    const auto gens = excitation_generators(t);
    for (int k = 0; k < np; ++k) {
      // [H, E - E†] = -i [H, G] with G = i(E - E†)
      ComplexPauliSum g(h.qubit_count());
      for (const auto& term : gens[static_cast<std::size_t>(k)].terms())
        g.add(term.letters, term.coeff);
      ComplexPauliSum comm = multiply(hc, g);
      comm.add(multiply(g, hc), -1.0);
      ComplexPauliSum scaled(h.qubit_count());
      scaled.add(comm, cplx(0, -1));
      result.commutator[k] = expectation(phi, scaled.to_real());
    }
  }

  if (mode == GradientMode::both)
    result.max_discrepancy =
        (result.finite_difference - result.commutator).cwiseAbs().maxCoeff();
  return result;
}

OptimResult quantum_assisted_optimize(const MolecularIntegrals& ints,
                                      const OptimizerConfig& config) {
  if (config.tolerance <= 0) throw DomainError("convergence tolerance must be positive");
  const int m = ints.n_spin_orbitals;
  const int n = ints.n_electrons;
  const PauliTermSum h = build_electronic_hamiltonian(ints, false);
  const HilbertLayout layout{m, {}};
  const HybridState reference = hartree_fock_state(layout, n, m);

  OptimResult result;
  result.amplitudes = ClusterAmplitudes(m, n);
  result.energy = ucc_energy(result.amplitudes, h, reference, config.delta);
  result.trace.push_back({0, result.energy, 0.0, 0.0});

  const bool use_fd = config.gradient_mode != GradientMode::commutator;
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    GradientResult grad =
        ucc_gradient(result.amplitudes, h, reference, config.delta, config.gradient_mode);
    const Eigen::VectorXd& g = use_fd ? grad.finite_difference : grad.commutator;
    const double gnorm = g.norm();
    result.trace.back().grad_norm = gnorm;

    // backtracking line search on T ← T - a g (Armijo)
    double step = config.initial_step;
    bool accepted = false;
    double new_energy = result.energy;
    ClusterAmplitudes candidate = result.amplitudes;
    while (step >= config.min_step) {
      Eigen::VectorXd v = result.amplitudes.to_vector() - step * g;
      candidate.from_vector(v);
      new_energy = ucc_energy(candidate, h, reference, config.delta);
      if (new_energy <= result.energy - config.armijo_c * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
      step *= config.backtrack_factor;
    }
    if (!accepted) {
      result.stagnated = true;  // no descending step even at the minimum size
      break;
    }
    const double delta_e = result.energy - new_energy;
    result.amplitudes = candidate;
    result.energy = new_energy;
    result.trace.push_back({iter, new_energy, gnorm, step});
    if (delta_e < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.state = prepare_ucc_state(reference, result.amplitudes, config.delta);
  return result;
}

std::vector<PesRow> potential_energy_surface(const std::vector<std::string>& integral_files,
                                             const OptimizerConfig& config,
                                             const PesPeaConfig& pea) {
  if (integral_files.empty()) throw DomainError("geometry sweep needs at least one file");
  std::vector<PesRow> rows;
  for (const auto& path : integral_files) {
    PesRow row;
    row.label = path;
    try {
      const MolecularIntegrals ints = load_integrals(path);
      row.label = ints.geometry;
      row.e_nuc = ints.constant;
      OptimResult opt = quantum_assisted_optimize(ints, config);
      row.energy_opt = opt.energy;
      row.energy_opt_total = opt.energy + ints.constant;
      if (opt.stagnated) {
        row.error = "stagnated";
      }
      const PauliTermSum h = build_electronic_hamiltonian(ints, false);
      std::vector<double> t_grid(static_cast<std::size_t>(pea.samples));
      for (int k = 0; k < pea.samples; ++k)
        t_grid[static_cast<std::size_t>(k)] = pea.t_max * k / pea.samples;
      AncillaSeries series = phase_estimation_scan(opt.state, h, t_grid);
      row.lines = extract_spectrum(series, pea.max_abs_omega);
      for (const auto& line : row.lines) row.line_totals.push_back(line.omega + ints.constant);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tiqs
