#include "tiqs/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tiqs/common.hpp"
#include "tiqs/linalg.hpp"

namespace tiqs {

TrotterPlan TrotterPlan::make(const PauliTermSum& h, int steps, double total_time) {
  TrotterPlan plan;
  plan.steps = steps;
  plan.total_time = total_time;
  plan.term_order.resize(h.terms().size());
  std::iota(plan.term_order.begin(), plan.term_order.end(), 0);
  std::stable_sort(plan.term_order.begin(), plan.term_order.end(), [&](int a, int b) {
    return std::abs(h.terms()[static_cast<std::size_t>(a)].coeff) >
           std::abs(h.terms()[static_cast<std::size_t>(b)].coeff);
  });
  plan.validate(h);
  return plan;
}

void TrotterPlan::validate(const PauliTermSum& h) const {
  if (steps < 1) throw DomainError("Trotter plan needs steps >= 1");
  std::vector<char> seen(h.terms().size(), 0);
  if (term_order.size() != h.terms().size())
    throw DomainError("term order length does not match the Hamiltonian");
  for (int idx : term_order) {
    if (idx < 0 || idx >= static_cast<int>(h.terms().size()) || seen[static_cast<std::size_t>(idx)])
      throw DomainError("term order is not a permutation");
    seen[static_cast<std::size_t>(idx)] = 1;
  }
}

HybridState trotter_evolve(HybridState state, const PauliTermSum& h, const TrotterPlan& plan,
                           CircuitTrace* trace) {
  plan.validate(h);
  if (h.qubit_count() != state.layout.qubit_count)
    throw LayoutError("Hamiltonian does not match the state layout");
  const double dt = plan.total_time / plan.steps;
  cplx phase = 1.0;
  for (int step = 0; step < plan.steps; ++step) {
    for (int idx : plan.term_order) {
      const PauliTerm& term = h.terms()[static_cast<std::size_t>(idx)];
      if (pauli_weight(term.letters) == 0) {
        phase *= std::exp(cplx(0, -term.coeff * dt));
        continue;
      }
      // e^{-i g P dt} = e^{+i (-g dt) P}
      exp_pauli_string(state, -term.coeff * dt, term.letters, trace);
    }
  }
  if (phase != cplx(1.0)) scale_global_phase(state, phase);
  return state;
}

AccumulatedError accumulated_gate_error(int steps, const ErrorModel& model) {
  if (steps < 1) throw DomainError("step count must be >= 1");
  if (model.epsilon < 0 || model.epsilon >= 1)
    throw DomainError("per-step error must lie in [0,1)");
  AccumulatedError e;
  e.composed = 1.0 - std::pow(1.0 - model.epsilon, steps);
  e.linearized = steps * model.epsilon;
  return e;
}

std::vector<DigitalErrorPoint> digital_error_curve(const PauliTermSum& h,
                                                   const HybridState& initial,
                                                   const std::vector<double>& t_grid,
                                                   const std::vector<int>& step_counts) {
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1])) throw DomainError("time grid must be sorted ascending");
  for (double t : t_grid)
    if (!std::isfinite(t)) throw DomainError("time grid must be finite");
  initial.check_normalized(1e-10);

  Propagator exact(operator_dense(h, initial.layout));
  std::vector<DigitalErrorPoint> rows(t_grid.size() * step_counts.size());
  parallel_for(t_grid.size(), [&](std::size_t ti) {
    const double t = t_grid[ti];
    HybridState psi_exact = initial;
    psi_exact.amp = exact.apply(t, initial.amp);
    for (std::size_t ni = 0; ni < step_counts.size(); ++ni) {
      HybridState psi_dig =
          trotter_evolve(initial, h, TrotterPlan::make(h, step_counts[ni], t));
      double err = 1.0 - fidelity(psi_dig, psi_exact);
      if (err < 0 && err > -1e-12) err = 0;  // clip roundoff
      rows[ti * step_counts.size() + ni] = {t, step_counts[ni], err};
    }
  });
  return rows;
}

std::vector<EnergyTracePoint> energy_trace(const PauliTermSum& h, const HybridState& initial,
                                           const std::vector<double>& t_grid, int steps) {
  initial.check_normalized(1e-10);
  Propagator exact(operator_dense(h, initial.layout));
  std::vector<EnergyTracePoint> rows(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t ti) {
    const double t = t_grid[ti];
    HybridState psi_exact = initial;
    psi_exact.amp = exact.apply(t, initial.amp);
    HybridState psi_dig = trotter_evolve(initial, h, TrotterPlan::make(h, steps, t));
    rows[ti] = {t, expectation(psi_exact, h), expectation(psi_dig, h)};
  });
  return rows;
}

ResourceEstimate estimate_resources(int nonlocal_terms, long local_rotations, int steps,
                                    double ms_gate_time_us, double local_time_us,
                                    double decoherence_budget_us) {
  if (nonlocal_terms < 0 || local_rotations < 0 || steps < 1)
    throw DomainError("resource estimate needs nonnegative counts and steps >= 1");
  ResourceEstimate r;
  r.ms_gate_count = 2L * nonlocal_terms * steps;
  r.local_rotation_count = local_rotations;
  r.ms_gate_time_us = ms_gate_time_us;
  r.local_time_us = local_time_us;
  r.decoherence_budget_us = decoherence_budget_us;
  r.total_wall_time_us =
      r.ms_gate_count * ms_gate_time_us + r.local_rotation_count * local_time_us;
  r.exceeds_budget = r.total_wall_time_us > decoherence_budget_us;
  return r;
}

}  // namespace tiqs
