#include <CLI11.hpp>

#include "tiqs/cli.hpp"

namespace cli = tiqs::cli;

int tiqs::cli::run(int argc, char** argv) {
  CLI::App app{"trapped-ion quantum chemistry simulator"};
  app.require_subcommand(1);

  TrotterBenchConfig tb;
  auto* bench = app.add_subcommand("trotter-bench",
                                   "digital-error curves, energy trace, resources");
  bench->add_option("--integrals", tb.integrals, "integral file")->required();
  bench->add_option("--out", tb.out_dir, "output directory")->required();
  bench->add_option("--n", tb.step_counts, "Trotter step counts");
  bench->add_option("--eps", tb.epsilons, "per-step error rates");
  bench->add_option("--t-max", tb.t_max, "largest evolution time");
  bench->add_option("--t-points", tb.t_points, "time grid points");
  bench->add_option("--energy-trace-n", tb.energy_trace_steps, "steps for the energy trace");
  bench->add_flag("--include-constant", tb.include_constant,
                  "fold the nuclear repulsion into the Hamiltonian");
  bench->add_option("--nonlocal-override", tb.nonlocal_override,
                    "use this nonlocal-term count for resources.json instead of the census");
  bench->add_option("--seed", tb.seed, "seed echoed into the config");

  VqeConfig vq;
  auto* vqe = app.add_subcommand("vqe", "quantum-assisted UCC optimization + PEA");
  vqe->add_option("--integrals", vq.integrals, "integral file")->required();
  vqe->add_option("--out", vq.out_dir, "output directory")->required();
  vqe->add_option("--slices", vq.slices, "state-prep Trotter slices (1/δ)");
  vqe->add_option("--tol", vq.tolerance, "|ΔE| convergence tolerance");
  vqe->add_option("--max-iter", vq.max_iterations, "iteration cap");
  vqe->add_option("--initial-step", vq.initial_step, "line-search starting step");
  vqe->add_option("--backtrack", vq.backtrack_factor, "line-search shrink factor");
  vqe->add_option("--min-step", vq.min_step, "smallest line-search step");
  vqe->add_option("--pea-t-max", vq.pea_t_max, "phase-estimation scan length");
  vqe->add_option("--pea-samples", vq.pea_samples, "phase-estimation samples");
  vqe->add_option("--pea-omega-bound", vq.pea_omega_bound, "declared spectral bound");
  vqe->add_option("--pea-trotter", vq.pea_trotter_steps,
                  "route the controlled evolution through n Trotter steps (0 = exact)");
  vqe->add_option("--seed", vq.seed, "seed echoed into the config");

  PesConfig pes;
  auto* pesCmd = app.add_subcommand("pes", "potential-energy-surface sweep");
  pesCmd->add_option("--integrals", pes.integral_files, "integral files, one per geometry")
      ->required();
  pesCmd->add_option("--out", pes.out_dir, "output directory")->required();
  pesCmd->add_option("--slices", pes.slices, "state-prep Trotter slices (1/δ)");
  pesCmd->add_option("--tol", pes.tolerance, "|ΔE| convergence tolerance");
  pesCmd->add_option("--max-iter", pes.max_iterations, "iteration cap");
  pesCmd->add_option("--pea-t-max", pes.pea_t_max, "phase-estimation scan length");
  pesCmd->add_option("--pea-samples", pes.pea_samples, "phase-estimation samples");
  pesCmd->add_option("--pea-omega-bound", pes.pea_omega_bound, "declared spectral bound");
  pesCmd->add_option("--seed", pes.seed, "seed echoed into the config");

  VibronicConfig vib;
  auto* vibCmd = app.add_subcommand("vibronic", "dipole correlation and absorption spectrum");
  vibCmd->add_option("--model", vib.model_file, "vibronic model file")->required();
  vibCmd->add_option("--out", vib.out_dir, "output directory")->required();
  vibCmd->add_option("--t-max", vib.t_max, "correlation window");
  vibCmd->add_option("--t-points", vib.t_points, "correlation samples");
  vibCmd->add_option("--gamma", vib.gamma, "line broadening (default 0.05 min ω_g)");
  vibCmd->add_option("--trunc", vib.truncation, "Fock truncation per mode");
  vibCmd->add_option("--protocol-ladder", vib.protocol_ladder,
                     "slice counts for the two-ion protocol fidelity study");
  vibCmd->add_option("--protocol-time", vib.protocol_time, "protocol evolution time");
  vibCmd->add_option("--seed", vib.seed, "seed echoed into the config");

  ResourcesConfig res;
  auto* resCmd = app.add_subcommand("resources", "MS-gate and wall-time estimator");
  resCmd->add_option("--nonlocal", res.nonlocal_terms, "nonlocal Hamiltonian terms");
  resCmd->add_option("--local", res.local_rotations, "local rotations to include");
  resCmd->add_option("--n", res.step_counts, "Trotter step counts");
  resCmd->add_option("--out", res.out_file, "output file (default stdout)");

  SelftestConfig st;
  auto* stCmd = app.add_subcommand("selftest", "quick internal consistency checks");
  stCmd->add_option("--seed", st.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (bench->parsed()) return cmd_trotter_bench(tb);
  if (vqe->parsed()) return cmd_vqe(vq);
  if (pesCmd->parsed()) return cmd_pes(pes);
  if (vibCmd->parsed()) return cmd_vibronic(vib);
  if (resCmd->parsed()) return cmd_resources(res);
  if (stCmd->parsed()) return cmd_selftest(st);
  return kExitInput;
}

int main(int argc, char** argv) { return tiqs::cli::run(argc, argv); }
