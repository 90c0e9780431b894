#include "tiqs/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

#include "tiqs/fermion.hpp"
#include "tiqs/ionops.hpp"
#include "tiqs/linalg.hpp"
#include "tiqs/measure.hpp"
#include "tiqs/trotter.hpp"
#include "tiqs/ucc.hpp"
#include "tiqs/vibronic.hpp"

namespace tiqs::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << content;
}

fs::path prepare_out_dir(const std::string& dir) {
  if (dir.empty()) throw ParseError("an output directory is required");
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

void echo_config(const fs::path& out_dir, const json& j) {
  write_file(out_dir / "config.json", j.dump(2) + "\n");
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    grid[static_cast<std::size_t>(k)] =
        points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
  return grid;
}

json resource_json(const ResourceEstimate& r) {
  return json{{"ms_gate_count", r.ms_gate_count},
              {"local_rotation_count", r.local_rotation_count},
              {"ms_gate_time_us", r.ms_gate_time_us},
              {"local_time_us", r.local_time_us},
              {"total_wall_time_us", r.total_wall_time_us},
              {"decoherence_budget_us", r.decoherence_budget_us},
              {"exceeds_budget", r.exceeds_budget}};
}

json census_json(const TermCensus& c) {
  return json{{"local_count", c.local_terms},
              {"nonlocal_count", c.nonlocal_terms},
              {"total", c.merged_total},
              {"max_weight", c.max_weight},
              {"identity_count", c.identity_terms},
              {"raw_total", c.raw_total}};
}

int guard_exit(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitGuard;
}

int input_exit(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitInput;
}

}  // namespace

int cmd_trotter_bench(const TrotterBenchConfig& config) {
  fs::path out;
  MolecularIntegrals ints;
  try {
    out = prepare_out_dir(config.out_dir);
    ints = load_integrals(config.integrals);
  } catch (const Error& e) {
    return input_exit(e);
  }
  try {
    echo_config(out, json{{"command", "trotter-bench"},
                          {"integrals", config.integrals},
                          {"out", config.out_dir},
                          {"n", config.step_counts},
                          {"eps", config.epsilons},
                          {"t_max", config.t_max},
                          {"t_points", config.t_points},
                          {"energy_trace_steps", config.energy_trace_steps},
                          {"include_constant", config.include_constant},
                          {"nonlocal_override", config.nonlocal_override},
                          {"seed", config.seed}});

    long raw = 0;
    const PauliTermSum h =
        build_electronic_hamiltonian(ints, config.include_constant, &raw);
    const TermCensus c = census(h, raw);
    write_file(out / "census.json", census_json(c).dump(2) + "\n");

    const HilbertLayout layout{ints.n_spin_orbitals, {}};
    const HybridState phi =
        hartree_fock_state(layout, ints.n_electrons, ints.n_spin_orbitals);
    const std::vector<double> t_grid = linspace(0.0, config.t_max, config.t_points);

    const auto rows = digital_error_curve(h, phi, t_grid, config.step_counts);
    std::string csv = "t,n,digital_error";
    for (double eps : config.epsilons)
      csv += ",accumulated_composed_eps" + fmt(eps) + ",accumulated_linear_eps" + fmt(eps);
    csv += "\n";
    for (const auto& row : rows) {
      csv += fmt(row.t) + "," + std::to_string(row.steps) + "," + fmt(row.digital_error);
      for (double eps : config.epsilons) {
        const AccumulatedError acc = accumulated_gate_error(row.steps, {eps});
        csv += "," + fmt(acc.composed) + "," + fmt(acc.linearized);
      }
      csv += "\n";
    }
    write_file(out / "digital_error.csv", csv);

    const auto trace = energy_trace(h, phi, t_grid, config.energy_trace_steps);
    std::string ecsv = "t,E_exact,E_digital\n";
    for (const auto& row : trace)
      ecsv += fmt(row.t) + "," + fmt(row.energy_exact) + "," + fmt(row.energy_digital) + "\n";
    write_file(out / "energy_trace.csv", ecsv);

    // first grid time at which each digital curve crosses its
    // accumulated-gate-error line (the domain boundary where the digital
    // approximation starts to dominate)
    json crossings = json::array();
    for (std::size_t ni = 0; ni < config.step_counts.size(); ++ni) {
      for (double eps : config.epsilons) {
        const double line =
            accumulated_gate_error(config.step_counts[ni], {eps}).composed;
        double t_cross = -1.0;
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
          const double err = rows[ti * config.step_counts.size() + ni].digital_error;
          if (err >= line) {
            t_cross = t_grid[ti];
            break;
          }
        }
        crossings.push_back({{"n", config.step_counts[ni]},
                             {"epsilon", eps},
                             {"gate_error_line", line},
                             {"t_cross", t_cross},
                             {"crossed", t_cross >= 0.0}});
      }
    }
    write_file(out / "crossings.json", crossings.dump(2) + "\n");

    const int nonlocal =
        config.nonlocal_override > 0 ? config.nonlocal_override : c.nonlocal_terms;
    json res = json::array();
    for (int n : config.step_counts)
      res.push_back(resource_json(estimate_resources(nonlocal, 0, n)));
    write_file(out / "resources.json", res.dump(2) + "\n");
    return kExitOk;
  } catch (const TruncationError& e) {
    return guard_exit(e);
  } catch (const SamplingError& e) {
    return guard_exit(e);
  } catch (const Error& e) {
    return input_exit(e);
  }
}

int cmd_vqe(const VqeConfig& config) {
  fs::path out;
  MolecularIntegrals ints;
  try {
    out = prepare_out_dir(config.out_dir);
    ints = load_integrals(config.integrals);
  } catch (const Error& e) {
    return input_exit(e);
  }
  try {
    echo_config(out, json{{"command", "vqe"},
                          {"integrals", config.integrals},
                          {"out", config.out_dir},
                          {"slices", config.slices},
                          {"tolerance", config.tolerance},
                          {"max_iterations", config.max_iterations},
                          {"initial_step", config.initial_step},
                          {"backtrack_factor", config.backtrack_factor},
                          {"min_step", config.min_step},
                          {"pea_t_max", config.pea_t_max},
                          {"pea_samples", config.pea_samples},
                          {"pea_omega_bound", config.pea_omega_bound},
                          {"pea_trotter_steps", config.pea_trotter_steps},
                          {"seed", config.seed}});

    OptimizerConfig opt;
    opt.delta = 1.0 / config.slices;
    opt.tolerance = config.tolerance;
    opt.max_iterations = config.max_iterations;
    opt.initial_step = config.initial_step;
    opt.backtrack_factor = config.backtrack_factor;
    opt.min_step = config.min_step;
    const OptimResult result = quantum_assisted_optimize(ints, opt);

    std::string jsonl;
    for (const auto& it : result.trace) {
      json row{{"iter", it.iteration},
               {"E", it.energy},
               {"grad_norm", it.grad_norm},
               {"step", it.step}};
      jsonl += row.dump() + "\n";
    }
    write_file(out / "trace.jsonl", jsonl);

    const PauliTermSum h = build_electronic_hamiltonian(ints, false);
    json spectrum = json::array();
    if (config.max_iterations >= 0 && config.pea_samples >= 64) {
      std::vector<double> t_grid(static_cast<std::size_t>(config.pea_samples));
      for (int k = 0; k < config.pea_samples; ++k)
        t_grid[static_cast<std::size_t>(k)] =
            config.pea_t_max * k / config.pea_samples;
      const AncillaSeries series =
          config.pea_trotter_steps > 0
              ? phase_estimation_scan(result.state, h, t_grid, PeaMode::trotter,
                                      config.pea_trotter_steps)
              : phase_estimation_scan(result.state, h, t_grid);
      std::string scsv = "t,re_g,im_g\n";
      for (std::size_t k = 0; k < series.t.size(); ++k)
        scsv += fmt(series.t[k]) + "," + fmt(series.g[k].real()) + "," +
                fmt(series.g[k].imag()) + "\n";
      write_file(out / "ancilla_series.csv", scsv);
      for (const auto& line : extract_spectrum(series, config.pea_omega_bound))
        spectrum.push_back({{"omega", line.omega},
                            {"weight", line.weight},
                            {"omega_total", line.omega + ints.constant}});
    }

    json summary{{"E_opt", result.energy},
                 {"E_opt_total", result.energy + ints.constant},
                 {"E_hf", result.trace.front().energy},
                 {"e_nuc", ints.constant},
                 {"iterations", result.trace.back().iteration},
                 {"converged", result.converged},
                 {"stagnated", result.stagnated},
                 {"lines", spectrum}};
    write_file(out / "result.json", summary.dump(2) + "\n");
    return result.stagnated ? kExitStagnation : kExitOk;
  } catch (const TruncationError& e) {
    return guard_exit(e);
  } catch (const SamplingError& e) {
    return guard_exit(e);
  } catch (const Error& e) {
    return input_exit(e);
  }
}

int cmd_pes(const PesConfig& config) {
  fs::path out;
  try {
    out = prepare_out_dir(config.out_dir);
    if (config.integral_files.empty())
      throw ParseError("pes needs at least one integral file");
  } catch (const Error& e) {
    return input_exit(e);
  }
  try {
    echo_config(out, json{{"command", "pes"},
                          {"integrals", config.integral_files},
                          {"out", config.out_dir},
                          {"slices", config.slices},
                          {"tolerance", config.tolerance},
                          {"max_iterations", config.max_iterations},
                          {"pea_t_max", config.pea_t_max},
                          {"pea_samples", config.pea_samples},
                          {"pea_omega_bound", config.pea_omega_bound},
                          {"seed", config.seed}});
    OptimizerConfig opt;
    opt.delta = 1.0 / config.slices;
    opt.tolerance = config.tolerance;
    opt.max_iterations = config.max_iterations;
    PesPeaConfig pea{config.pea_t_max, config.pea_samples, config.pea_omega_bound};
    const auto rows = potential_energy_surface(config.integral_files, opt, pea);

    std::string csv = "label,e_nuc,E_opt,E_opt_total,status,pea_lines_total\n";
    for (const auto& row : rows) {
      csv += row.label + "," + fmt(row.e_nuc) + "," + fmt(row.energy_opt) + "," +
             fmt(row.energy_opt_total) + "," + (row.failed ? "failed" : "ok");
      std::string lines;
      for (double v : row.line_totals) lines += (lines.empty() ? "" : ";") + fmt(v);
      csv += "," + lines + "\n";
    }
    write_file(out / "pes.csv", csv);
    return kExitOk;
  } catch (const Error& e) {
    return input_exit(e);
  }
}

int cmd_vibronic(const VibronicConfig& config) {
  fs::path out;
  VibronicModel model;
  try {
    out = prepare_out_dir(config.out_dir);
    model = VibronicModel::load(config.model_file);
  } catch (const Error& e) {
    return input_exit(e);
  }
  try {
    const double gamma = config.gamma > 0
                             ? config.gamma
                             : 0.05 * (*std::min_element(model.omega_g.begin(),
                                                         model.omega_g.end()));
    echo_config(out, json{{"command", "vibronic"},
                          {"model", config.model_file},
                          {"out", config.out_dir},
                          {"t_max", config.t_max},
                          {"t_points", config.t_points},
                          {"gamma", gamma},
                          {"truncation", config.truncation},
                          {"protocol_ladder", config.protocol_ladder},
                          {"protocol_time", config.protocol_time},
                          {"seed", config.seed}});

    const std::vector<int> dims(static_cast<std::size_t>(model.n_modes()),
                                config.truncation);
    std::vector<std::string> warnings;
    build_hamiltonian(model, dims, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    const std::vector<double> t_grid = linspace(0.0, config.t_max, config.t_points);
    const std::vector<cplx> corr = dipole_correlation(model, t_grid, dims);
    std::string ccsv = "t,re_C,im_C\n";
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      ccsv += fmt(t_grid[k]) + "," + fmt(corr[k].real()) + "," + fmt(corr[k].imag()) + "\n";
    write_file(out / "correlation.csv", ccsv);

    const SpectrumResult spec = absorption_spectrum(t_grid, corr, gamma);
    std::string scsv = "omega,sigma\n";
    for (std::size_t k = 0; k < spec.omega.size(); ++k)
      scsv += fmt(spec.omega[k]) + "," + fmt(spec.sigma[k]) + "\n";
    write_file(out / "spectrum.csv", scsv);

    json peaks = json::array();
    for (const auto& p : spec.peaks)
      peaks.push_back({{"omega", p.omega}, {"weight", p.weight}});
    write_file(out / "peaks.json",
               json{{"peaks", peaks}, {"sum_rule_integral", spec.sum_rule_integral}}
                       .dump(2) +
                   "\n");

    if (!config.protocol_ladder.empty()) {
      if (model.n_modes() != 1)
        throw DomainError("the ion protocol study needs a single-mode model");
      const HilbertLayout layout{2, {config.truncation}};
      HybridState initial = basis_state(layout, "00");
      // electronic superposition exercises both surfaces
      const Eigen::Matrix2cd had =
          (Eigen::Matrix2cd() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
      apply_single_qubit_op(initial, 1, had);
      std::string fcsv = "slices,fidelity\n";
      for (int slices : config.protocol_ladder) {
        const ProtocolResult r =
            ion_protocol_evolve(model, config.protocol_time, slices, initial);
        fcsv += std::to_string(slices) + "," + fmt(r.fidelity) + "\n";
      }
      write_file(out / "protocol_fidelity.csv", fcsv);
    }
    return kExitOk;
  } catch (const TruncationError& e) {
    return guard_exit(e);
  } catch (const WindowingError& e) {
    std::cerr << "hint: extend t_max or raise gamma so the damped series decays\n";
    return guard_exit(e);
  } catch (const SamplingError& e) {
    std::cerr << "hint: refine the time grid to cover the spectral range\n";
    return guard_exit(e);
  } catch (const Error& e) {
    return input_exit(e);
  }
}

int cmd_resources(const ResourcesConfig& config) {
  try {
    json res = json::array();
    for (int n : config.step_counts)
      res.push_back(resource_json(
          estimate_resources(config.nonlocal_terms, config.local_rotations, n)));
    const std::string text = res.dump(2) + "\n";
    if (config.out_file.empty())
      std::cout << text;
    else
      write_file(config.out_file, text);
    return kExitOk;
  } catch (const Error& e) {
    return input_exit(e);
  }
}

int cmd_selftest(const SelftestConfig& config) {
  int failures = 0;
  const auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
    if (!ok) ++failures;
  };
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);

  // MS sandwich against the dense exponential on 2..5 qubits
  {
    bool ok = true;
    const std::string alphabet = "XYZ";
    for (int n = 2; n <= 5 && ok; ++n) {
      HilbertLayout layout{n, {}};
      for (int rep = 0; rep < 3 && ok; ++rep) {
        std::string letters(static_cast<std::size_t>(n), 'I');
        for (int q = 0; q < n; ++q)
          letters[static_cast<std::size_t>(q)] =
              alphabet[static_cast<std::size_t>(rng() % 3)];
        const double phi = angle(rng);
        const Eigen::MatrixXcd expected =
            exact_unitary(pauli_string_dense(letters), -phi);  // e^{+iφP}
        const Eigen::Index dim = expected.rows();
        for (Eigen::Index col = 0; col < dim && ok; ++col) {
          HybridState psi = basis_state(layout, static_cast<std::uint64_t>(col));
          exp_pauli_string(psi, phi, letters);
          ok = (psi.amp - expected.col(col)).norm() < 1e-10;
        }
      }
    }
    check("ms-decomposition", ok);
  }
  // JW hopping term
  {
    FermionOpSum op;
    op.add(1.0, {{0, true}, {1, false}});
    op.add(1.0, {{1, true}, {0, false}});
    const PauliTermSum sum = jordan_wigner(op, 2);
    bool ok = sum.terms().size() == 2;
    for (const auto& t : sum.terms()) ok = ok && std::abs(t.coeff - 0.5) < 1e-12;
    check("jordan-wigner-hopping", ok);
  }
  // norm preservation through a random circuit
  {
    HilbertLayout layout{3, {4}};
    HybridState psi = basis_state(layout, "010", {1});
    for (int k = 0; k < 5; ++k) {
      exp_pauli_string(psi, angle(rng), "ZXY");
      apply_ms(psi, {angle(rng), angle(rng), {}});
    }
    check("norm-preservation", std::abs(psi.norm() - 1.0) < 1e-12);
  }
  // spectral extraction of a pure tone
  {
    AncillaSeries series;
    const double omega0 = 1.25;
    for (int m = 0; m < 128; ++m) {
      const double t = 0.25 * m;
      series.t.push_back(t);
      series.g.push_back(0.5 * std::exp(cplx(0, -omega0 * t)));
    }
    const auto lines = extract_spectrum(series, 4.0);
    check("phase-estimation-tone",
          lines.size() == 1 && std::abs(lines[0].omega - omega0) < 0.2 &&
              std::abs(lines[0].weight - 1.0) < 0.02);
  }
  return failures == 0 ? kExitOk : 1;
}

}  // namespace tiqs::cli
