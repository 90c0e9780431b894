#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tiqs/cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kFixture = std::string(TIQS_DATA_DIR) + "/h2_sto3g_0.75.ints";
const std::string kStretched = std::string(TIQS_DATA_DIR) + "/h2_sto3g_1.00.ints";
const std::string kSingleMode = std::string(TIQS_DATA_DIR) + "/vibronic_single_mode.model";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("trotter-bench writes curves, trace, census and resources") {
  const fs::path out = fresh_dir("tiqs_cli_bench");
  tiqs::cli::TrotterBenchConfig config;
  config.integrals = kFixture;
  config.out_dir = out.string();
  config.t_points = 11;
  config.t_max = 1.0;
  CHECK(tiqs::cli::cmd_trotter_bench(config) == tiqs::cli::kExitOk);
  CHECK(fs::exists(out / "config.json"));
  CHECK(fs::exists(out / "digital_error.csv"));
  CHECK(fs::exists(out / "energy_trace.csv"));
  CHECK(fs::exists(out / "census.json"));
  const std::string crossings = slurp(out / "crossings.json");
  CHECK(crossings.find("t_cross") != std::string::npos);
  const std::string res = slurp(out / "resources.json");
  CHECK(res.find("ms_gate_count") != std::string::npos);
  const std::string csv = slurp(out / "digital_error.csv");
  CHECK(csv.find("t,n,digital_error") == 0);
}

TEST_CASE("trotter-bench nonlocal override reproduces the headline resources") {
  const fs::path out = fresh_dir("tiqs_cli_bench_override");
  tiqs::cli::TrotterBenchConfig config;
  config.integrals = kFixture;
  config.out_dir = out.string();
  config.t_points = 3;
  config.t_max = 0.5;
  config.nonlocal_override = 8;
  CHECK(tiqs::cli::cmd_trotter_bench(config) == tiqs::cli::kExitOk);
  const std::string res = slurp(out / "resources.json");
  CHECK(res.find("\"ms_gate_count\": 16") != std::string::npos);
  CHECK(res.find("800.0") != std::string::npos);
}

TEST_CASE("trotter-bench single-point grid at t=0 has zero errors") {
  const fs::path out = fresh_dir("tiqs_cli_bench0");
  tiqs::cli::TrotterBenchConfig config;
  config.integrals = kFixture;
  config.out_dir = out.string();
  config.t_points = 1;
  config.t_max = 0.0;
  CHECK(tiqs::cli::cmd_trotter_bench(config) == tiqs::cli::kExitOk);
  const std::string csv = slurp(out / "digital_error.csv");
  std::istringstream ss(csv);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    const auto second_comma = line.find(',', line.find(',') + 1);
    const double err = std::stod(line.substr(second_comma + 1));
    CHECK(err == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("byte-identical reruns with the same config") {
  const fs::path out1 = fresh_dir("tiqs_cli_rep1");
  const fs::path out2 = fresh_dir("tiqs_cli_rep2");
  tiqs::cli::TrotterBenchConfig config;
  config.integrals = kFixture;
  config.out_dir = out1.string();
  config.t_points = 9;
  CHECK(tiqs::cli::cmd_trotter_bench(config) == tiqs::cli::kExitOk);
  config.out_dir = out2.string();
  CHECK(tiqs::cli::cmd_trotter_bench(config) == tiqs::cli::kExitOk);
  CHECK(slurp(out1 / "digital_error.csv") == slurp(out2 / "digital_error.csv"));
  CHECK(slurp(out1 / "energy_trace.csv") == slurp(out2 / "energy_trace.csv"));
  CHECK(slurp(out1 / "census.json") == slurp(out2 / "census.json"));
}

TEST_CASE("vqe subcommand") {
  const fs::path out = fresh_dir("tiqs_cli_vqe");
  tiqs::cli::VqeConfig config;
  config.integrals = kFixture;
  config.out_dir = out.string();
  config.pea_samples = 128;
  config.pea_t_max = 32.0;
  CHECK(tiqs::cli::cmd_vqe(config) == tiqs::cli::kExitOk);
  const std::string result = slurp(out / "result.json");
  CHECK(result.find("E_opt") != std::string::npos);
  CHECK(result.find("lines") != std::string::npos);
  CHECK(fs::exists(out / "trace.jsonl"));
  CHECK(fs::exists(out / "ancilla_series.csv"));

  // max_iter = 0 leaves the HF row only
  const fs::path out0 = fresh_dir("tiqs_cli_vqe0");
  config.out_dir = out0.string();
  config.max_iterations = 0;
  CHECK(tiqs::cli::cmd_vqe(config) == tiqs::cli::kExitOk);
  const std::string trace = slurp(out0 / "trace.jsonl");
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 1);
}

TEST_CASE("vqe stagnation exits with code 4 and keeps its outputs") {
  const fs::path out = fresh_dir("tiqs_cli_vqe_stall");
  tiqs::cli::VqeConfig config;
  config.integrals = kFixture;
  config.out_dir = out.string();
  config.min_step = 2.0;  // degenerate schedule: no admissible step
  config.initial_step = 1.0;
  config.pea_samples = 0;
  CHECK(tiqs::cli::cmd_vqe(config) == tiqs::cli::kExitStagnation);
  const std::string result = slurp(out / "result.json");
  CHECK(result.find("\"stagnated\": true") != std::string::npos);
}

TEST_CASE("vqe controlled-Trotter phase estimation flag") {
  const fs::path out = fresh_dir("tiqs_cli_vqe_trot");
  tiqs::cli::VqeConfig config;
  config.integrals = kFixture;
  config.out_dir = out.string();
  config.pea_samples = 128;
  config.pea_t_max = 32.0;
  config.pea_trotter_steps = 16;
  CHECK(tiqs::cli::cmd_vqe(config) == tiqs::cli::kExitOk);
  const std::string result = slurp(out / "result.json");
  CHECK(result.find("omega") != std::string::npos);
}

TEST_CASE("pes subcommand sweeps two geometries") {
  const fs::path out = fresh_dir("tiqs_cli_pes");
  tiqs::cli::PesConfig config;
  config.integral_files = {kFixture, kStretched};
  config.out_dir = out.string();
  config.pea_samples = 128;
  config.pea_t_max = 32.0;
  CHECK(tiqs::cli::cmd_pes(config) == tiqs::cli::kExitOk);
  const std::string csv = slurp(out / "pes.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
  CHECK(csv.find("0.75 A") != std::string::npos);
  CHECK(csv.find("1.00 A") != std::string::npos);
}

TEST_CASE("vibronic subcommand") {
  const fs::path out = fresh_dir("tiqs_cli_vib");
  tiqs::cli::VibronicConfig config;
  config.model_file = kSingleMode;
  config.out_dir = out.string();
  config.t_max = 200.0;
  config.t_points = 1001;
  config.protocol_ladder = {4, 8};
  config.protocol_time = 0.5;
  CHECK(tiqs::cli::cmd_vibronic(config) == tiqs::cli::kExitOk);
  CHECK(fs::exists(out / "correlation.csv"));
  CHECK(fs::exists(out / "spectrum.csv"));
  CHECK(fs::exists(out / "peaks.json"));
  const std::string ladder = slurp(out / "protocol_fidelity.csv");
  CHECK(ladder.find("slices,fidelity") == 0);
}

TEST_CASE("resources subcommand reproduces the headline numbers") {
  tiqs::cli::ResourcesConfig config;
  const fs::path out = fs::temp_directory_path() / "tiqs_cli_resources.json";
  fs::remove(out);
  config.out_file = out.string();
  CHECK(tiqs::cli::cmd_resources(config) == tiqs::cli::kExitOk);
  const std::string text = slurp(out);
  CHECK(text.find("\"ms_gate_count\": 16") != std::string::npos);
  CHECK(text.find("800.0") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
  tiqs::cli::TrotterBenchConfig config;
  config.integrals = "/nonexistent/file.ints";
  config.out_dir = fresh_dir("tiqs_cli_err").string();
  CHECK(tiqs::cli::cmd_trotter_bench(config) == tiqs::cli::kExitInput);
}

TEST_CASE("selftest passes with the default seed") {
  CHECK(tiqs::cli::cmd_selftest({1}) == tiqs::cli::kExitOk);
}
