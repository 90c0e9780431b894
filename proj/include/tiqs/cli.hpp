#pragma once

#include <string>
#include <vector>

namespace tiqs::cli {

// Exit codes: 0 success, 2 input error, 3 numerical-guard error,
// 4 stagnation with outputs written.
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;
constexpr int kExitStagnation = 4;

struct TrotterBenchConfig {
  std::string integrals;
  std::string out_dir;
  std::vector<int> step_counts{1, 2, 3};
  std::vector<double> epsilons{1e-3, 1e-4, 1e-5};
  double t_max = 2.0;
  int t_points = 41;
  int energy_trace_steps = 3;
  bool include_constant = false;
  int nonlocal_override = 0;  // >0 replaces the census count in resources.json
  unsigned long seed = 1;
};

struct VqeConfig {
  std::string integrals;
  std::string out_dir;
  int slices = 16;  // 1/δ
  double tolerance = 1e-8;
  int max_iterations = 200;
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double min_step = 1e-12;
  double pea_t_max = 64.0;
  int pea_samples = 256;
  double pea_omega_bound = 10.0;
  int pea_trotter_steps = 0;  // 0 = exact controlled evolution
  unsigned long seed = 1;
};

struct PesConfig {
  std::vector<std::string> integral_files;
  std::string out_dir;
  int slices = 16;
  double tolerance = 1e-8;
  int max_iterations = 200;
  double pea_t_max = 64.0;
  int pea_samples = 256;
  double pea_omega_bound = 10.0;
  unsigned long seed = 1;
};

struct VibronicConfig {
  std::string model_file;
  std::string out_dir;
  double t_max = 200.0;
  int t_points = 2001;
  double gamma = 0.0;  // 0 = default 0.05 * min omega_g
  int truncation = 16;
  std::vector<int> protocol_ladder;  // empty = skip the protocol study
  double protocol_time = 1.0;
  unsigned long seed = 1;
};

struct ResourcesConfig {
  int nonlocal_terms = 8;
  long local_rotations = 0;
  std::vector<int> step_counts{1, 2, 3};
  std::string out_file;  // empty = stdout
};

struct SelftestConfig {
  unsigned long seed = 1;
};

int cmd_trotter_bench(const TrotterBenchConfig& config);
int cmd_vqe(const VqeConfig& config);
int cmd_pes(const PesConfig& config);
int cmd_vibronic(const VibronicConfig& config);
int cmd_resources(const ResourcesConfig& config);
int cmd_selftest(const SelftestConfig& config);

int run(int argc, char** argv);

}  // namespace tiqs::cli
