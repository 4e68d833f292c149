#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtomo/core.hpp"
#include "dtomo/instance.hpp"

namespace dtomo {

// Seed stream tags. Exposed so tests can reproduce individual cells of an
// experiment grid exactly.
inline constexpr std::uint64_t kBenchImageStream = 0x62696d67ull;
inline constexpr std::uint64_t kBenchLambdaStream = 0x626c616dull;
inline constexpr std::uint64_t kBenchMachineStream = 0x626d6163ull;
inline constexpr std::uint64_t kBenchSearchStream = 0x626c7372ull;
inline constexpr std::uint64_t kMachineRestartStream = 0x76327273ull;

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(long long successes, long long trials);

struct SuccessStats {
  long long restarts = 0;
  long long successes = 0;
  double p_succ = 0.0;
  WilsonInterval ci;
  double mean_agitations = 0.0;
  double wall_ms = 0.0;
};

// Success probability of the machine over independent restarts with derived
// per-restart seeds (config.seed is the base). Every "solved" run is
// re-verified through is_solution before it counts.
SuccessStats sample_success_v2(const TomographyInstance& instance, int restarts,
                               const MachineConfig& config, bool measure_wall_time = true);

enum class ExperimentKind { size_sweep, t_sweep, three_d_demo };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::size_sweep;
  std::vector<int> sizes;                // W values
  std::vector<double> t_grid;            // stage durations for t_sweep
  int images_per_size = 5;
  int v2_restarts = 100;
  int local_search_restarts = 10000;
  MachineConfig config;                  // template; per-cell seeds are derived
  std::uint64_t master_seed = 0;
  double density = 0.5;
  bool measure_wall_time = true;
  int threads = 0;                       // 0 keeps the runtime default
};

struct ResultRow {
  std::string experiment;
  std::string size_label;     // "12" or "8x8x4"
  double stage_time = 0.0;    // T; meaningful only when has_stage_time
  bool has_stage_time = false;
  std::string method;         // "v2" or "1opt"
  long long restarts = 0;
  long long successes = 0;
  double p_succ = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double mean_agitations = 0.0;
  bool has_mean_agitations = false;
  long long wall_ms = 0;
};

// One v2 row and one 1opt row per size, averaged over images_per_size random
// density-p images. Deterministic given the spec, including under any OpenMP
// thread count.
std::vector<ResultRow> size_sweep(const ExperimentSpec& spec);

// One v2 row per (size, T) cell; T values must lie in (0, 6].
std::vector<ResultRow> t_sweep(const ExperimentSpec& spec);

struct ThreeDDemoResult {
  BinaryImage original;
  BinaryImage reconstruction;
  std::vector<long long> residuals;       // recomputed by project() + comparison
  bool solved = false;
  RunReport report;
  ResultRow row;
};

// Generates a random volume, projects along the three axes, reconstructs,
// and verifies the reconstruction through the independent projection path.
ThreeDDemoResult three_d_demo(const std::vector<int>& dims, double density,
                              std::uint64_t seed, const MachineConfig& config,
                              bool measure_wall_time = true);

// Deterministic CSV serialization (header + one line per row).
std::string to_csv(const std::vector<ResultRow>& rows);

}  // namespace dtomo
