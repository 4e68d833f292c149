#include "dtomo/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dtomo/analysis.hpp"
#include "dtomo/dynamics.hpp"
#include "dtomo/local_search.hpp"
#include "dtomo/rng.hpp"

namespace dtomo {

namespace {

void apply_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string format_double(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

ResultRow stats_row(std::string experiment, std::string size_label, std::string method,
                    const SuccessStats& stats) {
  ResultRow row;
  row.experiment = std::move(experiment);
  row.size_label = std::move(size_label);
  row.method = std::move(method);
  row.restarts = stats.restarts;
  row.successes = stats.successes;
  row.p_succ = stats.p_succ;
  row.ci_lo = stats.ci.lo;
  row.ci_hi = stats.ci.hi;
  row.mean_agitations = stats.mean_agitations;
  row.wall_ms = static_cast<long long>(stats.wall_ms + 0.5);
  return row;
}

TomographyInstance cell_instance(int width, const ExperimentSpec& spec, int image_index) {
  const std::uint64_t w = static_cast<std::uint64_t>(width);
  const std::uint64_t i = static_cast<std::uint64_t>(image_index);
  const BinaryImage image = random_image({width, width}, spec.density,
                                         mix_seed(spec.master_seed, kBenchImageStream, w, i));
  RaySystem rays = build_grid_rays_2d(width, width);
  std::vector<int> projections = project(image, rays);
  return make_instance(std::move(rays), std::move(projections),
                       mix_seed(spec.master_seed, kBenchLambdaStream, w, i));
}

}  // namespace

WilsonInterval wilson_interval(long long successes, long long trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const double z = 1.959963984540054;  // 97.5th normal percentile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return WilsonInterval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

SuccessStats sample_success_v2(const TomographyInstance& instance, int restarts,
                               const MachineConfig& config, bool measure_wall_time) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  validate_config(config);
  std::vector<unsigned char> solved(restarts, 0);
  std::vector<int> agitations(restarts, 0);
  const double t0 = measure_wall_time ? now_ms() : 0.0;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < restarts; ++i) {
    MachineConfig cell = config;
    cell.seed = mix_seed(config.seed, kMachineRestartStream, static_cast<std::uint64_t>(i));
    cell.trace_stride = 0;
    const RunReport report = run_machine(instance, cell);
    solved[i] = report.solved && is_solution(instance, report.final_sigma) ? 1 : 0;
    agitations[i] = report.agitations_used;
  }
  SuccessStats stats;
  stats.restarts = restarts;
  for (int i = 0; i < restarts; ++i) {
    stats.successes += solved[i];
    stats.mean_agitations += agitations[i];
  }
  stats.mean_agitations /= restarts;
  stats.p_succ = static_cast<double>(stats.successes) / restarts;
  stats.ci = wilson_interval(stats.successes, stats.restarts);
  stats.wall_ms = measure_wall_time ? now_ms() - t0 : 0.0;
  return stats;
}

std::vector<ResultRow> size_sweep(const ExperimentSpec& spec) {
  if (spec.sizes.empty()) throw std::invalid_argument("size grid must be nonempty");
  if (spec.images_per_size < 1) throw std::invalid_argument("images_per_size must be >= 1");
  apply_thread_count(spec.threads);
  std::vector<ResultRow> rows;
  for (int width : spec.sizes) {
    SuccessStats v2_total;
    SuccessStats ls_total;
    double ls_ms = 0.0;
    for (int img = 0; img < spec.images_per_size; ++img) {
      const TomographyInstance instance = cell_instance(width, spec, img);

      MachineConfig cfg = spec.config;
      cfg.seed = mix_seed(spec.master_seed, kBenchMachineStream,
                          static_cast<std::uint64_t>(width), static_cast<std::uint64_t>(img));
      const SuccessStats v2 = sample_success_v2(instance, spec.v2_restarts, cfg,
                                                spec.measure_wall_time);
      v2_total.restarts += v2.restarts;
      v2_total.successes += v2.successes;
      v2_total.mean_agitations += v2.mean_agitations * v2.restarts;
      v2_total.wall_ms += v2.wall_ms;

      const double ls_t0 = spec.measure_wall_time ? now_ms() : 0.0;
      const double fraction = sample_local_search(
          instance, spec.local_search_restarts,
          mix_seed(spec.master_seed, kBenchSearchStream, static_cast<std::uint64_t>(width),
                   static_cast<std::uint64_t>(img)));
      if (spec.measure_wall_time) ls_ms += now_ms() - ls_t0;
      ls_total.restarts += spec.local_search_restarts;
      ls_total.successes +=
          static_cast<long long>(fraction * spec.local_search_restarts + 0.5);
    }
    v2_total.p_succ = static_cast<double>(v2_total.successes) / v2_total.restarts;
    v2_total.ci = wilson_interval(v2_total.successes, v2_total.restarts);
    v2_total.mean_agitations /= v2_total.restarts;
    ResultRow v2_row = stats_row("size_sweep", std::to_string(width), "v2", v2_total);
    v2_row.stage_time = spec.config.stage_time;
    v2_row.has_stage_time = true;
    v2_row.has_mean_agitations = true;
    rows.push_back(std::move(v2_row));

    ls_total.p_succ = static_cast<double>(ls_total.successes) / ls_total.restarts;
    ls_total.ci = wilson_interval(ls_total.successes, ls_total.restarts);
    ls_total.wall_ms = ls_ms;
    ResultRow ls_row = stats_row("size_sweep", std::to_string(width), "1opt", ls_total);
    rows.push_back(std::move(ls_row));
  }
  return rows;
}

std::vector<ResultRow> t_sweep(const ExperimentSpec& spec) {
  if (spec.sizes.empty()) throw std::invalid_argument("size grid must be nonempty");
  if (spec.t_grid.empty()) throw std::invalid_argument("T grid must be nonempty");
  for (double t : spec.t_grid) {
    if (!(t > 0.0 && t <= 6.0)) throw std::invalid_argument("T values must lie in (0, 6]");
  }
  apply_thread_count(spec.threads);
  std::vector<ResultRow> rows;
  for (int width : spec.sizes) {
    for (std::size_t ti = 0; ti < spec.t_grid.size(); ++ti) {
      SuccessStats total;
      for (int img = 0; img < spec.images_per_size; ++img) {
        const TomographyInstance instance = cell_instance(width, spec, img);
        MachineConfig cfg = spec.config;
        cfg.stage_time = spec.t_grid[ti];
        cfg.seed = mix_seed(spec.master_seed, kBenchMachineStream,
                            static_cast<std::uint64_t>(width),
                            static_cast<std::uint64_t>(img));
        const SuccessStats cell = sample_success_v2(instance, spec.v2_restarts, cfg,
                                                    spec.measure_wall_time);
        total.restarts += cell.restarts;
        total.successes += cell.successes;
        total.mean_agitations += cell.mean_agitations * cell.restarts;
        total.wall_ms += cell.wall_ms;
      }
      total.p_succ = static_cast<double>(total.successes) / total.restarts;
      total.ci = wilson_interval(total.successes, total.restarts);
      total.mean_agitations /= total.restarts;
      ResultRow row = stats_row("t_sweep", std::to_string(width), "v2", total);
      row.stage_time = spec.t_grid[ti];
      row.has_stage_time = true;
      row.has_mean_agitations = true;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ThreeDDemoResult three_d_demo(const std::vector<int>& dims, double density,
                              std::uint64_t seed, const MachineConfig& config,
                              bool measure_wall_time) {
  if (dims.size() != 3) throw std::invalid_argument("three_d_demo requires 3 dims");
  long long volume = 1;
  for (int d : dims) volume *= d;
  if (volume > 2048) throw std::invalid_argument("volume limited to 2048 voxels");

  ThreeDDemoResult result;
  result.original = random_image(dims, density, mix_seed(seed, kBenchImageStream));
  RaySystem rays = grid_rays_for_dims(dims);
  std::vector<int> projections = project(result.original, rays);
  const TomographyInstance instance = make_instance(std::move(rays), std::move(projections),
                                                    mix_seed(seed, kBenchLambdaStream));

  MachineConfig cfg = config;
  cfg.seed = mix_seed(seed, kBenchMachineStream);
  const double t0 = measure_wall_time ? now_ms() : 0.0;
  result.report = run_machine(instance, cfg);
  const double wall = measure_wall_time ? now_ms() - t0 : 0.0;

  result.reconstruction = sigma_to_image(result.report.final_sigma, dims);
  // Independent verification: re-project the reconstruction and compare.
  const std::vector<int> recon_proj = project(result.reconstruction, instance.rays);
  result.residuals.resize(instance.ray_count());
  bool solved = true;
  for (int r = 0; r < instance.ray_count(); ++r) {
    result.residuals[r] = recon_proj[r] - instance.projections[r];
    solved = solved && result.residuals[r] == 0;
  }
  result.solved = solved;

  SuccessStats stats;
  stats.restarts = 1;
  stats.successes = solved ? 1 : 0;
  stats.p_succ = solved ? 1.0 : 0.0;
  stats.ci = wilson_interval(stats.successes, 1);
  stats.mean_agitations = result.report.agitations_used;
  stats.wall_ms = wall;
  result.row = stats_row("three_d_demo",
                         std::to_string(dims[0]) + "x" + std::to_string(dims[1]) + "x" +
                             std::to_string(dims[2]),
                         "v2", stats);
  result.row.stage_time = cfg.stage_time;
  result.row.has_stage_time = true;
  result.row.has_mean_agitations = true;
  return result;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "experiment,W,T,method,restarts,successes,p_succ,ci_lo,ci_hi,mean_agitations,wall_ms\n";
  for (const ResultRow& row : rows) {
    out += row.experiment;
    out += ',';
    out += row.size_label;
    out += ',';
    if (row.has_stage_time) out += format_double(row.stage_time, 3);
    out += ',';
    out += row.method;
    out += ',';
    out += std::to_string(row.restarts);
    out += ',';
    out += std::to_string(row.successes);
    out += ',';
    out += format_double(row.p_succ, 6);
    out += ',';
    out += format_double(row.ci_lo, 6);
    out += ',';
    out += format_double(row.ci_hi, 6);
    out += ',';
    if (row.has_mean_agitations) out += format_double(row.mean_agitations, 4);
    out += ',';
    out += std::to_string(row.wall_ms);
    out += '\n';
  }
  return out;
}

}  // namespace dtomo
