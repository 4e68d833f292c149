// Command-line front end: generate instances, solve them, verify
// reconstructions, run the local-search baseline and the benchmark drivers.
//
// Exit codes: 0 solved/match, 1 internal error, 2 unsolved/mismatch,
// 3 infeasible input, 4 parse error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtomo/analysis.hpp"
#include "dtomo/bench.hpp"
#include "dtomo/dynamics.hpp"
#include "dtomo/io.hpp"
#include "dtomo/local_search.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUnsolved = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitParse = 4;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    const std::string part =
        end == std::string::npos ? text.substr(start) : text.substr(start, end - start);
    if (!part.empty()) parts.push_back(part);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return parts;
}

int checked_int(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(std::string("invalid ") + what + " '" + text + "'");
}

double checked_double(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(std::string("invalid ") + what + " '" + text + "'");
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  for (const std::string& part : split(text, 'x')) dims.push_back(checked_int(part, "dims"));
  if (dims.empty() || dims.size() > 3) {
    throw std::invalid_argument("dims must be D1[xD2[xD3]]");
  }
  return dims;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (const std::string& part : split(text, ',')) values.push_back(checked_int(part, "list entry"));
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& part : split(text, ',')) {
    values.push_back(checked_double(part, "list entry"));
  }
  return values;
}

void emit_csv(const std::string& csv, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << csv;
  } else {
    dtomo::write_file(path, csv);
  }
}

std::string trace_csv(const dtomo::RunReport& report) {
  std::string out = "time,relaxed_cut\n";
  char buf[80];
  for (const auto& [t, c] : report.cut_trace) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.9f\n", t, c);
    out += buf;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dtomo: exact binary-image reconstruction from ray sums"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "random image and matching instance");
  std::string gen_dims = "8x8";
  double gen_density = 0.5;
  std::uint64_t gen_seed = 0;
  std::string gen_out_image, gen_out_instance;
  generate->add_option("--dims", gen_dims, "grid dims D1[xD2[xD3]]");
  generate->add_option("--density", gen_density, "set-pixel probability");
  generate->add_option("--seed", gen_seed, "random seed");
  generate->add_option("--out-image", gen_out_image, "image output path");
  generate->add_option("--out-instance", gen_out_instance, "instance output path");

  // solve
  auto* solve = app.add_subcommand("solve", "reconstruct an image from an instance");
  std::string solve_instance, solve_out_image, solve_trace, solve_dims;
  dtomo::MachineConfig solve_cfg;
  int solve_trace_stride = 10;
  solve->add_option("--instance", solve_instance, "instance file")->required();
  solve->add_option("--T", solve_cfg.stage_time, "stage duration");
  solve->add_option("--steps", solve_cfg.steps_per_stage, "Euler steps per stage");
  solve->add_option("--agitations", solve_cfg.max_agitations, "agitation budget");
  solve->add_option("--seed", solve_cfg.seed, "random seed");
  solve->add_option("--out-image", solve_out_image, "reconstruction output path");
  solve->add_option("--dims", solve_dims, "dims for the output image (defaults to 1-D)");
  solve->add_option("--trace", solve_trace, "relaxed-cut trace CSV path");
  solve->add_option("--trace-stride", solve_trace_stride, "steps between trace samples");

  // verify
  auto* verify = app.add_subcommand("verify", "check an image against instance data");
  std::string verify_instance, verify_image;
  verify->add_option("--instance", verify_instance, "instance file")->required();
  verify->add_option("--image", verify_image, "image file")->required();

  // local-search
  auto* local = app.add_subcommand("local-search", "1-opt baseline success rate");
  std::string local_instance;
  int local_restarts = 1000;
  std::uint64_t local_seed = 0;
  local->add_option("--instance", local_instance, "instance file")->required();
  local->add_option("--restarts", local_restarts, "number of restarts");
  local->add_option("--seed", local_seed, "random seed");

  // bench
  auto* bench = app.add_subcommand("bench", "experiment drivers");
  bench->require_subcommand(1);
  dtomo::ExperimentSpec spec;
  std::string bench_sizes = "4,5,6,7,8,9,10,11,12";
  std::string bench_tgrid = "2.0,2.5,3.0,3.5,4.0,4.5,5.0";
  std::string bench_csv;
  bool bench_no_timing = false;

  auto* sweep = bench->add_subcommand("size-sweep", "success probability vs image side");
  sweep->add_option("--sizes", bench_sizes, "comma-separated image sides");
  sweep->add_option("--images", spec.images_per_size, "images per size");
  sweep->add_option("--restarts", spec.v2_restarts, "machine restarts per image");
  sweep->add_option("--ls-restarts", spec.local_search_restarts, "1-opt restarts per image");
  sweep->add_option("--T", spec.config.stage_time, "stage duration");
  sweep->add_option("--steps", spec.config.steps_per_stage, "Euler steps per stage");
  sweep->add_option("--agitations", spec.config.max_agitations, "agitation budget");
  sweep->add_option("--density", spec.density, "set-pixel probability");
  sweep->add_option("--seed", spec.master_seed, "master seed");
  sweep->add_option("--threads", spec.threads, "OpenMP thread count (0 = default)");
  sweep->add_option("--csv", bench_csv, "CSV output path ('-' for stdout)");
  sweep->add_flag("--no-timing", bench_no_timing, "zero the wall_ms column");

  auto* tsweep = bench->add_subcommand("t-sweep", "success probability vs stage duration");
  std::string tsweep_sizes = "5,10,15";
  tsweep->add_option("--sizes", tsweep_sizes, "comma-separated image sides");
  tsweep->add_option("--t-grid", bench_tgrid, "comma-separated stage durations");
  tsweep->add_option("--images", spec.images_per_size, "images per size");
  tsweep->add_option("--restarts", spec.v2_restarts, "machine restarts per image");
  tsweep->add_option("--steps", spec.config.steps_per_stage, "Euler steps per stage");
  int tsweep_agitations = 5;
  tsweep->add_option("--agitations", tsweep_agitations, "agitation budget");
  tsweep->add_option("--density", spec.density, "set-pixel probability");
  tsweep->add_option("--seed", spec.master_seed, "master seed");
  tsweep->add_option("--threads", spec.threads, "OpenMP thread count (0 = default)");
  tsweep->add_option("--csv", bench_csv, "CSV output path ('-' for stdout)");
  tsweep->add_flag("--no-timing", bench_no_timing, "zero the wall_ms column");

  auto* demo = bench->add_subcommand("demo3d", "3-D volume reconstruction demo");
  std::string demo_dims = "8x8x4";
  double demo_density = 0.3;
  std::uint64_t demo_seed = 0;
  std::string demo_out_original, demo_out_recon;
  dtomo::MachineConfig demo_cfg;
  // Volumes put each voxel on three rays; the 2-D protocol stalls, so the
  // demo defaults to longer stages, finer steps and more agitations.
  demo_cfg.stage_time = 10.0;
  demo_cfg.steps_per_stage = 3600;
  demo_cfg.max_agitations = 200;
  demo->add_option("--dims", demo_dims, "volume dims D1xD2xD3");
  demo->add_option("--density", demo_density, "set-voxel probability");
  demo->add_option("--seed", demo_seed, "random seed");
  demo->add_option("--T", demo_cfg.stage_time, "stage duration");
  demo->add_option("--steps", demo_cfg.steps_per_stage, "Euler steps per stage");
  demo->add_option("--agitations", demo_cfg.max_agitations, "agitation budget");
  demo->add_option("--out-original", demo_out_original, "original volume output path");
  demo->add_option("--out-recon", demo_out_recon, "reconstruction output path");
  demo->add_option("--csv", bench_csv, "CSV output path ('-' for stdout)");
  demo->add_flag("--no-timing", bench_no_timing, "zero the wall_ms column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const std::vector<int> dims = parse_dims(gen_dims);
      const dtomo::BinaryImage image = dtomo::random_image(dims, gen_density, gen_seed);
      dtomo::RaySystem rays = dtomo::grid_rays_for_dims(dims);
      std::vector<int> projections = dtomo::project(image, rays);
      const dtomo::TomographyInstance instance =
          dtomo::make_instance(std::move(rays), std::move(projections), gen_seed);
      if (!gen_out_image.empty()) dtomo::write_file(gen_out_image, dtomo::serialize_image(image));
      if (!gen_out_instance.empty()) {
        dtomo::write_file(gen_out_instance, dtomo::serialize_instance(instance));
      }
      std::cout << "nodes " << instance.node_count() << " rays " << instance.ray_count()
                << "\n";
      return kExitSolved;
    }

    if (*solve) {
      const dtomo::TomographyInstance instance =
          dtomo::parse_instance(dtomo::read_file(solve_instance));
      if (!solve_trace.empty()) solve_cfg.trace_stride = solve_trace_stride;
      const dtomo::RunReport report = dtomo::run_machine(instance, solve_cfg);
      if (!report.error.empty()) {
        std::cerr << "error: internal: " << report.error << "\n";
        return kExitInternal;
      }
      if (!solve_trace.empty()) dtomo::write_file(solve_trace, trace_csv(report));
      if (!solve_out_image.empty()) {
        std::vector<int> dims = solve_dims.empty()
                                    ? std::vector<int>{instance.node_count()}
                                    : parse_dims(solve_dims);
        dtomo::write_file(solve_out_image,
                          dtomo::serialize_image(dtomo::sigma_to_image(report.final_sigma, dims)));
      }
      std::cout << (report.solved ? "solved" : "unsolved") << " agitations "
                << report.agitations_used << " steps " << report.wall.steps << "\n";
      if (!report.solved) {
        std::cerr << "error: unsolved: residuals remain after agitation budget\n";
        return kExitUnsolved;
      }
      return kExitSolved;
    }

    if (*verify) {
      const dtomo::TomographyInstance instance =
          dtomo::parse_instance(dtomo::read_file(verify_instance));
      const dtomo::BinaryImage image = dtomo::parse_image(dtomo::read_file(verify_image));
      if (image.node_count() != instance.node_count()) {
        std::cerr << "error: infeasible: image has " << image.node_count()
                  << " pixels, instance has " << instance.node_count() << "\n";
        return kExitInfeasible;
      }
      const std::vector<int> projections = dtomo::project(image, instance.rays);
      bool match = true;
      for (int r = 0; r < instance.ray_count(); ++r) {
        if (projections[r] != instance.projections[r]) {
          if (match) std::cout << "ray residuals (measured - expected):\n";
          match = false;
          std::cout << "ray " << r << " : " << projections[r] - instance.projections[r]
                    << "\n";
        }
      }
      if (!match) {
        std::cerr << "error: unsolved: projections do not match\n";
        return kExitUnsolved;
      }
      std::cout << "match\n";
      return kExitSolved;
    }

    if (*local) {
      const dtomo::TomographyInstance instance =
          dtomo::parse_instance(dtomo::read_file(local_instance));
      const double p = dtomo::sample_local_search(instance, local_restarts, local_seed);
      std::printf("p_succ %.6f\n", p);
      return kExitSolved;
    }

    if (*sweep) {
      spec.kind = dtomo::ExperimentKind::size_sweep;
      spec.sizes = parse_int_list(bench_sizes);
      spec.measure_wall_time = !bench_no_timing;
      emit_csv(dtomo::to_csv(dtomo::size_sweep(spec)), bench_csv);
      return kExitSolved;
    }

    if (*tsweep) {
      spec.kind = dtomo::ExperimentKind::t_sweep;
      spec.sizes = parse_int_list(tsweep_sizes);
      spec.t_grid = parse_double_list(bench_tgrid);
      spec.config.max_agitations = tsweep_agitations;
      spec.measure_wall_time = !bench_no_timing;
      emit_csv(dtomo::to_csv(dtomo::t_sweep(spec)), bench_csv);
      return kExitSolved;
    }

    if (*demo) {
      const std::vector<int> dims = parse_dims(demo_dims);
      const dtomo::ThreeDDemoResult result =
          dtomo::three_d_demo(dims, demo_density, demo_seed, demo_cfg, !bench_no_timing);
      if (!demo_out_original.empty()) {
        dtomo::write_file(demo_out_original, dtomo::serialize_image(result.original));
      }
      if (!demo_out_recon.empty()) {
        dtomo::write_file(demo_out_recon, dtomo::serialize_image(result.reconstruction));
      }
      if (!bench_csv.empty()) emit_csv(dtomo::to_csv({result.row}), bench_csv);
      std::cout << (result.solved ? "solved" : "unsolved") << " agitations "
                << result.report.agitations_used << "\n";
      if (!result.solved) {
        std::cerr << "error: unsolved: projections of the reconstruction do not match\n";
        return kExitUnsolved;
      }
      return kExitSolved;
    }
  } catch (const dtomo::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kExitParse;
  } catch (const dtomo::InfeasibleError& e) {
    std::cerr << "error: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
