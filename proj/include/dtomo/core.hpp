#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dtomo {

// Binary spin, always +1 or -1.
using Spin = std::int8_t;

// 0/1 values on a rectangular grid of 1 to 3 dimensions, row-major
// (first dimension slowest). For 2D images dims = {rows, cols}.
struct BinaryImage {
  std::vector<int> dims;
  std::vector<std::uint8_t> values;

  int node_count() const { return static_cast<int>(values.size()); }

  // Validates dims (1-3 entries, each >= 1), value range and length.
  static BinaryImage make(std::vector<int> dims, std::vector<std::uint8_t> values);

  bool operator==(const BinaryImage&) const = default;
};

// sigma = +1 where the pixel is set, -1 where it is clear.
std::vector<Spin> image_to_sigma(const BinaryImage& image);

// Inverse of image_to_sigma; throws std::invalid_argument on length mismatch.
BinaryImage sigma_to_image(std::span<const Spin> sigma, std::vector<int> dims);

// Relaxed-spin state of the free nodes. The auxiliary spin is pinned at
// sigma = +1, X = 0 and stored implicitly so free indices match pixel indices.
struct SpinState {
  std::vector<Spin> sigma;  // each +1 or -1
  std::vector<double> x;    // each in [-1, 1)

  int size() const { return static_cast<int>(sigma.size()); }

  // Rejects any x outside [-1, 1) or sigma not in {-1, +1}.
  static SpinState make(std::vector<Spin> sigma, std::vector<double> x);
};

enum class AgitationMode { full_resample };

struct MachineConfig {
  double stage_time = 5.0;     // T, machine time units per free-evolution stage
  int steps_per_stage = 600;   // M
  int max_agitations = 10;
  std::uint64_t seed = 0;
  AgitationMode agitation_mode = AgitationMode::full_resample;
  int trace_stride = 0;        // 0 disables the relaxed-cut trace

  double dt() const { return stage_time / steps_per_stage; }
};

// Throws std::invalid_argument if T <= 0, M < 1 or max_agitations < 0.
void validate_config(const MachineConfig& config);

struct WallStats {
  std::int64_t steps = 0;
  double elapsed_s = 0.0;
};

// Outcome of one machine run (or one local-search descent).
struct RunReport {
  bool solved = false;
  int agitations_used = 0;
  std::vector<Spin> final_sigma;
  std::vector<long long> residuals;                    // Q(r; sigma) at termination
  std::vector<long long> stage_cuts;                   // binary cut after each stage
  std::vector<std::pair<double, double>> cut_trace;    // (time, relaxed cut)
  WallStats wall;
  std::string error;                                   // nonempty on step overflow
};

}  // namespace dtomo
