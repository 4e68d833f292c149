#include "dtomo/core.hpp"

#include <stdexcept>

namespace dtomo {

namespace {

long long checked_node_count(const std::vector<int>& dims) {
  if (dims.empty() || dims.size() > 3) {
    throw std::invalid_argument("image dims must have 1 to 3 entries");
  }
  long long n = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("image dims must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

BinaryImage BinaryImage::make(std::vector<int> dims, std::vector<std::uint8_t> values) {
  const long long n = checked_node_count(dims);
  if (static_cast<long long>(values.size()) != n) {
    throw std::invalid_argument("image values length does not match dims product");
  }
  for (std::uint8_t v : values) {
    if (v > 1) throw std::invalid_argument("image values must be 0 or 1");
  }
  return BinaryImage{std::move(dims), std::move(values)};
}

std::vector<Spin> image_to_sigma(const BinaryImage& image) {
  std::vector<Spin> sigma(image.values.size());
  for (std::size_t i = 0; i < image.values.size(); ++i) {
    sigma[i] = image.values[i] ? Spin{1} : Spin{-1};
  }
  return sigma;
}

BinaryImage sigma_to_image(std::span<const Spin> sigma, std::vector<int> dims) {
  const long long n = checked_node_count(dims);
  if (static_cast<long long>(sigma.size()) != n) {
    throw std::invalid_argument("sigma length does not match dims product");
  }
  std::vector<std::uint8_t> values(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    values[i] = sigma[i] > 0 ? 1 : 0;
  }
  return BinaryImage{std::move(dims), std::move(values)};
}

SpinState SpinState::make(std::vector<Spin> sigma, std::vector<double> x) {
  if (sigma.size() != x.size()) {
    throw std::invalid_argument("sigma and x must have equal length");
  }
  for (Spin s : sigma) {
    if (s != 1 && s != -1) throw std::invalid_argument("sigma values must be +1 or -1");
  }
  for (double v : x) {
    if (!(v >= -1.0 && v < 1.0)) {
      throw std::invalid_argument("continuous components must lie in [-1, 1)");
    }
  }
  return SpinState{std::move(sigma), std::move(x)};
}

void validate_config(const MachineConfig& config) {
  if (!(config.stage_time > 0.0)) throw std::invalid_argument("stage_time must be positive");
  if (config.steps_per_stage < 1) throw std::invalid_argument("steps_per_stage must be >= 1");
  if (config.max_agitations < 0) throw std::invalid_argument("max_agitations must be >= 0");
  const double dt = config.dt();
  if (!(dt > 0.0) || !(dt < 1e300)) throw std::invalid_argument("time step is not finite");
}

}  // namespace dtomo
