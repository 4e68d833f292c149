#include "dtomo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dtomo {

double ising_energy(const AdjacencyMatrix& adjacency, std::span<const Spin> sigma) {
  const std::size_t n = adjacency.size();
  if (sigma.size() != n) throw std::invalid_argument("sigma length does not match adjacency");
  double h = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      h += adjacency[m][k] * sigma[m] * sigma[k];
    }
  }
  return 0.5 * h;
}

long long ray_charge(const TomographyInstance& instance, std::span<const Spin> sigma, int r) {
  long long q = instance.spin_data[r];
  for (int node : instance.rays.rays[r]) q += sigma[node];
  return q;
}

std::vector<long long> ray_charges(const TomographyInstance& instance,
                                   std::span<const Spin> sigma) {
  std::vector<long long> charges(instance.ray_count());
  for (int r = 0; r < instance.ray_count(); ++r) charges[r] = ray_charge(instance, sigma, r);
  return charges;
}

long long max_cut_bound(const TomographyInstance& instance) {
  long long bound = 0;
  for (int r = 0; r < instance.ray_count(); ++r) {
    const long long d = instance.rays.ray_size(r) - instance.projections[r];
    bound += d * d;
  }
  return bound;
}

long long cut_value(const TomographyInstance& instance, std::span<const Spin> sigma) {
  long long penalty = 0;
  for (int r = 0; r < instance.ray_count(); ++r) {
    const long long half = ray_charge(instance, sigma, r) / 2;  // Q is even
    penalty += half * half;
  }
  return max_cut_bound(instance) - penalty;
}

bool is_solution(const TomographyInstance& instance, std::span<const Spin> sigma) {
  for (int r = 0; r < instance.ray_count(); ++r) {
    if (ray_charge(instance, sigma, r) != 0) return false;
  }
  return true;
}

double relaxed_cut(const TomographyInstance& instance, const SpinState& state) {
  if (state.size() != instance.node_count()) {
    throw std::invalid_argument("state size does not match instance");
  }
  double total = 0.0;
  std::vector<std::pair<double, double>> particles;  // (X, charge), per ray
  for (int r = 0; r < instance.ray_count(); ++r) {
    const auto& ray = instance.rays.rays[r];
    particles.clear();
    particles.reserve(ray.size() + 1);
    for (int node : ray) particles.emplace_back(state.x[node], state.sigma[node]);
    particles.emplace_back(0.0, static_cast<double>(instance.spin_data[r]));
    std::sort(particles.begin(), particles.end());

    // sum_{i<j} c_i c_j (X_j - X_i) via prefix sums of charge and charge*X.
    double pair_term = 0.0;
    double charge_prefix = 0.0;
    double moment_prefix = 0.0;
    for (const auto& [x, c] : particles) {
      pair_term += c * (x * charge_prefix - moment_prefix);
      charge_prefix += c;
      moment_prefix += c * x;
    }

    const long long n_minus_p = instance.rays.ray_size(r) - instance.projections[r];
    const long long half_q = ray_charge(instance, state.sigma, r) / 2;
    const double binary_cut = static_cast<double>(n_minus_p * n_minus_p - half_q * half_q);
    total += instance.lambda[r] * (binary_cut + 0.5 * pair_term);
  }
  return total;
}

void global_shift(SpinState& state, double r) {
  for (int i = 0; i < state.size(); ++i) {
    const double t = state.x[i] + r;
    const double k = std::floor((t + 1.0) / 2.0);
    double wrapped = t - 2.0 * k;
    bool flip = std::fmod(std::fabs(k), 2.0) == 1.0;
    if (wrapped >= 1.0) {
      wrapped -= 2.0;
      flip = !flip;
    } else if (wrapped < -1.0) {
      wrapped += 2.0;
      flip = !flip;
    }
    state.x[i] = wrapped;
    if (flip) state.sigma[i] = -state.sigma[i];
  }
}

ClusterPartition detect_strong_clusters(const SpinState& state, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const int n = state.size();
  std::vector<std::pair<double, int>> order;
  order.reserve(n + 1);
  for (int i = 0; i < n; ++i) order.emplace_back(state.x[i], i);
  order.emplace_back(0.0, n);  // auxiliary particle
  std::sort(order.begin(), order.end());

  ClusterPartition partition;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || order[i].first - order[i - 1].first > tol) {
      partition.clusters.emplace_back();
    }
    partition.clusters.back().nodes.push_back(order[i].second);
    partition.clusters.back().x_rep += order[i].first;
  }
  for (auto& cluster : partition.clusters) {
    cluster.x_rep /= static_cast<double>(cluster.nodes.size());
    std::sort(cluster.nodes.begin(), cluster.nodes.end());
  }
  return partition;
}

ClusterPartition detect_strong_clusters(const SpinState& state) {
  return detect_strong_clusters(state, 1e-9 * std::max(1, state.size()));
}

long long subset_ray_charge(const TomographyInstance& instance, std::span<const Spin> sigma,
                            std::span<const int> subset, int r) {
  long long q = 0;
  const auto& ray = instance.rays.rays[r];
  for (int member : subset) {
    if (member == instance.node_count()) {
      q += instance.spin_data[r];
    } else if (std::find(ray.begin(), ray.end(), member) != ray.end()) {
      q += sigma[member];
    }
  }
  return q;
}

BruteForceResult brute_force_solutions(const TomographyInstance& instance) {
  const int n = instance.node_count();
  if (n > 20) throw std::invalid_argument("brute force limited to 20 free spins");
  BruteForceResult result;
  result.max_cut = std::numeric_limits<long long>::min();
  std::vector<Spin> sigma(n);
  const std::uint64_t total = 1ull << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < n; ++i) sigma[i] = (mask >> i) & 1 ? Spin{1} : Spin{-1};
    const long long cut = cut_value(instance, sigma);
    result.max_cut = std::max(result.max_cut, cut);
    if (is_solution(instance, sigma)) result.solutions.push_back(sigma);
  }
  return result;
}

DefectFixture build_defect_fixture() {
  DefectFixture fixture;
  fixture.instance = make_instance(build_grid_rays_2d(2, 2), {1, 1, 1, 1}, /*seed=*/1);
  // Top row fully set, bottom row clear: rays 0 and 1 carry charge +2 / -2,
  // both column charges vanish. Correcting it requires flipping a column pair.
  std::vector<Spin> sigma = {1, 1, -1, -1};
  std::vector<double> x = {-0.5, 0.8, -0.3, 0.9};
  fixture.state = SpinState::make(std::move(sigma), std::move(x));
  fixture.alpha = 1;
  fixture.beta = 3;
  return fixture;
}

}  // namespace dtomo
