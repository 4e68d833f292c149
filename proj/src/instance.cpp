#include "dtomo/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dtomo/rng.hpp"

namespace dtomo {

namespace {

constexpr std::uint64_t kLambdaStream = 0x6c616d626461ull;
constexpr std::uint64_t kImageStream = 0x696d616765ull;

std::vector<long long> first_primes(int count) {
  std::vector<long long> primes;
  if (count <= 0) return primes;
  primes.reserve(count);
  // Upper bound on the count-th prime, loose is fine.
  std::size_t bound = 16;
  if (count > 5) {
    const double c = static_cast<double>(count);
    bound = static_cast<std::size_t>(c * (std::log(c) + std::log(std::log(c))) * 1.2) + 16;
  }
  while (true) {
    std::vector<bool> composite(bound + 1, false);
    primes.clear();
    for (std::size_t p = 2; p <= bound; ++p) {
      if (composite[p]) continue;
      primes.push_back(static_cast<long long>(p));
      if (static_cast<int>(primes.size()) == count) return primes;
      for (std::size_t q = p * p; q <= bound; q += p) composite[q] = true;
    }
    bound *= 2;
  }
}

long long integer_sqrt(long long v) {
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::vector<std::vector<int>> build_node_rays(const RaySystem& rays) {
  std::vector<std::vector<int>> node_rays(rays.node_count);
  for (int r = 0; r < rays.ray_count(); ++r) {
    for (int node : rays.rays[r]) node_rays[node].push_back(r);
  }
  return node_rays;  // ray ids ascending since rays are visited in order
}

// Necessary consistency condition: whenever consecutive rays group into
// complete families (each family covering every node exactly once), the
// total projected mass must agree across families. Stops at the first ray
// layout that cannot extend to a partition; leftover rays go unchecked.
void check_family_masses(const RaySystem& rays, const std::vector<int>& projections) {
  std::vector<int> covered(rays.node_count, 0);
  int covered_count = 0;
  long long family_mass = 0;
  long long reference_mass = -1;
  int family_index = 0;
  for (int r = 0; r < rays.ray_count(); ++r) {
    for (int node : rays.rays[r]) {
      if (covered[node]) return;  // not a clean family layout; nothing to check
      covered[node] = 1;
    }
    covered_count += rays.ray_size(r);
    family_mass += projections[r];
    if (covered_count == rays.node_count) {
      if (reference_mass < 0) {
        reference_mass = family_mass;
      } else if (family_mass != reference_mass) {
        throw InfeasibleError("inconsistent projections: family " +
                              std::to_string(family_index) + " has total mass " +
                              std::to_string(family_mass) + ", expected " +
                              std::to_string(reference_mass));
      }
      std::fill(covered.begin(), covered.end(), 0);
      covered_count = 0;
      family_mass = 0;
      ++family_index;
    }
  }
}

TomographyInstance finish_instance(RaySystem rays, std::vector<int> projections,
                                   std::vector<double> lambda, std::uint64_t seed) {
  TomographyInstance inst;
  inst.spin_data.resize(rays.ray_count());
  for (int r = 0; r < rays.ray_count(); ++r) {
    inst.spin_data[r] = rays.ray_size(r) - 2 * projections[r];
  }
  inst.node_rays = build_node_rays(rays);
  inst.rays = std::move(rays);
  inst.projections = std::move(projections);
  inst.lambda = std::move(lambda);
  inst.lambda_seed = seed;
  return inst;
}

void check_projections(const RaySystem& rays, const std::vector<int>& projections) {
  if (static_cast<int>(projections.size()) != rays.ray_count()) {
    throw std::invalid_argument("projection count does not match ray count");
  }
  for (int r = 0; r < rays.ray_count(); ++r) {
    if (projections[r] < 0 || projections[r] > rays.ray_size(r)) {
      throw InfeasibleError("infeasible projection: ray " + std::to_string(r) + " has P = " +
                            std::to_string(projections[r]) + " with N = " +
                            std::to_string(rays.ray_size(r)));
    }
  }
  check_family_masses(rays, projections);
}

}  // namespace

double lambda_from_prime(long long p) {
  return std::sqrt(static_cast<double>(p)) / static_cast<double>(integer_sqrt(p));
}

std::vector<double> lambda_weights(int ray_count, std::uint64_t seed) {
  if (ray_count < 1) throw std::invalid_argument("ray_count must be >= 1");
  std::vector<long long> primes = first_primes(ray_count);
  Rng rng(mix_seed(seed, kLambdaStream));
  shuffle(primes, rng);
  std::vector<double> lambda(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) lambda[i] = lambda_from_prime(primes[i]);
  return lambda;
}

std::vector<int> project(const BinaryImage& image, const RaySystem& rays) {
  if (image.node_count() != rays.node_count) {
    throw std::invalid_argument("image node count does not match ray system");
  }
  std::vector<int> projections(rays.ray_count(), 0);
  for (int r = 0; r < rays.ray_count(); ++r) {
    int sum = 0;
    for (int node : rays.rays[r]) sum += image.values[node];
    projections[r] = sum;
  }
  return projections;
}

TomographyInstance make_instance(RaySystem rays, std::vector<int> projections,
                                 std::uint64_t seed) {
  if (auto violation = validate_ray_system(rays)) {
    throw std::invalid_argument("invalid ray system: " + violation->message);
  }
  check_projections(rays, projections);
  std::vector<double> lambda = lambda_weights(rays.ray_count(), seed);
  return finish_instance(std::move(rays), std::move(projections), std::move(lambda), seed);
}

TomographyInstance make_instance_with_lambda(RaySystem rays, std::vector<int> projections,
                                             std::vector<double> lambda) {
  if (auto violation = validate_ray_system(rays)) {
    throw std::invalid_argument("invalid ray system: " + violation->message);
  }
  check_projections(rays, projections);
  if (static_cast<int>(lambda.size()) != rays.ray_count()) {
    throw std::invalid_argument("lambda count does not match ray count");
  }
  for (double value : lambda) {
    if (!(value > 0.0)) throw std::invalid_argument("lambda values must be positive");
  }
  return finish_instance(std::move(rays), std::move(projections), std::move(lambda), 0);
}

BinaryImage random_image(std::vector<int> dims, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("density must lie in [0, 1]");
  }
  long long n = 1;
  for (int d : dims) n *= std::max(d, 0);
  std::vector<std::uint8_t> values(std::max<long long>(n, 0));
  Rng rng(mix_seed(seed, kImageStream));
  for (auto& v : values) v = rng.next_double() < density ? 1 : 0;
  return BinaryImage::make(std::move(dims), std::move(values));
}

VectorChargeTable assemble_charges(const TomographyInstance& instance,
                                   std::span<const Spin> sigma) {
  if (static_cast<int>(sigma.size()) != instance.node_count()) {
    throw std::invalid_argument("sigma length does not match node count");
  }
  VectorChargeTable table;
  table.free_charges.resize(instance.node_count());
  for (int node = 0; node < instance.node_count(); ++node) {
    auto& entries = table.free_charges[node];
    entries.reserve(instance.node_rays[node].size());
    for (int r : instance.node_rays[node]) {
      entries.emplace_back(r, sigma[node] * std::sqrt(instance.lambda[r]));
    }
  }
  table.aux_charge.resize(instance.ray_count());
  for (int r = 0; r < instance.ray_count(); ++r) {
    table.aux_charge[r] = instance.spin_data[r] * std::sqrt(instance.lambda[r]);
  }
  return table;
}

AdjacencyMatrix to_adjacency(const TomographyInstance& instance) {
  const int n = instance.node_count();
  AdjacencyMatrix adj(n + 1, std::vector<double>(n + 1, 0.0));
  for (int r = 0; r < instance.ray_count(); ++r) {
    const auto& ray = instance.rays.rays[r];
    for (std::size_t a = 0; a < ray.size(); ++a) {
      for (std::size_t b = a + 1; b < ray.size(); ++b) {
        adj[ray[a]][ray[b]] += 1.0;
        adj[ray[b]][ray[a]] += 1.0;
      }
      adj[ray[a]][n] += instance.spin_data[r];
      adj[n][ray[a]] += instance.spin_data[r];
    }
  }
  return adj;
}

}  // namespace dtomo
