#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dtomo/core.hpp"
#include "dtomo/ray_system.hpp"

namespace dtomo {

// Projection data that no image can satisfy (P(r) > N(r)) or that fails the
// cross-family mass check.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A ray system together with its projection data and the derived spin-side
// quantities: spin_data(r) = N(r) - 2 P(r) and the ray weights lambda(r).
struct TomographyInstance {
  RaySystem rays;
  std::vector<int> projections;            // P(r)
  std::vector<int> spin_data;              // N(r) - 2 P(r)
  std::vector<double> lambda;              // per-ray weight, > 0
  std::uint64_t lambda_seed = 0;           // seed lambda was derived from
  std::vector<std::vector<int>> node_rays; // rays containing each node, ascending

  int node_count() const { return rays.node_count; }
  int ray_count() const { return rays.ray_count(); }
};

// sqrt(p)/floor(sqrt(p)); in (1, 2) and distinct across distinct primes.
double lambda_from_prime(long long p);

// The first ray_count primes, shuffled by the seeded generator, mapped
// through lambda_from_prime. Deterministic per seed.
std::vector<double> lambda_weights(int ray_count, std::uint64_t seed);

// P(r) = number of set pixels in each ray.
std::vector<int> project(const BinaryImage& image, const RaySystem& rays);

// Builds the instance: validates the ray system, checks feasibility of the
// projections (throws InfeasibleError), derives spin_data and lambda.
TomographyInstance make_instance(RaySystem rays, std::vector<int> projections,
                                 std::uint64_t seed);

// Same, with explicit per-ray weights (> 0). Test fixtures use this to pin
// lambda to exact values.
TomographyInstance make_instance_with_lambda(RaySystem rays, std::vector<int> projections,
                                             std::vector<double> lambda);

// I.i.d. Bernoulli(density) pixels, deterministic per seed.
BinaryImage random_image(std::vector<int> dims, double density, std::uint64_t seed);

// Sparse per-particle charge vectors over the ray axes: entry (r, sigma*sqrt(lambda(r)))
// for each ray containing the node, and spin_data(r)*sqrt(lambda(r)) for the
// auxiliary spin on every ray.
struct VectorChargeTable {
  std::vector<std::vector<std::pair<int, double>>> free_charges;  // per node, ray-ascending
  std::vector<double> aux_charge;                                 // dense over rays
};

VectorChargeTable assemble_charges(const TomographyInstance& instance,
                                   std::span<const Spin> sigma);

// Unscaled weighted adjacency of the problem graph with the auxiliary spin
// contracted to index node_count: free-free weight = number of shared rays,
// free-aux weight = sum of spin_data over the node's rays.
using AdjacencyMatrix = std::vector<std::vector<double>>;
AdjacencyMatrix to_adjacency(const TomographyInstance& instance);

}  // namespace dtomo
