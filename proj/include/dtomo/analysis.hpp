#pragma once

#include <span>
#include <vector>

#include "dtomo/core.hpp"
#include "dtomo/instance.hpp"

namespace dtomo {

// H = 1/2 sum A_{mn} sigma_m sigma_n over a symmetric adjacency matrix.
double ising_energy(const AdjacencyMatrix& adjacency, std::span<const Spin> sigma);

// Q(r; sigma) = sum of sigma over the ray plus spin_data(r). Always even.
long long ray_charge(const TomographyInstance& instance, std::span<const Spin> sigma, int r);
std::vector<long long> ray_charges(const TomographyInstance& instance,
                                   std::span<const Spin> sigma);

// Unscaled cut of the problem graph: max_cut_bound - 1/4 sum Q(r)^2. Exact
// integer arithmetic (Q is even).
long long cut_value(const TomographyInstance& instance, std::span<const Spin> sigma);

// sum_r (N(r) - P(r))^2; attained exactly by data-satisfying images.
long long max_cut_bound(const TomographyInstance& instance);

// True iff every ray charge vanishes.
bool is_solution(const TomographyInstance& instance, std::span<const Spin> sigma);

// Lambda-scaled relaxed cut: the Lyapunov function of the dynamics. Equals
// the lambda-weighted binary cut when all continuous components coincide.
double relaxed_cut(const TomographyInstance& instance, const SpinState& state);

// Translates every free X by r with wrap and a sigma flip per boundary
// crossing; the auxiliary spin stays pinned. Leaves relaxed_cut unchanged.
void global_shift(SpinState& state, double r);

// Strong clusters: groups of particles with (near-)equal X. The auxiliary
// spin participates as particle index node_count at X = 0.
struct ClusterPartition {
  struct Cluster {
    std::vector<int> nodes;  // ascending; node_count denotes the auxiliary spin
    double x_rep = 0.0;      // mean X of the members
  };
  std::vector<Cluster> clusters;  // ordered by increasing x_rep
};

// Single-linkage grouping on sorted X with gap threshold tol. The overload
// without tol uses 1e-9 per particle, matching the residual spread Euler
// steps leave behind.
ClusterPartition detect_strong_clusters(const SpinState& state, double tol);
ClusterPartition detect_strong_clusters(const SpinState& state);

// Signed total charge of a node subset on one ray: sum of sigma over subset
// members of the ray plus spin_data(r) if the subset includes the auxiliary
// particle (index node_count). Unscaled.
long long subset_ray_charge(const TomographyInstance& instance, std::span<const Spin> sigma,
                            std::span<const int> subset, int r);

// Exhaustive enumeration over all 2^N spin assignments (N <= 20): the set of
// zero-residual states and the maximum cut over all states.
struct BruteForceResult {
  std::vector<std::vector<Spin>> solutions;  // ascending bit-mask order
  long long max_cut = 0;
};
BruteForceResult brute_force_solutions(const TomographyInstance& instance);

// 2x2 instance with rows (1,1) / cols (1,1) and the spin configuration with
// one full row set and the other clear: exactly two rays carry charge +-2,
// no single flip improves the cut, and flipping {alpha, beta} solves it.
// The state places alpha and beta above every other member of their rays.
struct DefectFixture {
  TomographyInstance instance;
  SpinState state;
  int alpha = 0;
  int beta = 0;
};
DefectFixture build_defect_fixture();

}  // namespace dtomo
