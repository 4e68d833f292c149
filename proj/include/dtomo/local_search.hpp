#pragma once

#include <cstdint>
#include <vector>

#include "dtomo/core.hpp"
#include "dtomo/instance.hpp"

namespace dtomo {

// Exact integer gain in cut_value from flipping one spin, computed from the
// cached ray charges: sum over the node's rays of (sigma * Q(r) - 1).
long long flip_gain(const TomographyInstance& instance, std::span<const Spin> sigma,
                    const std::vector<long long>& charges, int node);

// Greedy 1-opt descent from the given start: repeatedly flip the
// lowest-indexed spin with a strictly positive gain until no single flip
// improves the cut. wall.steps counts flips.
RunReport local_search_from(const TomographyInstance& instance, std::vector<Spin> start);

// Same from a uniform random start.
RunReport local_search_1opt(const TomographyInstance& instance, std::uint64_t seed);

// Fraction of restarts that end in a data-satisfying state. Restarts run in
// parallel with per-restart derived seeds, so the result is deterministic.
double sample_local_search(const TomographyInstance& instance, int restarts,
                           std::uint64_t seed);

}  // namespace dtomo
