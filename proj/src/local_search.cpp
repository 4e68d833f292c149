#include "dtomo/local_search.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "dtomo/analysis.hpp"
#include "dtomo/rng.hpp"

namespace dtomo {

namespace {
constexpr std::uint64_t kStartStream = 0x316f7074ull;
constexpr std::uint64_t kRestartStream = 0x726573746172ull;
}  // namespace

long long flip_gain(const TomographyInstance& instance, std::span<const Spin> sigma,
                    const std::vector<long long>& charges, int node) {
  long long gain = 0;
  for (int r : instance.node_rays[node]) gain += sigma[node] * charges[r] - 1;
  return gain;
}

RunReport local_search_from(const TomographyInstance& instance, std::vector<Spin> start) {
  if (static_cast<int>(start.size()) != instance.node_count()) {
    throw std::invalid_argument("start length does not match instance");
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Spin> sigma = std::move(start);
  std::vector<long long> charges = ray_charges(instance, sigma);

  RunReport report;
  while (true) {
    int flipped = -1;
    for (int node = 0; node < instance.node_count(); ++node) {
      if (flip_gain(instance, sigma, charges, node) > 0) {
        flipped = node;
        break;
      }
    }
    if (flipped < 0) break;
    for (int r : instance.node_rays[flipped]) charges[r] -= 2 * sigma[flipped];
    sigma[flipped] = -sigma[flipped];
    ++report.wall.steps;
  }

  report.solved = std::all_of(charges.begin(), charges.end(),
                              [](long long q) { return q == 0; });
  report.residuals = std::move(charges);
  report.stage_cuts.push_back(cut_value(instance, sigma));
  report.final_sigma = std::move(sigma);
  report.wall.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

RunReport local_search_1opt(const TomographyInstance& instance, std::uint64_t seed) {
  Rng rng(mix_seed(seed, kStartStream));
  std::vector<Spin> start(instance.node_count());
  for (auto& s : start) s = (rng.next() & 1) ? Spin{1} : Spin{-1};
  return local_search_from(instance, std::move(start));
}

double sample_local_search(const TomographyInstance& instance, int restarts,
                           std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  std::vector<unsigned char> solved(restarts, 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < restarts; ++i) {
    const RunReport report =
        local_search_1opt(instance, mix_seed(seed, kRestartStream, static_cast<std::uint64_t>(i)));
    solved[i] = report.solved && is_solution(instance, report.final_sigma) ? 1 : 0;
  }
  long long successes = 0;
  for (unsigned char s : solved) successes += s;
  return static_cast<double>(successes) / static_cast<double>(restarts);
}

}  // namespace dtomo
