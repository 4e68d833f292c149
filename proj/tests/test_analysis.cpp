#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dtomo/analysis.hpp"
#include "dtomo/dynamics.hpp"
#include "dtomo/rng.hpp"

using namespace dtomo;

namespace {

BinaryImage glider() {
  return BinaryImage::make({3, 3}, {0, 1, 0, 0, 0, 1, 1, 1, 1});
}

TomographyInstance glider_instance() {
  RaySystem rays = build_grid_rays_2d(3, 3);
  std::vector<int> projections = project(glider(), rays);
  return make_instance(std::move(rays), std::move(projections), 0);
}

TomographyInstance single_ray_instance(int n, int p, double lambda = 1.0) {
  RaySystem rays;
  rays.node_count = n;
  rays.rays.emplace_back();
  for (int i = 0; i < n; ++i) rays.rays[0].push_back(i);
  return make_instance_with_lambda(std::move(rays), {p}, {lambda});
}

SpinState random_spin_state(int n, Rng& rng) {
  std::vector<Spin> sigma(n);
  for (auto& s : sigma) s = (rng.next() & 1) ? Spin{1} : Spin{-1};
  std::vector<double> x(n);
  for (auto& v : x) v = rng.next_symmetric();
  return SpinState{std::move(sigma), std::move(x)};
}

}  // namespace

TEST_CASE("ising_energy on a single edge") {
  const AdjacencyMatrix adj = {{0.0, 1.0}, {1.0, 0.0}};
  CHECK(ising_energy(adj, std::vector<Spin>{1, 1}) == doctest::Approx(1.0));
  CHECK(ising_energy(adj, std::vector<Spin>{1, -1}) == doctest::Approx(-1.0));
}

TEST_CASE("ray charges") {
  const TomographyInstance full = single_ray_instance(5, 5);
  CHECK(ray_charge(full, std::vector<Spin>(5, Spin{1}), 0) == 0);

  const TomographyInstance empty = single_ray_instance(4, 0);
  CHECK(ray_charge(empty, std::vector<Spin>(4, Spin{1}), 0) == 8);

  const TomographyInstance one = single_ray_instance(3, 1);
  CHECK(ray_charge(one, std::vector<Spin>{1, -1, -1}, 0) == 0);
}

TEST_CASE("ray charge parity is even for any sigma") {
  Rng rng(5);
  const TomographyInstance inst = glider_instance();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Spin> sigma(inst.node_count());
    for (auto& s : sigma) s = (rng.next() & 1) ? Spin{1} : Spin{-1};
    for (long long q : ray_charges(inst, sigma)) CHECK(q % 2 == 0);
  }
}

TEST_CASE("max_cut_bound") {
  CHECK(max_cut_bound(single_ray_instance(4, 1)) == 9);
  RaySystem rays = build_grid_rays_2d(3, 3);
  const TomographyInstance zeros = make_instance(std::move(rays), std::vector<int>(6, 0), 0);
  CHECK(max_cut_bound(zeros) == 54);
  CHECK(max_cut_bound(glider_instance()) == 14);
}

TEST_CASE("cut_value") {
  const TomographyInstance inst = glider_instance();
  const std::vector<Spin> sigma = image_to_sigma(glider());
  CHECK(cut_value(inst, sigma) == 14);
  CHECK(cut_value(inst, sigma) == max_cut_bound(inst));

  const TomographyInstance single = single_ray_instance(4, 1);
  CHECK(cut_value(single, std::vector<Spin>(4, Spin{1})) == 0);
}

TEST_CASE("is_solution") {
  const TomographyInstance inst = glider_instance();
  CHECK(is_solution(inst, image_to_sigma(glider())));
  RaySystem rays = build_grid_rays_2d(3, 3);
  const TomographyInstance zeros = make_instance(std::move(rays), std::vector<int>(6, 0), 0);
  CHECK_FALSE(is_solution(zeros, std::vector<Spin>(9, Spin{1})));

  // Swapping two rows with equal sums yields a different valid image.
  const BinaryImage swapped = BinaryImage::make({3, 3}, {0, 0, 1, 0, 1, 0, 1, 1, 1});
  CHECK(swapped != glider());
  CHECK(is_solution(inst, image_to_sigma(swapped)));
}

TEST_CASE("is_solution iff cut reaches the bound (exhaustive on 2x3)") {
  const BinaryImage image = random_image({2, 3}, 0.5, 77);
  RaySystem rays = grid_rays_for_dims({2, 3});
  std::vector<int> projections = project(image, rays);
  const TomographyInstance inst = make_instance(std::move(rays), std::move(projections), 1);
  const long long bound = max_cut_bound(inst);
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<Spin> sigma(6);
    for (int i = 0; i < 6; ++i) sigma[i] = (mask >> i) & 1 ? Spin{1} : Spin{-1};
    CHECK(is_solution(inst, sigma) == (cut_value(inst, sigma) == bound));
  }
}

TEST_CASE("relaxed_cut reduces to the weighted binary cut at coincident X") {
  const TomographyInstance inst = glider_instance();
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Spin> sigma(inst.node_count());
    for (auto& s : sigma) s = (rng.next() & 1) ? Spin{1} : Spin{-1};
    // Everything at X = 0, coincident with the auxiliary particle.
    const SpinState state{sigma, std::vector<double>(inst.node_count(), 0.0)};
    double weighted = 0.0;
    for (int r = 0; r < inst.ray_count(); ++r) {
      const long long d = inst.rays.ray_size(r) - inst.projections[r];
      const long long half = ray_charge(inst, sigma, r) / 2;
      weighted += inst.lambda[r] * static_cast<double>(d * d - half * half);
    }
    CHECK(relaxed_cut(inst, state) == doctest::Approx(weighted).epsilon(1e-12));
  }
}

TEST_CASE("relaxed_cut hand value on the attracting pair") {
  const TomographyInstance inst = single_ray_instance(2, 1);
  const SpinState state{{1, -1}, {0.5, -0.5}};
  CHECK(relaxed_cut(inst, state) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("global_shift basics") {
  const TomographyInstance inst = glider_instance();
  Rng rng(11);
  SpinState state = random_spin_state(inst.node_count(), rng);

  SpinState same = state;
  global_shift(same, 0.0);
  CHECK(same.x == state.x);
  CHECK(same.sigma == state.sigma);

  SpinState flipped = state;
  global_shift(flipped, 2.0);
  for (int i = 0; i < state.size(); ++i) {
    CHECK(flipped.x[i] == doctest::Approx(state.x[i]).epsilon(1e-15));
    CHECK(flipped.sigma[i] == -state.sigma[i]);
  }
}

TEST_CASE("relaxed_cut is invariant under global shifts of the free spins") {
  // The auxiliary spin stays pinned, so the invariance is exact on balanced
  // data (every spin_data(r) = 0), where the auxiliary carries no charge.
  const BinaryImage stripes =
      BinaryImage::make({4, 4}, {1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 1});
  RaySystem rays = build_grid_rays_2d(4, 4);
  std::vector<int> projections = project(stripes, rays);
  const TomographyInstance inst = make_instance(std::move(rays), std::move(projections), 2);
  for (int v : inst.spin_data) REQUIRE(v == 0);

  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    SpinState state = random_spin_state(inst.node_count(), rng);
    const double before = relaxed_cut(inst, state);
    global_shift(state, rng.next_symmetric() * 3.0);
    CHECK(std::fabs(relaxed_cut(inst, state) - before) <= 1e-9);
    for (double x : state.x) {
      CHECK(x >= -1.0);
      CHECK(x < 1.0);
    }
  }
}

TEST_CASE("strong cluster detection") {
  const SpinState state{{1, 1, -1}, {0.3, 0.3, -0.7}};
  const ClusterPartition partition = detect_strong_clusters(state, 1e-6);
  REQUIRE(partition.clusters.size() == 3);
  CHECK(partition.clusters[0].nodes == std::vector<int>{2});
  CHECK(partition.clusters[0].x_rep == doctest::Approx(-0.7));
  CHECK(partition.clusters[1].nodes == std::vector<int>{3});  // auxiliary at 0
  CHECK(partition.clusters[2].nodes == std::vector<int>{0, 1});
  CHECK(partition.clusters[2].x_rep == doctest::Approx(0.3));

  const SpinState spread{{1, -1, 1}, {-0.5, 0.25, 0.75}};
  CHECK(detect_strong_clusters(spread, 1e-9).clusters.size() == 4);
  CHECK(detect_strong_clusters(spread).clusters.size() == 4);
}

TEST_CASE("brute force on forced and tiny instances") {
  RaySystem unit = build_grid_rays_2d(1, 1);
  const TomographyInstance forced = make_instance(std::move(unit), {1, 1}, 0);
  const BruteForceResult result = brute_force_solutions(forced);
  REQUIRE(result.solutions.size() == 1);
  CHECK(result.solutions[0] == std::vector<Spin>{1});
  CHECK(result.max_cut == max_cut_bound(forced));

  const TomographyInstance two = make_instance(build_grid_rays_2d(2, 2), {1, 1, 1, 1}, 0);
  const BruteForceResult pair = brute_force_solutions(two);
  REQUIRE(pair.solutions.size() == 2);
  const std::set<std::vector<Spin>> expected = {{1, -1, -1, 1}, {-1, 1, 1, -1}};
  CHECK(std::set<std::vector<Spin>>(pair.solutions.begin(), pair.solutions.end()) == expected);
}

TEST_CASE("brute force on the glider instance") {
  const TomographyInstance inst = glider_instance();
  const BruteForceResult result = brute_force_solutions(inst);
  CHECK_FALSE(result.solutions.empty());
  CHECK(result.max_cut == 14);
  for (const auto& sigma : result.solutions) CHECK(cut_value(inst, sigma) == 14);
}

TEST_CASE("brute force size guard") {
  RaySystem rays;
  rays.node_count = 21;
  rays.rays.emplace_back();
  for (int i = 0; i < 21; ++i) rays.rays[0].push_back(i);
  const TomographyInstance inst = make_instance(std::move(rays), {0}, 0);
  CHECK_THROWS_AS(brute_force_solutions(inst), std::invalid_argument);
}

TEST_CASE("cut_value equals the clique-by-clique cut with separated auxiliaries") {
  // Expanded graph: each ray keeps its own auxiliary node, so no edges are
  // merged. The cut function evaluated there must match cut_value.
  const BinaryImage image = random_image({4, 4}, 0.5, 19);
  RaySystem rays = build_grid_rays_2d(4, 4);
  std::vector<int> projections = project(image, rays);
  const TomographyInstance inst = make_instance(std::move(rays), std::move(projections), 3);

  const int n = inst.node_count();
  const int total = n + inst.ray_count();  // one auxiliary node per ray
  AdjacencyMatrix expanded(total, std::vector<double>(total, 0.0));
  for (int r = 0; r < inst.ray_count(); ++r) {
    const auto& ray = inst.rays.rays[r];
    const int aux = n + r;
    for (std::size_t a = 0; a < ray.size(); ++a) {
      for (std::size_t b = a + 1; b < ray.size(); ++b) {
        expanded[ray[a]][ray[b]] += 1.0;
        expanded[ray[b]][ray[a]] += 1.0;
      }
      expanded[ray[a]][aux] += inst.spin_data[r];
      expanded[aux][ray[a]] += inst.spin_data[r];
    }
  }

  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Spin> sigma(total, Spin{1});
    for (int i = 0; i < n; ++i) sigma[i] = (rng.next() & 1) ? Spin{1} : Spin{-1};
    double cut = 0.0;
    for (int a = 0; a < total; ++a) {
      for (int b = 0; b < total; ++b) {
        cut += expanded[a][b] * (1.0 - sigma[a] * sigma[b]);
      }
    }
    cut /= 4.0;
    CHECK(cut == doctest::Approx(static_cast<double>(
                     cut_value(inst, std::span<const Spin>(sigma.data(), n)))));
  }
}

TEST_CASE("defect fixture realizes the two-ray pair defect") {
  const DefectFixture fixture = build_defect_fixture();
  const auto residuals = ray_charges(fixture.instance, fixture.state.sigma);
  int charged = 0;
  for (long long q : residuals) {
    if (q != 0) {
      ++charged;
      CHECK(std::abs(q) == 2);
    }
  }
  CHECK(charged == 2);

  // No single flip improves the cut.
  const long long base = cut_value(fixture.instance, fixture.state.sigma);
  for (int node = 0; node < fixture.instance.node_count(); ++node) {
    std::vector<Spin> flipped = fixture.state.sigma;
    flipped[node] = -flipped[node];
    CHECK(cut_value(fixture.instance, flipped) <= base);
  }

  // Flipping the designated pair solves the instance.
  std::vector<Spin> corrected = fixture.state.sigma;
  corrected[fixture.alpha] = -corrected[fixture.alpha];
  corrected[fixture.beta] = -corrected[fixture.beta];
  CHECK(is_solution(fixture.instance, corrected));

  // The pair sits above every other member of its rays, auxiliary included.
  for (int node : {fixture.alpha, fixture.beta}) {
    CHECK(fixture.state.x[node] > 0.0);
    for (int r : fixture.instance.node_rays[node]) {
      for (int other : fixture.instance.rays.rays[r]) {
        if (other != fixture.alpha && other != fixture.beta) {
          CHECK(fixture.state.x[other] < fixture.state.x[node]);
        }
      }
    }
  }
}
