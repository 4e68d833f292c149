#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "dtomo/analysis.hpp"
#include "dtomo/instance.hpp"
#include "dtomo/rng.hpp"

using namespace dtomo;

namespace {

BinaryImage glider() {
  return BinaryImage::make({3, 3}, {0, 1, 0, 0, 0, 1, 1, 1, 1});
}

TomographyInstance glider_instance(std::vector<double> lambda = {}) {
  RaySystem rays = build_grid_rays_2d(3, 3);
  std::vector<int> projections = project(glider(), rays);
  if (lambda.empty()) return make_instance(std::move(rays), std::move(projections), 0);
  return make_instance_with_lambda(std::move(rays), std::move(projections), std::move(lambda));
}

TomographyInstance single_ray_instance(int n, int p, double lambda = 1.0) {
  RaySystem rays;
  rays.node_count = n;
  rays.rays.emplace_back();
  for (int i = 0; i < n; ++i) rays.rays[0].push_back(i);
  return make_instance_with_lambda(std::move(rays), {p}, {lambda});
}

}  // namespace

TEST_CASE("2x2 grid rays are rows then columns") {
  const RaySystem rays = build_grid_rays_2d(2, 2);
  REQUIRE(rays.ray_count() == 4);
  CHECK(rays.rays[0] == std::vector<int>{0, 1});
  CHECK(rays.rays[1] == std::vector<int>{2, 3});
  CHECK(rays.rays[2] == std::vector<int>{0, 2});
  CHECK(rays.rays[3] == std::vector<int>{1, 3});
  CHECK_FALSE(validate_ray_system(rays).has_value());
}

TEST_CASE("1x1 grid has two coincident singleton rays and stays valid") {
  const RaySystem rays = build_grid_rays_2d(1, 1);
  REQUIRE(rays.ray_count() == 2);
  CHECK(rays.rays[0] == std::vector<int>{0});
  CHECK(rays.rays[1] == std::vector<int>{0});
  CHECK_FALSE(validate_ray_system(rays).has_value());
}

TEST_CASE("3x3 grid: pixels biject onto row-column ray pairs") {
  const RaySystem rays = build_grid_rays_2d(3, 3);
  REQUIRE(rays.ray_count() == 6);
  for (int r = 0; r < 6; ++r) CHECK(rays.ray_size(r) == 3);
  // The ray graph is K_{3,3}: each pixel is the unique intersection of one
  // row and one column, so the 9 pixels map to the 9 distinct ray pairs.
  std::set<std::pair<int, int>> edges;
  for (int pixel = 0; pixel < 9; ++pixel) {
    int row = -1, col = -1;
    for (int r = 0; r < 6; ++r) {
      const auto& ray = rays.rays[r];
      if (std::find(ray.begin(), ray.end(), pixel) != ray.end()) {
        (r < 3 ? row : col) = r;
      }
    }
    REQUIRE(row >= 0);
    REQUIRE(col >= 3);
    edges.emplace(row, col);
  }
  CHECK(edges.size() == 9);
}

TEST_CASE("3d grids") {
  const RaySystem cube = build_grid_rays_3d(2, 2, 2);
  CHECK(cube.ray_count() == 12);
  for (int r = 0; r < cube.ray_count(); ++r) CHECK(cube.ray_size(r) == 2);
  CHECK_FALSE(validate_ray_system(cube).has_value());

  const RaySystem unit = build_grid_rays_3d(1, 1, 1);
  REQUIRE(unit.ray_count() == 3);
  for (const auto& ray : unit.rays) CHECK(ray == std::vector<int>{0});

  const RaySystem flat = build_grid_rays_3d(2, 2, 1);
  CHECK_FALSE(validate_ray_system(flat).has_value());
  // The last family runs along the third axis; with extent 1 those are singletons.
  for (int r = flat.ray_count() - 4; r < flat.ray_count(); ++r) {
    CHECK(flat.ray_size(r) == 1);
  }
}

TEST_CASE("every grid node lies in exactly 2 rays (2d) or 3 rays (3d)") {
  for (const auto& [dims, expected] :
       std::vector<std::pair<std::vector<int>, int>>{{{4, 7}, 2}, {{3, 4, 2}, 3}}) {
    const RaySystem rays = grid_rays_for_dims(dims);
    std::vector<int> degree(rays.node_count, 0);
    for (const auto& ray : rays.rays) {
      for (int node : ray) ++degree[node];
    }
    for (int d : degree) CHECK(d == expected);
  }
}

TEST_CASE("validate_ray_system reports the first offending pair") {
  RaySystem rays;
  rays.node_count = 3;
  rays.rays = {{0, 1, 2}, {0, 1}};
  const auto violation = validate_ray_system(rays);
  REQUIRE(violation.has_value());
  CHECK(violation->ray_a == 0);
  CHECK(violation->ray_b == 1);
  std::vector<int> shared = violation->shared;
  std::sort(shared.begin(), shared.end());
  CHECK(shared == std::vector<int>{0, 1});
}

TEST_CASE("single-pixel clue rays are valid alongside a row") {
  RaySystem rays = build_grid_rays_2d(3, 3);
  rays.rays.push_back({5});
  rays.rays.push_back({5});
  CHECK_FALSE(validate_ray_system(rays).has_value());
}

TEST_CASE("project sums set pixels per ray") {
  const RaySystem rays = build_grid_rays_2d(2, 2);
  const BinaryImage zeros = BinaryImage::make({2, 2}, {0, 0, 0, 0});
  CHECK(project(zeros, rays) == std::vector<int>{0, 0, 0, 0});
  const BinaryImage diag = BinaryImage::make({2, 2}, {1, 0, 0, 1});
  CHECK(project(diag, rays) == std::vector<int>{1, 1, 1, 1});
  // Glider: hand-summed rows (1,1,3), columns (1,2,2).
  CHECK(project(glider(), build_grid_rays_2d(3, 3)) == std::vector<int>{1, 1, 3, 1, 2, 2});
}

TEST_CASE("make_instance derives spin data") {
  CHECK(single_ray_instance(3, 0).spin_data == std::vector<int>{3});
  CHECK(single_ray_instance(3, 3).spin_data == std::vector<int>{-3});
  CHECK(single_ray_instance(4, 1).spin_data == std::vector<int>{2});
}

TEST_CASE("make_instance rejects infeasible data") {
  RaySystem rays;
  rays.node_count = 3;
  rays.rays = {{0, 1, 2}};
  CHECK_THROWS_AS(make_instance(std::move(rays), {5}, 0), InfeasibleError);

  // Row family mass 2, column family mass 1.
  CHECK_THROWS_AS(make_instance(build_grid_rays_2d(2, 2), {2, 0, 1, 0}, 0), InfeasibleError);
}

TEST_CASE("instances generated from an image are always consistent") {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    std::vector<int> dims;
    const int rank = 1 + static_cast<int>(rng.next_below(3));
    for (int d = 0; d < rank; ++d) dims.push_back(1 + static_cast<int>(rng.next_below(4)));
    const BinaryImage image = random_image(dims, 0.5, rng.next());
    RaySystem rays = grid_rays_for_dims(dims);
    std::vector<int> projections = project(image, rays);
    CHECK_NOTHROW(make_instance(std::move(rays), std::move(projections), rng.next()));
  }
}

TEST_CASE("lambda values from small primes") {
  CHECK(lambda_from_prime(2) == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(lambda_from_prime(5) == doctest::Approx(1.118034).epsilon(1e-6));
  CHECK(lambda_from_prime(3) == doctest::Approx(1.732051).epsilon(1e-6));
}

TEST_CASE("lambda_weights: deterministic, distinct, above one") {
  const std::vector<double> a = lambda_weights(10000, 99);
  const std::vector<double> b = lambda_weights(10000, 99);
  CHECK(a == b);
  std::vector<double> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted.front() > 1.0);
  for (std::size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i] > sorted[i - 1]);
  CHECK(lambda_weights(10000, 100) != a);
}

TEST_CASE("assemble_charges entries") {
  // Node 1 of a 2x2 grid lies in rays 0 (row) and 3 (column).
  TomographyInstance inst = make_instance(build_grid_rays_2d(2, 2), {1, 1, 1, 1}, 5);
  const std::vector<Spin> sigma = {1, -1, -1, 1};
  const VectorChargeTable table = assemble_charges(inst, sigma);
  REQUIRE(table.free_charges[1].size() == 2);
  CHECK(table.free_charges[1][0].first == 0);
  CHECK(table.free_charges[1][0].second == doctest::Approx(-std::sqrt(inst.lambda[0])));
  CHECK(table.free_charges[1][1].first == 3);
  CHECK(table.free_charges[1][1].second == doctest::Approx(-std::sqrt(inst.lambda[3])));

  // Unscaled: a node in two rays has |q|^2 = 2.
  const TomographyInstance flat = glider_instance(std::vector<double>(6, 1.0));
  const VectorChargeTable unscaled = assemble_charges(flat, image_to_sigma(glider()));
  for (int node = 0; node < flat.node_count(); ++node) {
    double norm2 = 0.0;
    for (const auto& [r, q] : unscaled.free_charges[node]) norm2 += q * q;
    CHECK(norm2 == doctest::Approx(2.0).epsilon(1e-12));
  }
  // Auxiliary charge per ray: spin data (1,1,-3,1,-1,-1) with lambda = 1.
  CHECK(unscaled.aux_charge == std::vector<double>{1, 1, -3, 1, -1, -1});
}

TEST_CASE("charge table reconstructs exactly from sigma and the instance") {
  const TomographyInstance inst = glider_instance();
  Rng rng(3);
  std::vector<Spin> sigma(inst.node_count());
  for (auto& s : sigma) s = (rng.next() & 1) ? Spin{1} : Spin{-1};
  const VectorChargeTable once = assemble_charges(inst, sigma);
  const VectorChargeTable again = assemble_charges(inst, sigma);
  CHECK(once.free_charges == again.free_charges);
  CHECK(once.aux_charge == again.aux_charge);
  for (int node = 0; node < inst.node_count(); ++node) {
    CHECK(once.free_charges[node].size() == inst.node_rays[node].size());
  }
}

TEST_CASE("to_adjacency weights") {
  const TomographyInstance inst = glider_instance();
  const AdjacencyMatrix adj = to_adjacency(inst);
  CHECK(adj[0][1] == 1.0);   // same row
  CHECK(adj[0][4] == 0.0);   // different row and column
  CHECK(adj[0][3] == 1.0);   // same column
  // Pixel 6 lies in row 2 (spin data -3) and column 0 (spin data 1).
  CHECK(adj[6][9] == -2.0);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    CHECK(adj[i][i] == 0.0);
    for (std::size_t j = 0; j < adj.size(); ++j) CHECK(adj[i][j] == adj[j][i]);
  }
}

TEST_CASE("cut identity: C = sum(A)/4 - H/2 on the expanded graph") {
  // With H = 1/2 sum_{m,n} A sigma sigma over ordered pairs,
  // C = 1/4 sum A (1 - sigma sigma) = sum(A)/4 - H/2.
  const TomographyInstance inst = glider_instance();
  const AdjacencyMatrix adj = to_adjacency(inst);
  double total_weight = 0.0;
  for (const auto& row : adj) {
    for (double w : row) total_weight += w;
  }
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Spin> sigma(inst.node_count() + 1);
    for (int i = 0; i < inst.node_count(); ++i) {
      sigma[i] = (rng.next() & 1) ? Spin{1} : Spin{-1};
    }
    sigma.back() = 1;  // auxiliary spin
    const double h = ising_energy(adj, sigma);
    const double c = total_weight / 4.0 - h / 2.0;
    CHECK(c == doctest::Approx(static_cast<double>(
                   cut_value(inst, std::span<const Spin>(sigma.data(), inst.node_count())))));
  }
}
