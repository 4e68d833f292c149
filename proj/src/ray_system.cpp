#include "dtomo/ray_system.hpp"

#include <algorithm>
#include <stdexcept>

namespace dtomo {

std::optional<RayViolation> validate_ray_system(const RaySystem& rays) {
  for (int r = 0; r < rays.ray_count(); ++r) {
    const auto& ray = rays.rays[r];
    if (ray.empty()) {
      return RayViolation{r, -1, {}, "ray " + std::to_string(r) + " is empty"};
    }
    std::vector<int> sorted = ray;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 0 || sorted[i] >= rays.node_count) {
        return RayViolation{r, -1, {sorted[i]},
                            "ray " + std::to_string(r) + " references node " +
                                std::to_string(sorted[i]) + " outside [0, " +
                                std::to_string(rays.node_count) + ")"};
      }
      if (i > 0 && sorted[i] == sorted[i - 1]) {
        return RayViolation{r, -1, {sorted[i]},
                            "ray " + std::to_string(r) + " repeats node " +
                                std::to_string(sorted[i])};
      }
    }
  }

  // Pairwise intersections via per-node membership lists: two rays meeting
  // at >= 2 nodes show up as a repeated (ray, ray) pair across nodes.
  std::vector<std::vector<int>> members(rays.node_count);
  for (int r = 0; r < rays.ray_count(); ++r) {
    for (int node : rays.rays[r]) members[node].push_back(r);
  }
  std::vector<std::vector<std::pair<int, int>>> seen(rays.ray_count());
  for (int node = 0; node < rays.node_count; ++node) {
    const auto& in = members[node];
    for (std::size_t a = 0; a < in.size(); ++a) {
      for (std::size_t b = a + 1; b < in.size(); ++b) {
        const int ra = std::min(in[a], in[b]);
        const int rb = std::max(in[a], in[b]);
        auto& pairs = seen[ra];
        auto it = std::find_if(pairs.begin(), pairs.end(),
                               [rb](const auto& p) { return p.first == rb; });
        if (it == pairs.end()) {
          pairs.push_back({rb, node});
        } else {
          return RayViolation{ra, rb, {it->second, node},
                              "rays " + std::to_string(ra) + " and " + std::to_string(rb) +
                                  " share nodes " + std::to_string(it->second) + " and " +
                                  std::to_string(node)};
        }
      }
    }
  }
  return std::nullopt;
}

RaySystem build_grid_rays_2d(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  RaySystem out;
  out.node_count = width * height;
  out.rays.reserve(static_cast<std::size_t>(width) + height);
  for (int r = 0; r < height; ++r) {
    std::vector<int> ray(width);
    for (int c = 0; c < width; ++c) ray[c] = r * width + c;
    out.rays.push_back(std::move(ray));
  }
  for (int c = 0; c < width; ++c) {
    std::vector<int> ray(height);
    for (int r = 0; r < height; ++r) ray[r] = r * width + c;
    out.rays.push_back(std::move(ray));
  }
  return out;
}

RaySystem build_grid_rays_3d(int n1, int n2, int n3) {
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  const auto at = [n2, n3](int i, int j, int k) { return (i * n2 + j) * n3 + k; };
  RaySystem out;
  out.node_count = n1 * n2 * n3;
  out.rays.reserve(static_cast<std::size_t>(n2) * n3 + static_cast<std::size_t>(n1) * n3 +
                   static_cast<std::size_t>(n1) * n2);
  for (int j = 0; j < n2; ++j) {
    for (int k = 0; k < n3; ++k) {
      std::vector<int> ray(n1);
      for (int i = 0; i < n1; ++i) ray[i] = at(i, j, k);
      out.rays.push_back(std::move(ray));
    }
  }
  for (int i = 0; i < n1; ++i) {
    for (int k = 0; k < n3; ++k) {
      std::vector<int> ray(n2);
      for (int j = 0; j < n2; ++j) ray[j] = at(i, j, k);
      out.rays.push_back(std::move(ray));
    }
  }
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      std::vector<int> ray(n3);
      for (int k = 0; k < n3; ++k) ray[k] = at(i, j, k);
      out.rays.push_back(std::move(ray));
    }
  }
  return out;
}

RaySystem grid_rays_for_dims(const std::vector<int>& dims) {
  switch (dims.size()) {
    case 1: {
      if (dims[0] < 1) throw std::invalid_argument("grid dimensions must be positive");
      RaySystem out;
      out.node_count = dims[0];
      out.rays.emplace_back();
      for (int i = 0; i < dims[0]; ++i) out.rays[0].push_back(i);
      return out;
    }
    case 2:
      return build_grid_rays_2d(/*width=*/dims[1], /*height=*/dims[0]);
    case 3:
      return build_grid_rays_3d(dims[0], dims[1], dims[2]);
    default:
      throw std::invalid_argument("dims must have 1 to 3 entries");
  }
}

}  // namespace dtomo
