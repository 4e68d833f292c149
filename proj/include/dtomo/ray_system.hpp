#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dtomo {

// A family of node subsets (rays) over node indices [0, node_count) such
// that any two distinct rays share at most one node. The auxiliary spin is
// not a node here; it is attached per ray by the instance.
struct RaySystem {
  int node_count = 0;
  std::vector<std::vector<int>> rays;

  int ray_count() const { return static_cast<int>(rays.size()); }
  int ray_size(int r) const { return static_cast<int>(rays[r].size()); }

  bool operator==(const RaySystem&) const = default;
};

struct RayViolation {
  int ray_a = -1;
  int ray_b = -1;                // -1 when the problem is within a single ray
  std::vector<int> shared;       // offending node indices
  std::string message;
};

// Empty result means the system is valid; otherwise the first violation
// found (out-of-range index, duplicate node in a ray, empty ray, or a pair
// of rays sharing more than one node).
std::optional<RayViolation> validate_ray_system(const RaySystem& rays);

// height row-rays followed by width column-rays over a row-major grid.
RaySystem build_grid_rays_2d(int width, int height);

// Axis-aligned lines along each of the three axes (axis 0 family first);
// every voxel lies in exactly three rays. Index (i,j,k) -> (i*n2 + j)*n3 + k.
RaySystem build_grid_rays_3d(int n1, int n2, int n3);

// Canonical ray system for an image of the given dims: a single ray (1D),
// rows then columns (2D), or three axis families (3D).
RaySystem grid_rays_for_dims(const std::vector<int>& dims);

}  // namespace dtomo
