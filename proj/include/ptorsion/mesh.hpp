#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ptorsion/geometry.hpp"

namespace ptorsion {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conforming triangulation of a convex polygon. Triangles are counter-clockwise
/// node-index triples; `boundary_mask[i]` marks nodes on the polygon boundary.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> boundary_mask;
  double h_max = 0.0;

  // Filled by refine_uniform: nodes [0, coarse_node_count) are the coarse
  // nodes, node coarse_node_count + k is the midpoint of midpoint_parents[k].
  std::size_t coarse_node_count = 0;
  std::vector<std::array<int, 2>> midpoint_parents;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
};

enum class MeshStrategy {
  kAuto,      ///< fan when its elements are well shaped, Delaunay otherwise
  kFan,       ///< fan from the incenter, refined uniformly
  kDelaunay,  ///< fan seeded, boundary and lattice points inserted with flips
};

inline constexpr std::size_t kNodeBudget = 10'000'000;

/// Triangulates `poly` with longest edge at most 1.5 * h_target, followed by
/// one smoothing pass of the interior nodes. Deterministic.
/// Throws std::invalid_argument when h_target is not below the diameter and
/// ResourceError when the node count would exceed kNodeBudget.
Mesh triangulate(const ConvexPolygon& poly, double h_target,
                 MeshStrategy strategy = MeshStrategy::kAuto);

/// Red refinement: every triangle split into four similar children.
Mesh refine_uniform(const Mesh& mesh);

/// Interpolates nodal values from the parent of `fine` (exact for P1).
std::vector<double> prolongate(const Mesh& fine, const std::vector<double>& coarse_values);

double triangle_area(const Mesh& mesh, std::size_t t);
double total_area(const Mesh& mesh);
double longest_edge(const Mesh& mesh);

struct MeshQuality {
  double min_area = 0.0;
  double total_area = 0.0;
  double min_angle_deg = 0.0;
  double max_angle_deg = 0.0;
  double max_boundary_offset = 0.0;  ///< worst distance of a boundary node to the polygon boundary
  bool all_positive = true;
};

MeshQuality mesh_quality(const Mesh& mesh, const ConvexPolygon& poly);

}  // namespace ptorsion
