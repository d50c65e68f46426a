#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "ptorsion/mesh.hpp"

using namespace ptorsion;

namespace {

void check_mesh_contract(const Mesh& m, const ConvexPolygon& poly, double h_target) {
  const MeshQuality q = mesh_quality(m, poly);
  CHECK(q.all_positive);
  CHECK(q.min_area > 1e-14 * q.total_area);
  CHECK(std::abs(q.total_area - area(poly)) <= 1e-9 * area(poly));
  CHECK(q.max_boundary_offset <= 1e-10);
  CHECK(m.h_max <= 1.5 * h_target);
  // Every boundary edge (used by one triangle) joins two boundary nodes.
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  for (const auto& [e, c] : count) {
    CHECK(c <= 2);
    if (c == 1) {
      CHECK(m.boundary_mask[e.first]);
      CHECK(m.boundary_mask[e.second]);
    }
  }
}

}  // namespace

TEST_CASE("unit square mesh tiles the square") {
  const ConvexPolygon sq = unit_square();
  const Mesh m = triangulate(sq, 0.5);
  CHECK(std::abs(total_area(m) - 1.0) <= 1e-12);
  check_mesh_contract(m, sq, 0.5);
}

TEST_CASE("meshes of assorted shapes satisfy the contract") {
  std::vector<ConvexPolygon> shapes = {
      unit_square(),
      equilateral_triangle(1.0),
      materialize(RegularNgonShape{64, 1.0}),
      materialize(EllipsePolygonShape{2, 1, 256}),
      materialize(RectangleShape{100, 0.5}),
      materialize(TriangleShape{{0, 0}, {2, 0}, {0, 1}}),
  };
  for (std::uint64_t s = 1; s <= 10; ++s)
    shapes.push_back(random_convex_polygon(s, 10, s % 2 ? SamplerMode::kHullOfUniform
                                                        : SamplerMode::kPerturbedNgon));
  for (const auto& poly : shapes) {
    const double h = inradius(poly).radius / 2;
    for (auto strategy : {MeshStrategy::kAuto, MeshStrategy::kDelaunay}) {
      const Mesh m = triangulate(poly, h, strategy);
      check_mesh_contract(m, poly, h);
      const MeshQuality q = mesh_quality(m, poly);
      double shortest = 1e300;
      for (std::size_t i = 0; i < poly.size(); ++i)
        shortest = std::min(shortest, distance(poly.vertex(i), poly.vertex(i + 1)));
      if (strategy == MeshStrategy::kDelaunay) {
        CHECK(q.max_angle_deg < 140.0);
        if (shortest >= h) CHECK(q.min_angle_deg > 10.0);
      }
    }
  }
}

TEST_CASE("refinement halves the mesh size and prolongates linears exactly") {
  const ConvexPolygon poly = random_convex_polygon(3, 8, SamplerMode::kHullOfUniform);
  const Mesh m = triangulate(poly, inradius(poly).radius / 2);
  const Mesh f = refine_uniform(m);
  CHECK(f.triangle_count() == 4 * m.triangle_count());
  CHECK(f.h_max == doctest::Approx(m.h_max / 2).epsilon(0.1));
  check_mesh_contract(f, poly, m.h_max / 1.5 / 2 * 1.0000001);
  std::vector<double> lin;
  for (const Vec2& x : m.nodes) lin.push_back(2 * x.x - 3 * x.y + 1);
  const auto up = prolongate(f, lin);
  REQUIRE(up.size() == f.node_count());
  for (std::size_t i = 0; i < f.node_count(); ++i)
    CHECK(up[i] == doctest::Approx(2 * f.nodes[i].x - 3 * f.nodes[i].y + 1).epsilon(1e-12));
}

TEST_CASE("mesh size preconditions") {
  const ConvexPolygon sq = unit_square();
  CHECK_THROWS_AS(triangulate(sq, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(triangulate(sq, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(triangulate(sq, 1e-5), ResourceError);
}

TEST_CASE("triangulation is deterministic") {
  const ConvexPolygon poly = random_convex_polygon(9, 8, SamplerMode::kPerturbedNgon);
  const Mesh a = triangulate(poly, 0.2, MeshStrategy::kDelaunay);
  const Mesh b = triangulate(poly, 0.2, MeshStrategy::kDelaunay);
  CHECK(a.nodes == b.nodes);
  CHECK(a.triangles == b.triangles);
}
