#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ptorsion {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Raised when a vertex list violates the convex-polygon invariants.
class InvalidPolygon : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the random sampler cannot produce a valid polygon.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strictly convex, counter-clockwise planar polygon. Immutable once built.
///
/// Construction validates: at least three vertices, consecutive vertices
/// separated by more than 1e-12 * diameter, every turn strictly positive
/// (cross product > 1e-12 * diameter^2) and total turning of one revolution.
class ConvexPolygon {
 public:
  static ConvexPolygon from_vertices(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vec2& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  double diameter() const { return diameter_; }
  /// Mean of the vertices; used as the local origin for all computations.
  Vec2 reference() const { return reference_; }

  bool operator==(const ConvexPolygon& o) const { return vertices_ == o.vertices_; }

 private:
  ConvexPolygon() = default;
  std::vector<Vec2> vertices_;
  double diameter_ = 0.0;
  Vec2 reference_;
};

/// Relative tolerances of the convexity invariants.
inline constexpr double kVertexSeparationTol = 1e-12;
inline constexpr double kConvexityTol = 1e-12;

/// Drops vertices that would violate the invariants (near-duplicates and
/// near-collinear middles) and builds the polygon. Used for geometry produced
/// internally (erosion, hulls) where tiny edges are round-off artefacts.
std::optional<ConvexPolygon> cleaned_polygon(std::vector<Vec2> vertices);

double area(const ConvexPolygon& poly);
double perimeter(const ConvexPolygon& poly);
Vec2 centroid(const ConvexPolygon& poly);

struct Incircle {
  double radius = 0.0;
  Vec2 center;
};

/// Chebyshev center: maximizes r subject to dist(center, edge line) >= r.
Incircle inradius(const ConvexPolygon& poly);

bool contains(const ConvexPolygon& poly, Vec2 x, double tol = 0.0);

struct BoundaryDistance {
  double distance = 0.0;
  bool outside = false;
};

/// Distance to the boundary for points in the closed polygon; outside points
/// report 0 and set `outside`.
BoundaryDistance boundary_distance(const ConvexPolygon& poly, Vec2 x);

/// Inner parallel body {x : dist(x, boundary) > t}; nullopt when empty.
std::optional<ConvexPolygon> erode(const ConvexPolygon& poly, double t);

/// Area of the inner parallel body, 0 once it is empty.
double eroded_area(const ConvexPolygon& poly, double t);

/// Mean of the boundary-distance function, exact via the layer-cake formula.
double average_distance(const ConvexPolygon& poly);

/// Offset at which the inner parallel body collapses (equals the inradius).
double collapse_offset(const ConvexPolygon& poly);

ConvexPolygon scale(const ConvexPolygon& poly, double t);
ConvexPolygon translate(const ConvexPolygon& poly, Vec2 shift);

enum class SamplerMode { kHullOfUniform, kPerturbedNgon };

ConvexPolygon random_convex_polygon(std::uint64_t seed, int n, SamplerMode mode);

/// Convex hull (counter-clockwise, collinear points dropped).
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// ---------------------------------------------------------------------------
// Shape specifications

struct PolygonShape {
  std::vector<Vec2> vertices;
};
/// (0,L) x (0,2R).
struct RectangleShape {
  double length = 1.0;
  double half_width = 0.5;
};
struct RegularNgonShape {
  int n = 3;
  double circumradius = 1.0;
};
/// n vertices at uniform parameter angles on x^2/a^2 + y^2/b^2 = 1.
struct EllipsePolygonShape {
  double a = 1.0;
  double b = 1.0;
  int n = 64;
};
struct TriangleShape {
  Vec2 p0, p1, p2;
};

using ShapeSpec = std::variant<PolygonShape, RectangleShape, RegularNgonShape,
                               EllipsePolygonShape, TriangleShape>;

ConvexPolygon materialize(const ShapeSpec& spec);
std::string shape_kind(const ShapeSpec& spec);

ConvexPolygon unit_square();
/// Equilateral triangle with the given inradius, centered at the origin.
ConvexPolygon equilateral_triangle(double inradius);

}  // namespace ptorsion
