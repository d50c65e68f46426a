#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ptorsion/geometry.hpp"

using namespace ptorsion;

namespace {

constexpr double kPi = std::numbers::pi;

// Distance to the nearest edge line, computed without the library.
double min_edge_line_distance(const std::vector<Vec2>& v, Vec2 x) {
  double best = 1e300;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    best = std::min(best, ((b.x - a.x) * (x.y - a.y) - (b.y - a.y) * (x.x - a.x)) / len);
  }
  return best;
}

// Sutherland-Hodgman clipping of the polygon by each inward-shifted edge line.
std::vector<Vec2> clip_offset(const std::vector<Vec2>& v, double t) {
  std::vector<Vec2> out = v;
  for (std::size_t i = 0; i < v.size() && !out.empty(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    auto side = [&](Vec2 x) {
      return ((b.x - a.x) * (x.y - a.y) - (b.y - a.y) * (x.x - a.x)) / len - t;
    };
    std::vector<Vec2> next;
    for (std::size_t k = 0; k < out.size(); ++k) {
      const Vec2 p = out[k], q = out[(k + 1) % out.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0) next.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double s = sp / (sp - sq);
        next.push_back({p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)});
      }
    }
    out = next;
  }
  return out;
}

double shoelace(const std::vector<Vec2>& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i].x * v[(i + 1) % v.size()].y - v[(i + 1) % v.size()].x * v[i].y;
  return 0.5 * s;
}

}  // namespace

TEST_CASE("measures of simple shapes") {
  const ConvexPolygon sq = unit_square();
  CHECK(area(sq) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(perimeter(sq) == doctest::Approx(4.0).epsilon(1e-15));

  const ConvexPolygon rect = materialize(RectangleShape{10.0, 0.5});
  CHECK(area(rect) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(perimeter(rect) == doctest::Approx(22.0).epsilon(1e-14));
  CHECK(inradius(rect).radius == doctest::Approx(0.5).epsilon(1e-12));

  const ConvexPolygon tri = ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
  CHECK(area(tri) == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-14));
  CHECK(perimeter(tri) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("construction rejects invalid vertex lists") {
  CHECK_THROWS_AS(ConvexPolygon::from_vertices({{0, 0}, {1, 0}}), InvalidPolygon);
  CHECK_THROWS_AS(ConvexPolygon::from_vertices({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), InvalidPolygon);
  CHECK_THROWS_AS(ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), InvalidPolygon);
  CHECK_THROWS_AS(ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {1, 0}, {1, 1}}), InvalidPolygon);
  // A dented quadrilateral names the offending triple.
  try {
    ConvexPolygon::from_vertices({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}});
    FAIL("expected InvalidPolygon");
  } catch (const InvalidPolygon& e) {
    CHECK(std::string(e.what()).find("(1, 2, 3)") != std::string::npos);
  }
}

TEST_CASE("inradius of the unit square") {
  const Incircle inc = inradius(unit_square());
  CHECK(inc.radius == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(inc.center.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(inc.center.y == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("inradius agrees with a grid brute-force maximum") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ConvexPolygon poly = random_convex_polygon(seed, 5, SamplerMode::kPerturbedNgon);
    const auto& v = poly.vertices();
    double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
    for (const Vec2& p : v) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    // Grid search, zooming in around the best point a few times.
    Vec2 best{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    double rbest = -1;
    double span = std::max(xmax - xmin, ymax - ymin);
    const int n = 200;
    for (int level = 0; level < 6; ++level) {
      const Vec2 c = best;
      for (int i = -n / 2; i <= n / 2; ++i)
        for (int j = -n / 2; j <= n / 2; ++j) {
          const Vec2 x{c.x + span * i / n, c.y + span * j / n};
          const double r = min_edge_line_distance(v, x);
          if (r > rbest) rbest = r, best = x;
        }
      span *= 0.1;
    }
    CHECK(inradius(poly).radius == doctest::Approx(rbest).epsilon(1e-6));
    CHECK(inradius(poly).radius >= rbest - 1e-12);
  }
}

TEST_CASE("boundary distance") {
  const ConvexPolygon sq = unit_square();
  CHECK(boundary_distance(sq, {0.5, 0.5}).distance == doctest::Approx(0.5));
  CHECK(boundary_distance(sq, {0.1, 0.3}).distance == doctest::Approx(0.1));
  CHECK(boundary_distance(sq, {1.0, 1.0}).distance == doctest::Approx(0.0));
  const BoundaryDistance out = boundary_distance(sq, {2.0, 0.5});
  CHECK(out.outside);
  CHECK(out.distance == 0.0);
}

TEST_CASE("erosion of the square and triangle") {
  const auto e = erode(unit_square(), 0.1);
  REQUIRE(e.has_value());
  CHECK(area(*e) == doctest::Approx(0.64).epsilon(1e-13));
  CHECK_FALSE(erode(unit_square(), 0.5).has_value());
  const ConvexPolygon tri = equilateral_triangle(1.0);
  const auto et = erode(tri, 0.25);
  REQUIRE(et.has_value());
  CHECK(area(*et) / area(tri) == doctest::Approx(0.5625).epsilon(1e-13));
}

TEST_CASE("erosion matches half-plane clipping") {
  for (std::uint64_t seed = 10; seed < 30; ++seed) {
    const ConvexPolygon poly = random_convex_polygon(seed, 12, SamplerMode::kHullOfUniform);
    const double r = inradius(poly).radius;
    double prev = area(poly);
    for (double frac : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
      const double t = frac * r;
      const double oracle = shoelace(clip_offset(poly.vertices(), t));
      const double a = eroded_area(poly, t);
      CHECK(a == doctest::Approx(oracle).epsilon(1e-10));
      CHECK(a < prev);
      prev = a;
    }
    CHECK(eroded_area(poly, 1.0001 * r) == 0.0);
  }
}

TEST_CASE("average distance of the unit square against quadrature") {
  // Midpoint rule on a 2000x2000 grid of min(x, y, 1-x, 1-y).
  const int n = 2000;
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = (i + 0.5) / n, y = (j + 0.5) / n;
      s += std::min({x, y, 1 - x, 1 - y});
    }
  const double quad = s / (double(n) * n);
  CHECK(quad == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
  CHECK(std::abs(average_distance(unit_square()) - 1.0 / 6.0) <= 1e-12);
}

TEST_CASE("average distance of triangles is a third of the inradius") {
  const std::vector<std::array<Vec2, 3>> tris = {
      {Vec2{0, 0}, Vec2{1, 0}, Vec2{0.5, std::sqrt(3.0) / 2}},
      {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}},
      {Vec2{0, 0}, Vec2{2, 0}, Vec2{0, 1}},
      {Vec2{-3, 1}, Vec2{5, 0.2}, Vec2{4, 0.7}},
  };
  for (const auto& t : tris) {
    const ConvexPolygon p = materialize(TriangleShape{t[0], t[1], t[2]});
    const double r = inradius(p).radius;
    CHECK(std::abs(average_distance(p) - r / 3.0) <= 1e-12 * r);
    CHECK(std::abs(r * perimeter(p) / area(p) - 2.0) <= 1e-12);
  }
}

TEST_CASE("average distance agrees with Monte-Carlo sampling") {
  for (std::uint64_t seed : {3u, 4u}) {
    const ConvexPolygon poly = random_convex_polygon(seed, 9, SamplerMode::kHullOfUniform);
    double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
    for (const Vec2& p : poly.vertices()) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    std::mt19937_64 rng(seed * 977);
    std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
    double s = 0, s2 = 0;
    int hits = 0;
    while (hits < 1'000'000) {
      const Vec2 x{ux(rng), uy(rng)};
      const double d = min_edge_line_distance(poly.vertices(), x);
      if (d < 0) continue;
      s += d;
      s2 += d * d;
      ++hits;
    }
    const double mean = s / hits;
    const double se = std::sqrt((s2 / hits - mean * mean) / hits);
    CHECK(std::abs(average_distance(poly) - mean) <= 3 * se);
  }
}

TEST_CASE("geometric corridors on random polygons") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto mode = seed % 2 ? SamplerMode::kHullOfUniform : SamplerMode::kPerturbedNgon;
    const ConvexPolygon p = random_convex_polygon(seed, 3 + int(seed % 10), mode);
    const double r = inradius(p).radius, A = area(p), P = perimeter(p), d = average_distance(p);
    CHECK(r / 2 <= A / P * (1 + 1e-12));
    CHECK(A / P < r);
    CHECK(2 * d <= r * (1 + 1e-12));
    CHECK(r <= 3 * d * (1 + 1e-12));
    CHECK(collapse_offset(p) == doctest::Approx(r).epsilon(1e-10));
  }
}

TEST_CASE("scaling laws") {
  const ConvexPolygon p = random_convex_polygon(5, 7, SamplerMode::kPerturbedNgon);
  for (double t : {0.5, 2.0, 3.7}) {
    const ConvexPolygon q = scale(p, t);
    CHECK(area(q) == doctest::Approx(t * t * area(p)).epsilon(1e-10));
    CHECK(inradius(q).radius == doctest::Approx(t * inradius(p).radius).epsilon(1e-10));
    CHECK(average_distance(q) == doctest::Approx(t * average_distance(p)).epsilon(1e-10));
  }
  CHECK(scale(p, 1.0) == p);
  CHECK_THROWS_AS(scale(p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale(p, -1.0), std::invalid_argument);
}

TEST_CASE("thin rectangles stay accurate") {
  const ConvexPolygon rect = materialize(RectangleShape{1e4, 0.5});
  CHECK(inradius(rect).radius == doctest::Approx(0.5).epsilon(1e-10));
  // Layer cake by hand: the integral of (L - 2t)(2R - 2t) over [0, R].
  const double L = 1e4, R = 0.5;
  const double integral = L * 2 * R * R - (L + 2 * R) * R * R + 4.0 / 3.0 * R * R * R;
  CHECK(average_distance(rect) == doctest::Approx(integral / (2 * R * L)).epsilon(1e-10));
}

TEST_CASE("sampler determinism and validity") {
  const ConvexPolygon a = random_convex_polygon(1, 8, SamplerMode::kHullOfUniform);
  const ConvexPolygon b = random_convex_polygon(1, 8, SamplerMode::kHullOfUniform);
  const ConvexPolygon c = random_convex_polygon(2, 8, SamplerMode::kHullOfUniform);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.size() >= 3);
  CHECK(a.size() <= 8);
  const ConvexPolygon g = random_convex_polygon(1, 12, SamplerMode::kPerturbedNgon);
  CHECK(g.size() == 12);
  CHECK_THROWS(random_convex_polygon(1, 2, SamplerMode::kHullOfUniform));
}

TEST_CASE("regular polygons and ellipse polygons") {
  const ConvexPolygon disk = materialize(RegularNgonShape{64, 1.0});
  CHECK(area(disk) == doctest::Approx(32 * std::sin(2 * kPi / 64)).epsilon(1e-13));
  CHECK(inradius(disk).radius == doctest::Approx(std::cos(kPi / 64)).epsilon(1e-12));
  const ConvexPolygon ell = materialize(EllipsePolygonShape{2, 1, 256});
  CHECK(area(ell) == doctest::Approx(0.5 * 256 * 2 * std::sin(2 * kPi / 256)).epsilon(1e-13));
}
