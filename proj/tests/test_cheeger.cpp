#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ptorsion/cheeger.hpp"

using namespace ptorsion;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("analytic Cheeger constants") {
  // (1 - 2r)^2 = pi r^2 has the root r = 1/(2 + sqrt(pi)).
  const CheegerResult sq = cheeger_constant(unit_square());
  CHECK(std::abs(sq.h - (2 + std::sqrt(kPi))) <= 1e-9);
  CHECK(sq.residual <= 1e-10);
  CHECK(sq.h == doctest::Approx(1 / sq.r_star));
  // 3 sqrt(3) (1 - r)^2 = pi r^2 for the triangle of inradius 1.
  const CheegerResult tri = cheeger_constant(equilateral_triangle(1.0));
  CHECK(std::abs(tri.h - (1 + std::sqrt(kPi / (3 * std::sqrt(3.0))))) <= 1e-9);
  CHECK(tri.residual <= 1e-10 * area(equilateral_triangle(1.0)));
  // Regular polygons approach the disk value 2.
  CHECK(cheeger_constant(materialize(RegularNgonShape{1024, 1.0})).h == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("Cheeger properties on random polygons") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ConvexPolygon p = random_convex_polygon(seed, 4 + int(seed % 9),
                                                  seed % 2 ? SamplerMode::kHullOfUniform : SamplerMode::kPerturbedNgon);
    const CheegerResult c = cheeger_constant(p);
    const double R = inradius(p).radius;
    CHECK(c.r_star > 0);
    CHECK(c.r_star < R);
    CHECK(c.residual <= 1e-10 * area(p));
    CHECK(c.h <= perimeter(p) / area(p) * (1 + 1e-12));
    CHECK(c.h * R >= 1.0);
    CHECK(c.h * R <= R * perimeter(p) / area(p) * (1 + 1e-12));
    CHECK(R * perimeter(p) / area(p) <= 2.0 * (1 + 1e-12));
    CHECK(cheeger_constant(scale(p, 2.5)).h == doctest::Approx(c.h / 2.5).epsilon(1e-10));
  }
}

TEST_CASE("p -> 1 trend input validation") {
  CHECK_THROWS_AS(p_to_one_trend(unit_square(), {1.2, 1.01}), std::invalid_argument);
  CHECK_THROWS_AS(p_to_one_trend(unit_square(), {1.1, 1.2}), std::invalid_argument);
}

TEST_CASE("p -> 1 trend on the square moves toward h") {
  const PToOneTrend t = p_to_one_trend(unit_square(), {1.5, 1.2, 1.1}, 4);
  CHECK(t.strictly_decreasing);
  CHECK(t.Q1 == doctest::Approx(0.5 * (2 + std::sqrt(kPi))));
  for (const auto& row : t.rows) CHECK(row.T_norm > t.h);
}
