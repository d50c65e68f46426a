#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>

#include "ptorsion/solver.hpp"

using namespace ptorsion;

namespace {

constexpr double kPi = std::numbers::pi;

// Torsional rigidity of the unit square from the double sine series.
double square_series_oracle(int n_max) {
  double s = 0;
  for (int m = 1; m <= n_max; m += 2)
    for (int n = 1; n <= n_max; n += 2) {
      const double mm = double(m) * m, nn = double(n) * n;
      s += 1.0 / (mm * nn * (mm + nn));
    }
  return 64.0 / std::pow(kPi, 6) * s;
}

// Rigidity of the disk of radius R from the explicit radial torsion function
// u(r) = ((p-1)/p) (R^{p'} - r^{p'}) / 2^{1/(p-1)}, integrated in closed form.
double disk_rigidity_oracle(double p, double R) {
  const double q = p / (p - 1.0);
  const double c = (p - 1.0) / p * std::pow(0.5, 1.0 / (p - 1.0));
  return 2 * kPi * c * (std::pow(R, q + 2) / 2 - std::pow(R, q + 2) / (q + 2));
}

std::shared_ptr<const Mesh> mesh_of(const ConvexPolygon& poly, double h,
                                    MeshStrategy s = MeshStrategy::kAuto) {
  return std::make_shared<const Mesh>(triangulate(poly, h, s));
}

}  // namespace

TEST_CASE("series oracle for the square") {
  const double a = square_series_oracle(2001);
  CHECK(a == doctest::Approx(0.0351442537).epsilon(1e-8));
  CHECK(std::abs(square_series_oracle(101) - a) < 1e-6);
}

TEST_CASE("p = 2 rigidities against closed forms") {
  const auto disk = rigidity_with_refinement(materialize(RegularNgonShape{64, 1.0}), 2.0, 3);
  CHECK(std::abs(disk.T_p / (kPi / 8) - 1) <= 5e-3);
  const auto ell = rigidity_with_refinement(materialize(EllipsePolygonShape{2, 1, 256}), 2.0, 3);
  CHECK(std::abs(ell.T_p / (2 * kPi / 5) - 1) <= 1e-2);
  const auto sq = rigidity_with_refinement(unit_square(), 2.0, 3);
  CHECK(std::abs(sq.T_p / square_series_oracle(2001) - 1) <= 5e-3);
}

TEST_CASE("disk rigidity away from p = 2") {
  // Compared through the scale-invariant root (T(p) R^p)^{1/p}, whose
  // sensitivity to T_p is (p - 1)/p.
  const ConvexPolygon disk = materialize(RegularNgonShape{256, 1.0});
  for (double p : {1.05, 1.5, 3.0, 8.0}) {
    const auto r = rigidity_with_refinement(disk, p, 4);
    const double T_disk = disk_rigidity_oracle(p, 1.0);
    const double norm_disk = std::pow(kPi, p - 1) * std::pow(T_disk, 1 - p);
    CAPTURE(p);
    CHECK(std::abs(std::pow(r.T_norm / norm_disk, 1 / p) - 1) <= 3e-3);
  }
}

TEST_CASE("solution invariants") {
  for (double p : {1.5, 2.0, 5.0, 32.0}) {
    const ConvexPolygon poly = random_convex_polygon(4, 9, SamplerMode::kHullOfUniform);
    const auto m = mesh_of(poly, inradius(poly).radius / 3);
    const TorsionSolution s = solve_p_torsion(m, p);
    CAPTURE(p);
    CHECK(s.converged);
    CHECK(s.T_p > 0);
    double umax = 0;
    for (double x : s.u) umax = std::max(umax, x);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      if (m->boundary_mask[i]) CHECK(s.u[i] == 0.0);
      CHECK(s.u[i] >= -1e-10 * umax);
    }
    // The maximum sits at an interior node.
    std::size_t arg = 0;
    for (std::size_t i = 0; i < s.u.size(); ++i)
      if (s.u[i] > s.u[arg]) arg = i;
    CHECK_FALSE(m->boundary_mask[arg]);
    CHECK(integrate_p1(*m, s.u) == doctest::Approx(s.T_p).epsilon(1e-12));
    // Energy is non-increasing at fixed regularization.
    for (std::size_t k = 1; k < s.energy_history.size(); ++k)
      if (s.level_history[k] == s.level_history[k - 1])
        CHECK(s.energy_history[k] <= s.energy_history[k - 1] + 1e-12 * std::abs(s.energy_history[k - 1]));
    // At the minimizer the energy equals (1/p - 1) T_p.
    CHECK(s.energy == doctest::Approx((1.0 / p - 1.0) * s.T_p).epsilon(1e-6));
  }
}

TEST_CASE("lagged diffusivity agrees with Newton") {
  const auto m = mesh_of(unit_square(), 0.25);
  SolverOptions lagged;
  lagged.method = SolverMethod::kLaggedDiffusivity;
  for (double p : {1.5, 3.0}) {
    const TorsionSolution a = solve_p_torsion(m, p);
    const TorsionSolution b = solve_p_torsion(m, p, lagged);
    CHECK(b.converged);
    CHECK(b.T_p == doctest::Approx(a.T_p).epsilon(1e-6));
  }
}

TEST_CASE("invalid exponents and options") {
  const auto m = mesh_of(unit_square(), 0.5);
  CHECK_THROWS_AS(solve_p_torsion(m, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_p_torsion(m, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(solve_p_torsion(m, 33.0), std::invalid_argument);
  SolverOptions bad;
  bad.epsilon_schedule = {1e-3, 1e-2};
  CHECK_THROWS_AS(solve_p_torsion(m, 2.0, bad), std::invalid_argument);
  bad.epsilon_schedule = {1e-2};
  bad.tol_energy = 0.0;
  CHECK_THROWS_AS(solve_p_torsion(m, 2.0, bad), std::invalid_argument);
  CHECK_THROWS_AS(rigidity_with_refinement(unit_square(), 2.0, 1), std::invalid_argument);
}

TEST_CASE("non-convergence carries the last iterate") {
  const auto m = mesh_of(unit_square(), 0.25);
  SolverOptions tight;
  tight.max_iters = 2;
  try {
    solve_p_torsion(m, 5.0, tight);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK_FALSE(e.last_iterate().converged);
    CHECK(e.last_iterate().u.size() == m->node_count());
    CHECK(e.last_iterate().iterations == 2);
  }
}

TEST_CASE("refinement sequence behaves") {
  const auto disk = rigidity_with_refinement(materialize(RegularNgonShape{64, 1.0}), 2.0, 4);
  const auto& T = disk.level_T_p;
  for (std::size_t k = 2; k < T.size(); ++k)
    CHECK(std::abs(T[k] - T[k - 1]) < std::abs(T[k - 1] - T[k - 2]));

  const auto sq3 = rigidity_with_refinement(unit_square(), 3.0, 3);
  const auto sq4 = rigidity_with_refinement(unit_square(), 3.0, 4);
  CHECK(std::abs(sq3.T_p - sq4.level_T_p.back()) <= sq3.error_estimate);

  const ConvexPolygon tri = materialize(TriangleShape{{0, 0}, {1, 0}, {0.3, 0.8}});
  const auto t3 = rigidity_with_refinement(tri, 2.0, 3);
  const auto t4 = rigidity_with_refinement(tri, 2.0, 4);
  CHECK(std::abs(t3.T_p / t4.T_p - 1) < 5e-4);
}

TEST_CASE("scaling law at matched resolution") {
  for (std::uint64_t seed : {1u, 2u}) {
    const ConvexPolygon poly = random_convex_polygon(seed, 7, SamplerMode::kPerturbedNgon);
    const double h = default_base_h(poly);
    for (double p : {1.5, 2.0, 5.0}) {
      const auto base = rigidity_with_refinement(poly, p, 2, h);
      for (double t : {0.5, 2.0}) {
        const auto scaled = rigidity_with_refinement(scale(poly, t), p, 2, t * h);
        CHECK(std::abs(scaled.T_norm * std::pow(t, p) / base.T_norm - 1) <= 2e-3);
      }
    }
  }
}

TEST_CASE("Hersch-Protter lower bound holds after normalization") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const ConvexPolygon poly = random_convex_polygon(seed, 8, SamplerMode::kHullOfUniform);
    const double R = inradius(poly).radius;
    for (double p : {1.5, 2.0, 4.0}) {
      const auto r = rigidity_with_refinement(poly, p, 3);
      const double hp = std::pow((2 * p - 1) / (p - 1), p - 1) / std::pow(R, p);
      CHECK(r.T_norm >= hp * (1 - 5e-3));
    }
  }
}

TEST_CASE("symmetry on the unit square") {
  const auto m = mesh_of(unit_square(), 0.1);
  for (double p : {1.5, 2.0, 4.0}) {
    const TorsionSolution s = solve_p_torsion(m, p);
    std::map<std::pair<long long, long long>, double> at;
    auto key = [](Vec2 x) {
      return std::make_pair(std::llround(x.x * 1e9), std::llround(x.y * 1e9));
    };
    for (std::size_t i = 0; i < m->node_count(); ++i) at[key(m->nodes[i])] = s.u[i];
    int matched = 0;
    for (std::size_t i = 0; i < m->node_count(); ++i) {
      const Vec2 x = m->nodes[i];
      for (Vec2 img : {Vec2{1 - x.x, x.y}, Vec2{x.x, 1 - x.y}, Vec2{1 - x.x, 1 - x.y}, Vec2{x.y, x.x}}) {
        auto it = at.find(key(img));
        REQUIRE(it != at.end());
        CHECK(std::abs(it->second - s.u[i]) <= 1e-10);
        ++matched;
      }
    }
    CHECK(matched == 4 * static_cast<int>(m->node_count()));
  }
}
