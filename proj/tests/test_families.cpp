#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "ptorsion/families.hpp"

using namespace ptorsion;

TEST_CASE("rectangle sweep degenerates toward one") {
  FamilySweepConfig cfg;
  cfg.kappas = {2, 10, 100};
  cfg.p_grid = {1.5, 2, 5};
  const SweepResult r = sweep(cfg);
  REQUIRE(r.rows.size() == 9);
  CHECK(r.failed_rows == 0);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const PReport& row = r.rows[i].report.rows.front();
    const double k = r.rows[i].shape.kappa;
    CAPTURE(k);
    CHECK(row.Q_p >= 1.0 - row.slack);
    CHECK(row.Q_p < (1.0 + 2.0 / k) * (1 + row.slack));
    CHECK(r.rows[i].report.all_pass());
    if (i >= 3) CHECK(row.Q_p <= r.rows[i - 3].report.rows.front().Q_p);
  }
  CHECK(r.rows[7].report.rows.front().Q_p <= 1.05);
  CHECK(r.manifest["cells"].size() == 9);
  CHECK(r.manifest["family"] == "rectangles");
}

TEST_CASE("ellipse sweep reproduces the closed form") {
  FamilySweepConfig cfg;
  cfg.family = FamilyKind::kEllipses;
  cfg.kappas = {1, 2, 4};
  cfg.p_grid = {2};
  const SweepResult r = sweep(cfg);
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    const double k = row.shape.kappa;
    const double q = 2.0 / std::sqrt(3.0) * std::sqrt(1.0 + 1.0 / (k * k));
    CAPTURE(k);
    CHECK(std::abs(row.report.rows.front().Q_p / q - 1) <= 1e-2);
  }
  const std::string csv = sweep_csv(r);
  CHECK(csv.find("ref_Q_p") != std::string::npos);
  CHECK(csv.find(format9(2.0 / std::sqrt(3.0) * std::sqrt(1.25))) != std::string::npos);
}

TEST_CASE("triangle sweep stays in [1, 2)") {
  FamilySweepConfig cfg;
  cfg.family = FamilyKind::kTriangles;
  cfg.p_grid = {1.5, 2, 5};
  const SweepResult r = sweep(cfg);
  REQUIRE(r.rows.size() == 9);
  for (const auto& row : r.rows) {
    const PReport& p = row.report.rows.front();
    CHECK(p.Q_p >= 1.0 * (1 - p.slack));
    CHECK(p.Q_p < 2.0);
    CHECK(row.report.limits.Qinf == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("random sweep is deterministic across thread counts") {
  FamilySweepConfig cfg;
  cfg.family = FamilyKind::kRandom;
  cfg.sampler.count = 6;
  cfg.sampler.seed = 7;
  cfg.sampler.vertices = 0;
  cfg.p_grid = {2};
  cfg.threads = 1;
  const std::string a = sweep_csv(sweep(cfg));
  cfg.threads = 4;
  const SweepResult rb = sweep(cfg);
  CHECK(a == sweep_csv(rb));
  CHECK(rb.manifest["cells"][0].contains("seed"));
}

TEST_CASE("normalization hits its target") {
  for (int i = 0; i < 5; ++i) {
    SamplerConfig sc;
    sc.seed = 99;
    sc.vertices = 0;
    const ConvexPolygon poly = sample_polygon(sc, i);
    const ConvexPolygon by_r = normalize(poly, {Normalization::kByInradius, 0.4});
    CHECK(std::abs(inradius(by_r).radius - 0.4) <= 1e-9);
    const ConvexPolygon by_d = normalize(poly, {Normalization::kByAvgDistance, 0.25});
    CHECK(std::abs(average_distance(by_d) - 0.25) <= 1e-9);
    CHECK(normalize(poly, {}) == poly);
  }
}

TEST_CASE("sampler seeds are distinct and repeatable") {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) seen.insert(sample_seed(5, i));
  CHECK(seen.size() == 100);
  SamplerConfig sc;
  CHECK(sample_polygon(sc, 3) == sample_polygon(sc, 3));
}

TEST_CASE("gamma estimate bounds and labelling") {
  SamplerConfig sc;
  sc.seed = 3;
  sc.vertices = 0;
  const GammaEstimate g = estimate_gamma(2.0, sc, 10);
  CHECK(g.errors.empty());
  CHECK(g.members.size() == 14);
  CHECK(g.alpha_hat >= 1.0 - g.slack);
  CHECK(g.alpha_hat <= g.beta_hat);
  CHECK(g.beta_hat < 2.0);
  CHECK(g.gamma_hat > 0.45);
  CHECK(g.gamma_hat <= 1.0);
  CHECK(g.alpha_member == "rectangle_k1000");
  CHECK(g.alpha_hat <= 1.002 * (1 + g.slack));
  CHECK(g.beta_member == "disk_64gon");
  CHECK(g.beta_hat == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(5e-3));
  CHECK(g.label.find("upper bound") != std::string::npos);
  REQUIRE(g.family_checks.size() == 3);
  for (const auto& f : g.family_checks) CHECK(f.pass);
  const auto j = gamma_to_json(g);
  CHECK(j["bound_direction"] == "upper");
  CHECK(j["manifest"].size() == 14);
  CHECK_THROWS_AS(estimate_gamma(2.0, sc, 9), std::invalid_argument);
}

TEST_CASE("Qbar variant of the gamma estimate") {
  SamplerConfig sc;
  const GammaEstimate g = estimate_gamma(2.0, sc, 10, true);
  CHECK(g.use_qbar);
  CHECK(g.alpha_hat > 0.0);
  CHECK(g.gamma_hat <= 1.0);
  CHECK(g.family_checks.size() == 2);
}

TEST_CASE("corridor algebra of the pair comparison") {
  const PairTable t = compare_pairs(0.4, 1.0, 2.0, 4, 11);
  CHECK(t.hp_lower_a == doctest::Approx(18.75).epsilon(1e-12));
  CHECK(t.buser_inradius_upper_b == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(t.guaranteed);
  CHECK(t.all_pass());
  for (const auto& c : t.pairs) {
    REQUIRE(c.pass.has_value());
    CHECK(c.margin >= 0.0);
  }
}

TEST_CASE("pair comparison at and outside the branch boundary") {
  const PairTable edge = compare_pairs(0.5, 1.0, 2.0, 4, 13);
  CHECK(edge.guaranteed);
  CHECK(edge.hp_lower_a == doctest::Approx(edge.buser_inradius_upper_b).epsilon(1e-12));
  for (const auto& c : edge.pairs) CHECK(c.margin >= 0.0);

  const PairTable far = compare_pairs(0.9, 1.0, 2.0, 3, 13);
  CHECK_FALSE(far.guaranteed);
  for (const auto& c : far.pairs) CHECK_FALSE(c.pass.has_value());
  CHECK(pairs_to_json(far)["branch"] == "unresolved by corridor");

  const PairTable by_delta = compare_pairs(0.2, 0.5, 2.0, 2, 5, 3, {}, 0, Normalization::kByAvgDistance);
  CHECK(by_delta.pairs.size() == 2);

  CHECK_THROWS_AS(compare_pairs(1.0, 0.5, 2.0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(compare_pairs(0.4, 1.0, 40.0, 2, 1), std::invalid_argument);
}

TEST_CASE("p to infinity on the unit square") {
  const PToInfinityTrend t = p_to_infinity_trend(unit_square(), {8, 16, 32});
  CHECK(t.delta == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(t.Qinf == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t.qinf_in_range);
  CHECK(t.strictly_decreasing);
  CHECK(t.rows.back().deviation <= 0.2);
  CHECK_THROWS_AS(p_to_infinity_trend(unit_square(), {16, 8}), std::invalid_argument);
}

TEST_CASE("thin rectangles approach the strip ratio") {
  // delta = R/2 - R^2/(3L) for (0,L) x (0,2R)
  const double R = 0.5, L = 500;
  const ConvexPolygon rect = materialize(RectangleShape{L, R});
  const double delta = R / 2 - R * R / (3 * L);
  CHECK(average_distance(rect) == doctest::Approx(delta).epsilon(1e-12));
  CHECK(std::abs(inradius(rect).radius / average_distance(rect) - 2.0) < 2e-3);
}

TEST_CASE("invalid sweep configurations") {
  FamilySweepConfig cfg;
  cfg.kappas = {1.5};
  CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
  cfg.kappas = {2};
  cfg.p_grid = {1.0};
  CHECK_THROWS_AS(sweep(cfg), std::invalid_argument);
  cfg.family = FamilyKind::kEllipses;
  cfg.kappas = {0.5};
  cfg.p_grid = {2};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
