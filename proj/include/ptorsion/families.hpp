#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptorsion/closed_form.hpp"
#include "ptorsion/functionals.hpp"
#include "ptorsion/geometry.hpp"

namespace ptorsion {

enum class Normalization { kNone, kByInradius, kByAvgDistance };

struct NormalizationPolicy {
  Normalization kind = Normalization::kNone;
  double target = 1.0;
};

/// Rescales so that the inradius (or the average distance) equals the target.
ConvexPolygon normalize(const ConvexPolygon& poly, const NormalizationPolicy& policy);

enum class FamilyKind { kRectangles, kEllipses, kTriangles, kRandom };

struct NamedTriangle {
  std::string name;
  TriangleShape shape;
};

/// Equilateral, right isosceles and the thin right triangle with legs 1 and 2.
std::vector<NamedTriangle> default_triangles();

struct SamplerConfig {
  int count = 10;
  std::uint64_t seed = 1;
  int vertices = 8;
  /// true alternates hull-of-uniform and perturbed-ngon samples
  bool mixed = true;
  SamplerMode mode = SamplerMode::kHullOfUniform;
};

/// Seed of the i-th sample, derived from the base seed.
std::uint64_t sample_seed(std::uint64_t base, int index);
ConvexPolygon sample_polygon(const SamplerConfig& cfg, int index);

struct FamilySweepConfig {
  FamilyKind family = FamilyKind::kRectangles;
  std::vector<double> kappas;
  std::vector<NamedTriangle> triangles = default_triangles();
  SamplerConfig sampler;
  int ellipse_vertices = 256;
  std::vector<double> p_grid = {2.0};
  int levels = 3;
  double base_h_factor = 0.5;  ///< base mesh size as a fraction of the inradius
  NormalizationPolicy normalization;
  bool cheeger = true;
  std::optional<double> slack_override;
  SolverOptions solver;
  int threads = 0;  ///< 0 picks the hardware concurrency

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct SweepShape {
  std::string shape_id;
  std::string family;
  double kappa = 0.0;  ///< 0 when not applicable
  std::optional<std::uint64_t> seed;
  ShapeSpec spec;
  /// Closed-form references, when known: T_p, Q_p at p = 2 for ellipses.
  std::optional<double> ref_T2;
  std::optional<double> ref_Q2;
  std::optional<double> ref_geo_upper;
  std::optional<GammaBound> family_bound;
};

struct SweepRow {
  SweepShape shape;
  ShapeReport report;  ///< exactly one exponent row
};

struct SweepResult {
  std::vector<SweepRow> rows;
  nlohmann::json manifest;
  std::size_t failed_rows = 0;
};

std::vector<SweepShape> family_shapes(const FamilySweepConfig& cfg);

/// One row per (shape, p), ordered by shape then p. Solver failures stay in
/// their row.
SweepResult sweep(const FamilySweepConfig& cfg);

std::string sweep_csv(const SweepResult& result);

/// Runs tasks on up to `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task);

struct GammaMember {
  std::string shape_id;
  std::string family;  ///< "random" for sampled members
  std::optional<std::uint64_t> seed;
  double value = 0.0;  ///< Q_p (or Qbar_p)
  double slack = 0.0;  ///< relative slack on value
  std::size_t nodes = 0;
  int levels = 0;
};

struct FamilyCheck {
  std::string family;
  GammaBound bound;
  double kappa = 0.0;
  std::vector<std::string> members;
  double gamma_family = 1.0;  ///< min/max of the measured values over members
  double slack = 0.0;
  bool pass = true;           ///< gamma_family >= bound - slack
  bool global_at_least_bound = false;  ///< gamma_hat >= bound, reported only
};

struct GammaEstimate {
  double p = 2.0;
  int D = 2;
  bool use_qbar = false;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double gamma_hat = 0.0;
  std::string alpha_member;
  std::string beta_member;
  double slack = 0.0;
  std::vector<GammaMember> members;
  std::vector<FamilyCheck> family_checks;
  std::vector<std::string> errors;
  std::string label;
};

/// Sample minimum and maximum of Q_p over n sampled polygons plus four
/// injected members (rectangle with kappa = 1000, square, equilateral
/// triangle, regular 64-gon). gamma_hat is an upper bound of the true constant.
GammaEstimate estimate_gamma(double p, const SamplerConfig& sampler, int n, bool use_qbar = false,
                             int levels = 3, const SolverOptions& opts = {}, int threads = 0);

/// Minimum of gamma_hat over an exponent grid.
struct GammaOverGrid {
  std::vector<GammaEstimate> per_p;
  double gamma_hat_min = 1.0;
  double p_at_min = 0.0;
};
GammaOverGrid estimate_gamma_over_grid(const std::vector<double>& p_grid, const SamplerConfig& sampler,
                                       int n, bool use_qbar = false, int levels = 3,
                                       const SolverOptions& opts = {}, int threads = 0);

nlohmann::json gamma_to_json(const GammaEstimate& g);

struct PairComparison {
  std::uint64_t seed_a = 0;
  std::uint64_t seed_b = 0;
  double T_a = 0.0;  ///< T(p; Omega_a)
  double T_b = 0.0;
  double difference = 0.0;  ///< T_b - T_a
  double margin = 0.0;      ///< (T_a - T_b) / T_a
  double slack = 0.0;
  bool guaranteed = false;  ///< inside the sufficient branch a <= b / D
  std::optional<bool> pass; ///< empty when unresolved by the corridor
  std::string error;
};

struct PairTable {
  double a = 0.0;
  double b = 0.0;
  double p = 2.0;
  int D = 2;
  bool guaranteed = false;
  double hp_lower_a = 0.0;             ///< Hersch-Protter bound at inradius a
  double buser_inradius_upper_b = 0.0; ///< inradius Buser bound at inradius b
  std::vector<PairComparison> pairs;
  bool all_pass() const;
};

/// Normalizes sampled pairs to inradius a and b and compares T(p;.).
PairTable compare_pairs(double a, double b, double p, int n_pairs, std::uint64_t seed,
                        int levels = 3, const SolverOptions& opts = {}, int threads = 0,
                        Normalization by = Normalization::kByInradius);

nlohmann::json pairs_to_json(const PairTable& t);

struct PToInfinityRow {
  double p = 0.0;
  double T_norm = 0.0;
  double scaled_root = 0.0;  ///< T_norm^{1/p} * delta
  double deviation = 0.0;    ///< |scaled_root - 1|
};

struct PToInfinityTrend {
  double delta = 0.0;
  double inradius = 0.0;
  double Qinf = 0.0;  ///< R / delta
  bool qinf_in_range = false;  ///< R / delta in [2, D + 1]
  std::vector<PToInfinityRow> rows;
  bool strictly_decreasing = false;
};

/// Increasing exponents up to the solver maximum.
PToInfinityTrend p_to_infinity_trend(const ConvexPolygon& poly, const std::vector<double>& p_list,
                                     int levels = 4, const SolverOptions& opts = {});

}  // namespace ptorsion
