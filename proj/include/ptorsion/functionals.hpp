#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptorsion/closed_form.hpp"
#include "ptorsion/geometry.hpp"
#include "ptorsion/solver.hpp"

namespace ptorsion {

/// |Omega|^{p-1} T_p^{1-p}.
double normalized_rigidity(double T_p, double area, double p);
/// T_p^{1-p}.
double lambda_p1(double T_p, double p);
/// [T(p) R^p / c_p]^{1/p} with c_p the Hersch-Protter prefactor.
double q_functional(double T_norm, double R, double p);
/// Same with the average distance in place of the inradius.
double qbar_functional(double T_norm, double delta, double p);

/// T_p of the disk with the same area minus T_p_value.
double saint_venant_gap(const ConvexPolygon& poly, double p, double T_p_value);

struct GeometryBlock {
  double area = 0.0;
  double perimeter = 0.0;
  double inradius = 0.0;
  Vec2 incenter;
  double delta = 0.0;
  double diameter = 0.0;
};

GeometryBlock geometry_block(const ConvexPolygon& poly);

/// One inequality check. margin is signed and relative: (bound - value)/|bound|
/// for upper bounds, (value - bound)/|bound| for lower bounds; the check fails
/// only when margin < -slack.
struct Verdict {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double slack = 0.0;
  bool pass = true;
};

Verdict lower_bound_verdict(std::string name, double value, double bound, double slack);
Verdict upper_bound_verdict(std::string name, double value, double bound, double slack);

/// Verdict names in the fixed order used by reports and CSV columns.
const std::vector<std::string>& per_p_verdict_names();
const std::vector<std::string>& geometry_verdict_names();

struct PReport {
  double p = 0.0;
  bool solved = false;
  std::string error;
  double T_p = 0.0;
  double T_p_error = 0.0;  ///< refinement error estimate of T_p
  double T_norm = 0.0;
  double lambda_p1 = 0.0;
  double Q_p = 0.0;
  double Qbar_p = 0.0;
  double slack = 0.0;  ///< relative slack on T_p, 3 * error / T_p (or the override)
  double saint_venant_gap = 0.0;
  int levels = 0;
  std::size_t nodes = 0;
  double observed_order = 0.0;
  std::vector<Verdict> verdicts;
};

/// Per-exponent verdicts from a solved row and the geometry block. The T_p
/// slack is propagated to each quantity through its sensitivity to T_p.
std::vector<Verdict> corridor_verdicts(const GeometryBlock& g, const PReport& row, int D = 2);

/// Pure geometry checks: the perimeter/area bounds, the average-distance
/// bounds, the R/delta range and, when h is given, the Q_1 range.
std::vector<Verdict> geometry_verdicts(const GeometryBlock& g, std::optional<double> h, int D = 2);

struct LimitsBlock {
  std::optional<double> h;
  std::optional<double> r_star;
  std::optional<double> Q1;
  double Qinf = 0.0;  ///< R / delta
};

struct ShapeReport {
  std::string shape_id;
  std::string kind;
  GeometryBlock geometry;
  LimitsBlock limits;
  std::vector<Verdict> geometry_checks;
  std::vector<PReport> rows;

  bool all_pass() const;
  bool any_solver_failure() const;
  /// Names of failing checks, prefixed with the exponent for per-p checks.
  std::vector<std::string> failures() const;
};

struct ReportOptions {
  std::vector<double> p_values = {2.0};
  int levels = 3;
  double base_h = 0.0;  ///< 0 selects default_base_h
  bool cheeger = true;
  std::optional<double> slack_override;
  SolverOptions solver;
  MeshStrategy strategy = MeshStrategy::kAuto;
  bool extrapolate = true;  ///< false: one mesh at base_h, no error estimate
};

/// Fills a per-exponent row from a refinement result.
PReport make_row(const GeometryBlock& g, const ConvexPolygon& poly, double p,
                 const RefinedRigidity& r, std::optional<double> slack_override);

/// Solves for every requested exponent and assembles the full report. Solver
/// failures are recorded in their row.
ShapeReport build_report(const std::string& shape_id, const std::string& kind,
                         const ConvexPolygon& poly, const ReportOptions& opts);

// Serialization. Floating values are rounded to 9 significant digits.

double round9(double x);
std::string format9(double x);

nlohmann::json report_to_json(const ShapeReport& report);

std::vector<std::string> csv_header(const std::vector<std::string>& extra_columns = {});
/// One line per exponent row, without trailing newline characters.
std::vector<std::string> csv_rows(const ShapeReport& report,
                                  const std::vector<std::string>& extra_values = {});

}  // namespace ptorsion
