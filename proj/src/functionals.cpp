#include "ptorsion/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ptorsion/cheeger.hpp"

namespace ptorsion {

namespace {

constexpr double kRoundoffSlack = 1e-12;

double log_pow(double base, double exponent) { return std::exp(exponent * std::log(base)); }

}  // namespace

double normalized_rigidity(double T_p, double area, double p) {
  return std::exp((p - 1.0) * std::log(area) + (1.0 - p) * std::log(T_p));
}

double lambda_p1(double T_p, double p) { return log_pow(T_p, 1.0 - p); }

double q_functional(double T_norm, double R, double p) {
  return std::exp((std::log(T_norm) + p * std::log(R) - std::log(hp_prefactor(p))) / p);
}

double qbar_functional(double T_norm, double delta, double p) {
  return q_functional(T_norm, delta, p);
}

double saint_venant_gap(const ConvexPolygon& poly, double p, double T_p_value) {
  const double radius = std::sqrt(area(poly) / unit_ball_volume(2));
  return ball_rigidity(p, 2, radius) - T_p_value;
}

GeometryBlock geometry_block(const ConvexPolygon& poly) {
  GeometryBlock g;
  g.area = area(poly);
  g.perimeter = perimeter(poly);
  const Incircle inc = inradius(poly);
  g.inradius = inc.radius;
  g.incenter = inc.center;
  g.delta = average_distance(poly);
  g.diameter = poly.diameter();
  return g;
}

Verdict lower_bound_verdict(std::string name, double value, double bound, double slack) {
  Verdict v{std::move(name), value, bound, (value - bound) / std::abs(bound), slack, true};
  v.pass = v.margin >= -slack;
  return v;
}

Verdict upper_bound_verdict(std::string name, double value, double bound, double slack) {
  Verdict v{std::move(name), value, bound, (bound - value) / std::abs(bound), slack, true};
  v.pass = v.margin >= -slack;
  return v;
}

const std::vector<std::string>& per_p_verdict_names() {
  static const std::vector<std::string> names = {
      "hersch_protter", "buser",       "buser_inradius", "q_lower",    "q_upper",
      "delta_lower",    "delta_upper", "qbar_lower",     "qbar_upper", "saint_venant"};
  return names;
}

const std::vector<std::string>& geometry_verdict_names() {
  static const std::vector<std::string> names = {"area_perimeter_lower", "area_perimeter_upper",
                                                 "delta_inradius_lower", "delta_inradius_upper",
                                                 "qinf_range",           "q1_lower",
                                                 "q1_upper"};
  return names;
}

std::vector<Verdict> corridor_verdicts(const GeometryBlock& g, const PReport& row, int D) {
  const double p = row.p;
  const CorridorEndpoints e =
      corridor_endpoints(p, D, g.inradius, g.perimeter, g.area, g.delta);
  const double s_norm = (p - 1.0) * row.slack + kRoundoffSlack;
  const double s_q = (p - 1.0) / p * row.slack + kRoundoffSlack;
  const double s_t = row.slack + kRoundoffSlack;
  const double T = row.T_norm;
  const double T_ball = row.T_p + row.saint_venant_gap;
  return {
      lower_bound_verdict("hersch_protter", T, e.hp_lower, s_norm),
      upper_bound_verdict("buser", T, e.buser_upper, s_norm),
      upper_bound_verdict("buser_inradius", T, e.buser_inradius_upper, s_norm),
      lower_bound_verdict("q_lower", row.Q_p, 1.0, s_q),
      upper_bound_verdict("q_upper", row.Q_p, e.geo_corridor_upper, s_q),
      lower_bound_verdict("delta_lower", T, e.delta_lower, s_norm),
      upper_bound_verdict("delta_upper", T, e.delta_upper, s_norm),
      lower_bound_verdict("qbar_lower", row.Qbar_p, 1.0 / (D + 1), s_q),
      upper_bound_verdict("qbar_upper", row.Qbar_p, D / 2.0, s_q),
      upper_bound_verdict("saint_venant", row.T_p, T_ball, s_t),
  };
}

std::vector<Verdict> geometry_verdicts(const GeometryBlock& g, std::optional<double> h, int D) {
  const double ratio = g.area / g.perimeter;
  std::vector<Verdict> out = {
      lower_bound_verdict("area_perimeter_lower", ratio, g.inradius / D, kRoundoffSlack),
      upper_bound_verdict("area_perimeter_upper", ratio, g.inradius, kRoundoffSlack),
      lower_bound_verdict("delta_inradius_lower", g.inradius, 2.0 * g.delta, kRoundoffSlack),
      upper_bound_verdict("delta_inradius_upper", g.inradius, (D + 1) * g.delta, kRoundoffSlack),
  };
  // R/delta in [2, D + 1]; the margin is the smaller of the two sides.
  const double qinf = g.inradius / g.delta;
  Verdict lo = lower_bound_verdict("qinf_range", qinf, 2.0, kRoundoffSlack);
  Verdict hi = upper_bound_verdict("qinf_range", qinf, D + 1.0, kRoundoffSlack);
  out.push_back(lo.margin <= hi.margin ? lo : hi);
  if (h) {
    const double q1 = g.inradius * *h;
    out.push_back(lower_bound_verdict("q1_lower", q1, 1.0, kRoundoffSlack));
    out.push_back(upper_bound_verdict("q1_upper", q1, g.inradius * g.perimeter / g.area, kRoundoffSlack));
  }
  return out;
}

bool ShapeReport::all_pass() const { return failures().empty() && !any_solver_failure(); }

bool ShapeReport::any_solver_failure() const {
  for (const auto& r : rows)
    if (!r.solved) return true;
  return false;
}

std::vector<std::string> ShapeReport::failures() const {
  std::vector<std::string> out;
  for (const auto& v : geometry_checks)
    if (!v.pass) out.push_back(v.name);
  for (const auto& r : rows)
    for (const auto& v : r.verdicts)
      if (!v.pass) out.push_back("p=" + format9(r.p) + ":" + v.name);
  return out;
}

PReport make_row(const GeometryBlock& g, const ConvexPolygon& poly, double p,
                 const RefinedRigidity& r, std::optional<double> slack_override) {
  PReport row;
  row.p = p;
  row.solved = true;
  row.T_p = r.T_p;
  row.T_p_error = r.error_estimate;
  row.T_norm = normalized_rigidity(r.T_p, g.area, p);
  row.lambda_p1 = lambda_p1(r.T_p, p);
  row.Q_p = q_functional(row.T_norm, g.inradius, p);
  row.Qbar_p = qbar_functional(row.T_norm, g.delta, p);
  row.slack = slack_override ? *slack_override : r.relative_slack();
  row.saint_venant_gap = saint_venant_gap(poly, p, r.T_p);
  row.levels = static_cast<int>(r.level_T_p.size());
  row.nodes = r.level_nodes.empty() ? 0 : r.level_nodes.back();
  row.observed_order = r.order;
  row.verdicts = corridor_verdicts(g, row);
  return row;
}

ShapeReport build_report(const std::string& shape_id, const std::string& kind,
                         const ConvexPolygon& poly, const ReportOptions& opts) {
  ShapeReport rep;
  rep.shape_id = shape_id;
  rep.kind = kind;
  rep.geometry = geometry_block(poly);
  rep.limits.Qinf = rep.geometry.inradius / rep.geometry.delta;
  if (opts.cheeger) {
    const CheegerResult c = cheeger_constant(poly);
    rep.limits.h = c.h;
    rep.limits.r_star = c.r_star;
    rep.limits.Q1 = rep.geometry.inradius * c.h;
  }
  rep.geometry_checks = geometry_verdicts(rep.geometry, rep.limits.h);
  for (double p : opts.p_values) {
    try {
      const RefinedRigidity r =
          opts.extrapolate
              ? rigidity_with_refinement(poly, p, opts.levels, opts.base_h, opts.solver, opts.strategy)
              : single_level_rigidity(poly, p, opts.base_h, opts.solver, opts.strategy);
      rep.rows.push_back(make_row(rep.geometry, poly, p, r, opts.slack_override));
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      PReport row;
      row.p = p;
      row.solved = false;
      row.error = e.what();
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::string format9(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double round9(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format9(x).c_str(), nullptr);
}

namespace {

nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round9(x);
}

nlohmann::json verdict_json(const Verdict& v) {
  return {{"name", v.name}, {"value", num(v.value)}, {"bound", num(v.bound)},
          {"margin", num(v.margin)}, {"slack", num(v.slack)}, {"pass", v.pass}};
}

template <class T>
nlohmann::json opt(const std::optional<T>& x) {
  if (!x) return nullptr;
  return num(*x);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json report_to_json(const ShapeReport& rep) {
  nlohmann::json j;
  j["schema_version"] = "1";
  j["shape_id"] = rep.shape_id;
  j["kind"] = rep.kind;
  const GeometryBlock& g = rep.geometry;
  j["geometry"] = {{"area", num(g.area)},
                   {"perimeter", num(g.perimeter)},
                   {"inradius", num(g.inradius)},
                   {"incenter", {num(g.incenter.x), num(g.incenter.y)}},
                   {"delta", num(g.delta)},
                   {"diameter", num(g.diameter)},
                   {"geo_corridor_upper", num(g.inradius * g.perimeter / g.area)}};
  j["limits"] = {{"h", opt(rep.limits.h)},
                 {"r_star", opt(rep.limits.r_star)},
                 {"Q1", opt(rep.limits.Q1)},
                 {"Qinf", num(rep.limits.Qinf)}};
  nlohmann::json gv = nlohmann::json::array();
  for (const auto& v : rep.geometry_checks) gv.push_back(verdict_json(v));
  j["geometry_verdicts"] = gv;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json row = {{"p", num(r.p)}, {"solved", r.solved}};
    if (!r.solved) {
      row["error"] = r.error;
    } else {
      row["T_p"] = num(r.T_p);
      row["T_p_error"] = num(r.T_p_error);
      row["T_norm"] = num(r.T_norm);
      row["lambda_p1"] = num(r.lambda_p1);
      row["Q_p"] = num(r.Q_p);
      row["Qbar_p"] = num(r.Qbar_p);
      row["slack"] = num(r.slack);
      row["saint_venant_gap"] = num(r.saint_venant_gap);
      row["levels"] = r.levels;
      row["nodes"] = r.nodes;
      row["observed_order"] = num(r.observed_order);
      nlohmann::json vs = nlohmann::json::array();
      for (const auto& v : r.verdicts) vs.push_back(verdict_json(v));
      row["verdicts"] = vs;
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["all_pass"] = rep.all_pass();
  return j;
}

std::vector<std::string> csv_header(const std::vector<std::string>& extra) {
  std::vector<std::string> h = {"shape_id", "p",      "area",   "perimeter", "inradius",
                                "delta",    "T_p",    "T_norm", "lambda_p1", "Q_p",
                                "Qbar_p",   "h",      "Q1",     "Qinf"};
  for (const auto& n : per_p_verdict_names()) h.push_back(n + "_pass");
  for (const auto& n : geometry_verdict_names()) h.push_back(n + "_pass");
  for (const auto& n : per_p_verdict_names()) h.push_back(n + "_margin");
  for (const auto& n : geometry_verdict_names()) h.push_back(n + "_margin");
  h.insert(h.end(), {"T_p_error", "slack", "saint_venant_gap", "status"});
  h.insert(h.end(), extra.begin(), extra.end());
  return h;
}

std::vector<std::string> csv_rows(const ShapeReport& rep, const std::vector<std::string>& extra) {
  auto find = [](const std::vector<Verdict>& vs, const std::string& name) -> const Verdict* {
    for (const auto& v : vs)
      if (v.name == name) return &v;
    return nullptr;
  };
  auto opt_str = [](const std::optional<double>& x) { return x ? format9(*x) : std::string(); };
  std::vector<std::string> lines;
  const GeometryBlock& g = rep.geometry;
  for (const auto& r : rep.rows) {
    std::vector<std::string> f = {csv_field(rep.shape_id), format9(r.p), format9(g.area),
                                  format9(g.perimeter), format9(g.inradius), format9(g.delta)};
    if (r.solved) {
      for (double x : {r.T_p, r.T_norm, r.lambda_p1, r.Q_p, r.Qbar_p}) f.push_back(format9(x));
    } else {
      f.insert(f.end(), 5, "");
    }
    f.push_back(opt_str(rep.limits.h));
    f.push_back(opt_str(rep.limits.Q1));
    f.push_back(format9(rep.limits.Qinf));
    std::vector<std::string> margins;
    for (const auto& n : per_p_verdict_names()) {
      const Verdict* v = find(r.verdicts, n);
      f.push_back(v ? (v->pass ? "1" : "0") : "");
      margins.push_back(v ? format9(v->margin) : "");
    }
    for (const auto& n : geometry_verdict_names()) {
      const Verdict* v = find(rep.geometry_checks, n);
      f.push_back(v ? (v->pass ? "1" : "0") : "");
      margins.push_back(v ? format9(v->margin) : "");
    }
    f.insert(f.end(), margins.begin(), margins.end());
    if (r.solved) {
      f.push_back(format9(r.T_p_error));
      f.push_back(format9(r.slack));
      f.push_back(format9(r.saint_venant_gap));
      f.push_back("ok");
    } else {
      f.insert(f.end(), 3, "");
      f.push_back(csv_field("solver_failure: " + r.error));
    }
    for (const auto& e : extra) f.push_back(csv_field(e));
    std::string line;
    for (std::size_t i = 0; i < f.size(); ++i) line += (i ? "," : "") + f[i];
    lines.push_back(line);
  }
  return lines;
}

}  // namespace ptorsion
