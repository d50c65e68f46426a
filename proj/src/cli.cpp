#include "ptorsion/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptorsion/cheeger.hpp"
#include "ptorsion/families.hpp"
#include "ptorsion/functionals.hpp"
#include "ptorsion/io.hpp"

namespace ptorsion::cli {

namespace {

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write output file " + path);
  f << text;
  if (!f) throw InputError("failed writing output file " + path);
}

void check_p_values(const std::vector<double>& ps) {
  if (ps.empty()) throw InputError("no exponent given");
  for (double p : ps)
    if (!(p > 1.0 && p <= 32.0)) throw InputError("exponent " + format9(p) + " outside (1, 32]");
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round9(x);
}

nlohmann::json vertices_json(const ConvexPolygon& poly) {
  nlohmann::json v = nlohmann::json::array();
  for (Vec2 p : poly.vertices()) v.push_back({num(p.x), num(p.y)});
  return v;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

// ---------------------------------------------------------------------------

struct ShapeArgs {
  std::string spec;
  std::vector<double> p = {2.0};
  int levels = 3;
  double base_h = 0.0;
  bool cheeger = false;
  std::string format = "json";
  std::string out;
  std::optional<double> slack;
  std::string dump_solution;
};

int cmd_shape(const ShapeArgs& a, std::ostream& out) {
  check_p_values(a.p);
  const ShapeSpec spec = load_shape_spec(a.spec);
  const ConvexPolygon poly = materialize(spec);
  ReportOptions ro;
  ro.p_values = a.p;
  ro.levels = a.levels;
  ro.base_h = a.base_h;
  ro.cheeger = a.cheeger;
  ro.slack_override = a.slack;
  const ShapeReport rep = build_report("shape", shape_kind(spec), poly, ro);
  if (a.format == "csv") {
    std::string text;
    const auto h = csv_header();
    for (std::size_t i = 0; i < h.size(); ++i) text += (i ? "," : "") + h[i];
    text += "\n";
    for (const auto& line : csv_rows(rep)) text += line + "\n";
    write_output(text, a.out, out);
  } else {
    nlohmann::json j = report_to_json(rep);
    j["spec"] = shape_spec_to_json(spec);
    write_output(json_text(j), a.out, out);
  }
  if (!a.dump_solution.empty() && !rep.any_solver_failure()) {
    const RefinedRigidity r = rigidity_with_refinement(poly, a.p.front(), a.levels, a.base_h);
    write_output(json_text(solution_to_json(r.finest)), a.dump_solution, out);
  }
  return rep.any_solver_failure() ? kExitSolver : kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string family = "rectangles";
  std::vector<double> kappa;
  std::vector<double> p = {2.0};
  int count = 10;
  std::uint64_t seed = 1;
  int vertices = 0;
  int levels = 3;
  int ellipse_vertices = 256;
  double base_h_factor = 0.5;
  std::string normalize = "none";
  double target = 1.0;
  bool no_cheeger = false;
  std::optional<double> slack;
  int threads = 0;
  std::string out;
  std::string manifest;
};

Normalization parse_normalization(const std::string& s) {
  if (s == "none") return Normalization::kNone;
  if (s == "inradius") return Normalization::kByInradius;
  if (s == "avg-distance") return Normalization::kByAvgDistance;
  throw InputError("unknown normalization " + s);
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  check_p_values(a.p);
  FamilySweepConfig cfg;
  if (a.family == "rectangles") cfg.family = FamilyKind::kRectangles;
  else if (a.family == "ellipses") cfg.family = FamilyKind::kEllipses;
  else if (a.family == "triangles") cfg.family = FamilyKind::kTriangles;
  else if (a.family == "random") cfg.family = FamilyKind::kRandom;
  else throw InputError("unknown family " + a.family);
  cfg.kappas = a.kappa;
  cfg.p_grid = a.p;
  cfg.sampler.count = a.count;
  cfg.sampler.seed = a.seed;
  cfg.sampler.vertices = a.vertices;
  cfg.levels = a.levels;
  cfg.ellipse_vertices = a.ellipse_vertices;
  cfg.base_h_factor = a.base_h_factor;
  cfg.normalization = {parse_normalization(a.normalize), a.target};
  cfg.cheeger = !a.no_cheeger;
  cfg.slack_override = a.slack;
  cfg.threads = a.threads;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const SweepResult res = sweep(cfg);
  write_output(sweep_csv(res), a.out, out);
  std::string manifest_path = a.manifest;
  if (manifest_path.empty() && !a.out.empty() && a.out != "-") manifest_path = a.out + ".manifest.json";
  if (!manifest_path.empty()) write_output(json_text(res.manifest), manifest_path, out);
  return !res.rows.empty() && res.failed_rows == res.rows.size() ? kExitSolver : kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> specs;
  std::vector<double> p = {1.5, 2.0, 3.0, 5.0};
  int levels = 3;
  std::optional<double> slack;
  bool coarse = false;
  double coarse_factor = 1.0;
  std::string format = "text";
  std::string out;
  bool pairs = false;
  double a = 0.4;
  double b = 1.0;
  int n_pairs = 50;
  std::uint64_t seed = 1;
  std::string normalize = "inradius";
  int threads = 0;
};

struct SuiteShape {
  std::string id;
  std::string kind;
  ConvexPolygon poly;
};

std::vector<SuiteShape> bundled_suite() {
  std::vector<SuiteShape> s;
  s.push_back({"unit_square", "polygon", unit_square()});
  s.push_back({"equilateral_triangle", "polygon", equilateral_triangle(1.0)});
  s.push_back({"thin_triangle", "triangle", materialize(TriangleShape{{0, 0}, {2, 0}, {0, 1}})});
  s.push_back({"disk_64gon", "regular_ngon", materialize(RegularNgonShape{64, 1.0})});
  s.push_back({"rectangle_k10", "rectangle", materialize(RectangleShape{5.0, 0.5})});
  s.push_back({"rectangle_k100", "rectangle", materialize(RectangleShape{50.0, 0.5})});
  s.push_back({"ellipse_2_1", "ellipse", materialize(EllipsePolygonShape{2.0, 1.0, 128})});
  SamplerConfig sc;
  sc.seed = 2024;
  sc.vertices = 0;
  for (int i = 0; i < 4; ++i) s.push_back({"random_" + std::to_string(i), "random", sample_polygon(sc, i)});
  return s;
}

void verdict_line(std::ostringstream& os, const std::string& shape, const std::string& p, const Verdict& v) {
  os << pad(shape, 22) << pad(p, 6) << pad(v.name, 22) << pad(format9(v.value), 17)
     << pad(format9(v.bound), 17) << pad(format9(v.margin), 17) << pad(format9(v.slack), 17)
     << (v.pass ? "PASS" : "FAIL") << "\n";
}

int cmd_verify_pairs(const VerifyArgs& a, std::ostream& out) {
  check_p_values(a.p);
  if (!(a.a > 0 && a.a < a.b)) throw InputError("need 0 < a < b");
  if (a.n_pairs < 1) throw InputError("need at least one pair");
  const Normalization by = parse_normalization(a.normalize);
  if (by == Normalization::kNone) throw InputError("pairs need a normalization");
  std::vector<PairTable> tables;
  for (double p : a.p) tables.push_back(compare_pairs(a.a, a.b, p, a.n_pairs, a.seed, a.levels, {}, a.threads, by));
  bool any_error = false, any_fail = false;
  for (const auto& t : tables)
    for (const auto& c : t.pairs) {
      if (!c.error.empty()) any_error = true;
      if (c.pass && !*c.pass) any_fail = true;
    }
  if (a.format == "json") {
    nlohmann::json j;
    j["schema_version"] = "1";
    j["tables"] = nlohmann::json::array();
    for (const auto& t : tables) j["tables"].push_back(pairs_to_json(t));
    write_output(json_text(j), a.out, out);
  } else {
    std::ostringstream os;
    for (const auto& t : tables) {
      os << "pairs a=" << format9(t.a) << " b=" << format9(t.b) << " p=" << format9(t.p) << " D=" << t.D
         << " branch=" << (t.guaranteed ? "guaranteed" : "unresolved by corridor")
         << " hp_lower_a=" << format9(t.hp_lower_a)
         << " buser_inradius_upper_b=" << format9(t.buser_inradius_upper_b) << "\n";
      os << pad("pair", 6) << pad("T_a", 17) << pad("T_b", 17) << pad("T_b-T_a", 17) << pad("margin", 17)
         << pad("slack", 17) << "status\n";
      for (std::size_t k = 0; k < t.pairs.size(); ++k) {
        const auto& c = t.pairs[k];
        os << pad(std::to_string(k), 6);
        if (!c.error.empty()) {
          os << "solver_failure: " << c.error << "\n";
          continue;
        }
        os << pad(format9(c.T_a), 17) << pad(format9(c.T_b), 17) << pad(format9(c.difference), 17)
           << pad(format9(c.margin), 17) << pad(format9(c.slack), 17)
           << (!c.pass ? "unresolved" : (*c.pass ? "PASS" : "FAIL")) << "\n";
      }
    }
    os << "summary: " << (any_error ? "solver failures" : any_fail ? "FAIL" : "PASS") << "\n";
    write_output(os.str(), a.out, out);
  }
  if (any_error) return kExitSolver;
  return any_fail ? kExitVerdict : kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.pairs) return cmd_verify_pairs(a, out);
  check_p_values(a.p);
  std::vector<SuiteShape> suite;
  if (a.specs.empty()) {
    suite = bundled_suite();
  } else {
    for (std::size_t i = 0; i < a.specs.size(); ++i) {
      const ShapeSpec spec = load_shape_spec(a.specs[i]);
      suite.push_back({"spec_" + std::to_string(i), shape_kind(spec), materialize(spec)});
    }
  }
  std::vector<ShapeReport> reports(suite.size());
  parallel_for(suite.size(), a.threads, [&](std::size_t i) {
    ReportOptions ro;
    ro.p_values = a.p;
    ro.levels = a.levels;
    ro.slack_override = a.slack;
    if (a.coarse) {
      ro.extrapolate = false;
      ro.base_h = a.coarse_factor * inradius(suite[i].poly).radius;
    }
    reports[i] = build_report(suite[i].id, suite[i].kind, suite[i].poly, ro);
  });

  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool solver_failure = false;
  for (const auto& rep : reports) {
    checks += rep.geometry_checks.size();
    for (const auto& r : rep.rows) checks += r.verdicts.size();
    for (const auto& f : rep.failures()) failures.push_back(rep.shape_id + " " + f);
    if (rep.any_solver_failure()) solver_failure = true;
  }
  if (a.format == "json") {
    nlohmann::json j;
    j["schema_version"] = "1";
    j["reports"] = nlohmann::json::array();
    for (const auto& rep : reports) j["reports"].push_back(report_to_json(rep));
    j["checks"] = checks;
    j["failures"] = failures;
    j["all_pass"] = failures.empty() && !solver_failure;
    write_output(json_text(j), a.out, out);
  } else {
    std::ostringstream os;
    os << pad("shape", 22) << pad("p", 6) << pad("check", 22) << pad("value", 17) << pad("bound", 17)
       << pad("margin", 17) << pad("slack", 17) << "status\n";
    for (const auto& rep : reports) {
      for (const auto& v : rep.geometry_checks) verdict_line(os, rep.shape_id, "-", v);
      for (const auto& r : rep.rows) {
        if (!r.solved) {
          os << pad(rep.shape_id, 22) << pad(format9(r.p), 6) << "solver_failure: " << r.error << "\n";
          continue;
        }
        for (const auto& v : r.verdicts) verdict_line(os, rep.shape_id, format9(r.p), v);
      }
    }
    os << "summary: " << checks << " checks, " << failures.size() << " failed"
       << (solver_failure ? ", solver failures present" : "") << "\n";
    for (const auto& f : failures) os << "failed: " << f << "\n";
    write_output(os.str(), a.out, out);
  }
  if (solver_failure) return kExitSolver;
  return failures.empty() ? kExitOk : kExitVerdict;
}

// ---------------------------------------------------------------------------

struct CheegerArgs {
  std::string spec;
  std::vector<double> p_trend;
  int levels = 5;
  std::string out;
};

nlohmann::json p_to_one_json(const PToOneTrend& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"p", num(r.p)},
                    {"T_norm", num(r.T_norm)},
                    {"deviation", num(r.deviation)},
                    {"relative_deviation", num(r.deviation / t.h)},
                    {"error_estimate", num(r.error_estimate)}});
  return {{"h", num(t.h)}, {"rows", rows}, {"strictly_decreasing", t.strictly_decreasing}};
}

int cmd_cheeger(const CheegerArgs& a, std::ostream& out) {
  const ConvexPolygon poly = materialize(load_shape_spec(a.spec));
  const CheegerResult c = cheeger_constant(poly);
  const double R = inradius(poly).radius;
  nlohmann::json j;
  j["schema_version"] = "1";
  j["h"] = num(c.h);
  j["r_star"] = num(c.r_star);
  j["inradius"] = num(R);
  j["Q1"] = num(R * c.h);
  j["residual"] = num(c.residual);
  j["iterations"] = c.iterations;
  j["cheeger_core"] = vertices_json(c.cheeger_core);
  if (!a.p_trend.empty()) {
    for (double p : a.p_trend)
      if (!(p >= kPToOneFloor && p <= 32.0))
        throw InputError("p -> 1 exponents must lie in [" + format9(kPToOneFloor) + ", 32]");
    j["p_to_one"] = p_to_one_json(p_to_one_trend(poly, a.p_trend, a.levels));
  }
  write_output(json_text(j), a.out, out);
  return kExitOk;
}

struct LimitsArgs {
  std::string spec;
  std::vector<double> p_inf = {8.0, 16.0, 32.0};
  std::vector<double> p_one;
  int levels = 4;
  std::string out;
};

int cmd_limits(const LimitsArgs& a, std::ostream& out) {
  check_p_values(a.p_inf);
  const ConvexPolygon poly = materialize(load_shape_spec(a.spec));
  const PToInfinityTrend t = p_to_infinity_trend(poly, a.p_inf, a.levels);
  const CheegerResult c = cheeger_constant(poly);
  nlohmann::json j;
  j["schema_version"] = "1";
  j["inradius"] = num(t.inradius);
  j["delta"] = num(t.delta);
  j["Qinf"] = num(t.Qinf);
  j["Qinf_range"] = {2, 3};
  j["Qinf_in_range"] = t.qinf_in_range;
  j["h"] = num(c.h);
  j["Q1"] = num(t.inradius * c.h);
  j["Q1_in_range"] = t.inradius * c.h >= 1.0 && t.inradius * c.h <= 2.0;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"p", num(r.p)},
                    {"T_norm", num(r.T_norm)},
                    {"T_norm_root_times_delta", num(r.scaled_root)},
                    {"deviation", num(r.deviation)}});
  j["p_to_infinity"] = {{"rows", rows}, {"strictly_decreasing", t.strictly_decreasing}};
  if (!a.p_one.empty()) {
    for (double p : a.p_one)
      if (!(p >= kPToOneFloor && p <= 32.0))
        throw InputError("p -> 1 exponents must lie in [" + format9(kPToOneFloor) + ", 32]");
    j["p_to_one"] = p_to_one_json(p_to_one_trend(poly, a.p_one, a.levels));
  }
  write_output(json_text(j), a.out, out);
  return kExitOk;
}

struct GammaArgs {
  std::vector<double> p = {2.0};
  int n = 50;
  std::uint64_t seed = 1;
  int vertices = 0;
  bool qbar = false;
  int levels = 3;
  int threads = 0;
  std::string out;
};

int cmd_gamma(const GammaArgs& a, std::ostream& out) {
  check_p_values(a.p);
  if (a.n < 10) throw InputError("estimate-gamma needs --n >= 10");
  if (a.vertices != 0 && a.vertices < 3) throw InputError("--vertices must be 0 or >= 3");
  SamplerConfig sc;
  sc.seed = a.seed;
  sc.vertices = a.vertices;
  const GammaOverGrid g = estimate_gamma_over_grid(a.p, sc, a.n, a.qbar, a.levels, {}, a.threads);
  nlohmann::json j;
  j["schema_version"] = "1";
  j["sampler"] = {{"seed", a.seed}, {"n", a.n}, {"vertices", a.vertices}, {"mixed", true}};
  j["levels"] = a.levels;
  j["per_p"] = nlohmann::json::array();
  bool errors = false;
  for (const auto& e : g.per_p) {
    j["per_p"].push_back(gamma_to_json(e));
    if (!e.errors.empty()) errors = true;
  }
  j["gamma_D_hat"] = num(g.gamma_hat_min);
  j["gamma_D_hat_p"] = num(g.p_at_min);
  j["label"] = "gamma_D_hat is the minimum of gamma_hat over the exponent grid; an upper bound of gamma_D";
  write_output(json_text(j), a.out, out);
  return errors ? kExitSolver : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-torsional rigidity laboratory for convex polygons", "ptorsion"};
  app.require_subcommand(1);
  app.set_config("--config", "", "optional defaults file (flags win)");

  ShapeArgs sa;
  auto* shape = app.add_subcommand("shape", "solve one domain and report all functionals and checks");
  shape->add_option("--spec", sa.spec, "shape JSON file or inline JSON")->required();
  shape->add_option("--p", sa.p, "exponents")->delimiter(',');
  shape->add_option("--levels", sa.levels, "refinement levels (>= 2)");
  shape->add_option("--base-h", sa.base_h, "base mesh size (default inradius / 2)");
  shape->add_flag("--cheeger", sa.cheeger, "compute the Cheeger constant");
  shape->add_option("--format", sa.format)->check(CLI::IsMember({"json", "csv"}));
  shape->add_option("--out", sa.out, "output path (default stdout)");
  shape->add_option("--slack", sa.slack, "override the relative slack");
  shape->add_option("--dump-solution", sa.dump_solution, "write mesh and finest solution as JSON");

  SweepArgs wa;
  auto* sw = app.add_subcommand("sweep", "sweep a model family");
  sw->add_option("--family", wa.family)->check(CLI::IsMember({"rectangles", "ellipses", "triangles", "random"}));
  sw->add_option("--kappa", wa.kappa)->delimiter(',');
  sw->add_option("--p", wa.p)->delimiter(',');
  sw->add_option("--count", wa.count);
  sw->add_option("--seed", wa.seed);
  sw->add_option("--vertices", wa.vertices, "sampler vertex count, 0 varies it per sample");
  sw->add_option("--levels", wa.levels);
  sw->add_option("--ellipse-vertices", wa.ellipse_vertices);
  sw->add_option("--base-h-factor", wa.base_h_factor, "base mesh size over inradius");
  sw->add_option("--normalize", wa.normalize)->check(CLI::IsMember({"none", "inradius", "avg-distance"}));
  sw->add_option("--target", wa.target);
  sw->add_flag("--no-cheeger", wa.no_cheeger);
  sw->add_option("--slack", wa.slack);
  sw->add_option("--threads", wa.threads);
  sw->add_option("--out", wa.out, "CSV path (default stdout)");
  sw->add_option("--manifest", wa.manifest, "JSON manifest path");

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "run the corridor suite or the pair comparison");
  ve->add_option("--spec", va.specs, "domains to verify instead of the bundled suite");
  ve->add_option("--p", va.p)->delimiter(',');
  ve->add_option("--levels", va.levels);
  ve->add_option("--slack", va.slack);
  ve->add_flag("--coarse", va.coarse, "single coarse mesh, no extrapolation");
  ve->add_option("--coarse-factor", va.coarse_factor, "coarse mesh size over inradius");
  ve->add_option("--format", va.format)->check(CLI::IsMember({"text", "json"}));
  ve->add_option("--out", va.out);
  ve->add_flag("--pairs", va.pairs, "compare sampled pairs with inradii a and b");
  ve->add_option("--a", va.a);
  ve->add_option("--b", va.b);
  ve->add_option("--n-pairs", va.n_pairs);
  ve->add_option("--seed", va.seed);
  ve->add_option("--normalize", va.normalize)->check(CLI::IsMember({"inradius", "avg-distance"}));
  ve->add_option("--threads", va.threads);

  CheegerArgs ca;
  auto* ch = app.add_subcommand("cheeger", "Cheeger constant and optional p -> 1 trend");
  ch->add_option("--spec", ca.spec)->required();
  ch->add_option("--p-trend", ca.p_trend, "decreasing exponents")->delimiter(',');
  ch->add_option("--levels", ca.levels);
  ch->add_option("--out", ca.out);

  LimitsArgs la;
  auto* li = app.add_subcommand("limits", "limit functionals and trend studies");
  li->add_option("--spec", la.spec)->required();
  li->add_option("--p-inf", la.p_inf, "increasing exponents")->delimiter(',');
  li->add_option("--p-one", la.p_one, "decreasing exponents")->delimiter(',');
  li->add_option("--levels", la.levels);
  li->add_option("--out", la.out);

  GammaArgs ga;
  auto* eg = app.add_subcommand("estimate-gamma", "sample-based upper bound of the comparison constant");
  eg->add_option("--p", ga.p)->delimiter(',');
  eg->add_option("--n", ga.n);
  eg->add_option("--seed", ga.seed);
  eg->add_option("--vertices", ga.vertices);
  eg->add_flag("--qbar", ga.qbar, "use the average-distance functional");
  eg->add_option("--levels", ga.levels);
  eg->add_option("--threads", ga.threads);
  eg->add_option("--out", ga.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*shape) return cmd_shape(sa, out);
    if (*sw) return cmd_sweep(wa, out);
    if (*ve) return cmd_verify(va, out);
    if (*ch) return cmd_cheeger(ca, out);
    if (*li) return cmd_limits(la, out);
    if (*eg) return cmd_gamma(ga, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SamplingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitInput;
}

}  // namespace ptorsion::cli
