#include "ptorsion/families.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ptorsion {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_p(double p) {
  require(std::isfinite(p) && p > 1.0 && p <= 32.0, "exponent must lie in (1, 32]");
}

nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round9(x);
}

std::string normalization_name(Normalization n) {
  switch (n) {
    case Normalization::kNone: return "none";
    case Normalization::kByInradius: return "by_inradius";
    case Normalization::kByAvgDistance: return "by_avg_distance";
  }
  return "none";
}

std::string family_name(FamilyKind f) {
  switch (f) {
    case FamilyKind::kRectangles: return "rectangles";
    case FamilyKind::kEllipses: return "ellipses";
    case FamilyKind::kTriangles: return "triangles";
    case FamilyKind::kRandom: return "random";
  }
  return "random";
}

std::string kappa_tag(double k) { return format9(k); }

}  // namespace

ConvexPolygon normalize(const ConvexPolygon& poly, const NormalizationPolicy& policy) {
  switch (policy.kind) {
    case Normalization::kNone:
      return poly;
    case Normalization::kByInradius:
      require(policy.target > 0 && std::isfinite(policy.target), "normalization target must be positive");
      return scale(poly, policy.target / inradius(poly).radius);
    case Normalization::kByAvgDistance:
      require(policy.target > 0 && std::isfinite(policy.target), "normalization target must be positive");
      return scale(poly, policy.target / average_distance(poly));
  }
  return poly;
}

std::vector<NamedTriangle> default_triangles() {
  const double s3 = std::sqrt(3.0);
  return {{"equilateral", TriangleShape{{0, 0}, {1, 0}, {0.5, s3 / 2}}},
          {"right_isosceles", TriangleShape{{0, 0}, {1, 0}, {0, 1}}},
          {"thin_1_2_sqrt5", TriangleShape{{0, 0}, {2, 0}, {0, 1}}}};
}

std::uint64_t sample_seed(std::uint64_t base, int index) {
  // splitmix64 finalizer over (base, index)
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ConvexPolygon sample_polygon(const SamplerConfig& cfg, int index) {
  const std::uint64_t s = sample_seed(cfg.seed, index);
  const int n = cfg.vertices > 0 ? cfg.vertices : 3 + static_cast<int>(s % 10);
  SamplerMode mode = cfg.mode;
  if (cfg.mixed) mode = index % 2 == 0 ? SamplerMode::kHullOfUniform : SamplerMode::kPerturbedNgon;
  return random_convex_polygon(s, n, mode);
}

void FamilySweepConfig::validate() const {
  require(!p_grid.empty(), "p grid is empty");
  for (double p : p_grid) check_p(p);
  require(levels >= 2 && levels <= 8, "levels must lie in [2, 8]");
  require(base_h_factor > 0 && std::isfinite(base_h_factor), "base mesh factor must be positive");
  require(ellipse_vertices >= 8, "ellipse polygons need at least 8 vertices");
  switch (family) {
    case FamilyKind::kRectangles:
      require(!kappas.empty(), "rectangle sweep needs kappa values");
      for (double k : kappas) require(std::isfinite(k) && k >= 2.0, "rectangle kappa must be >= 2");
      break;
    case FamilyKind::kEllipses:
      require(!kappas.empty(), "ellipse sweep needs kappa values");
      for (double k : kappas) require(std::isfinite(k) && k >= 1.0, "ellipse kappa must be >= 1");
      break;
    case FamilyKind::kTriangles:
      require(!triangles.empty(), "triangle sweep needs shapes");
      break;
    case FamilyKind::kRandom:
      require(sampler.count >= 1, "random sweep needs count >= 1");
      require(sampler.vertices == 0 || sampler.vertices >= 3, "sampler vertex count must be >= 3");
      break;
  }
  if (normalization.kind != Normalization::kNone)
    require(normalization.target > 0 && std::isfinite(normalization.target),
            "normalization target must be positive");
  solver.validate();
}

std::vector<SweepShape> family_shapes(const FamilySweepConfig& cfg) {
  std::vector<SweepShape> out;
  const std::string fam = family_name(cfg.family);
  switch (cfg.family) {
    case FamilyKind::kRectangles:
      for (double k : cfg.kappas) {
        SweepShape s;
        s.shape_id = "rectangle_k" + kappa_tag(k);
        s.family = fam;
        s.kappa = k;
        s.spec = RectangleShape{0.5 * k, 0.5};
        s.ref_geo_upper = 1.0 + 2.0 / k;
        s.family_bound = family_gamma_bounds(GammaFamily::kRectangle, k);
        out.push_back(s);
      }
      break;
    case FamilyKind::kEllipses:
      for (double k : cfg.kappas) {
        SweepShape s;
        s.shape_id = "ellipse_k" + kappa_tag(k);
        s.family = fam;
        s.kappa = k;
        s.spec = EllipsePolygonShape{k, 1.0, cfg.ellipse_vertices};
        const EllipseRigidity e = ellipse_rigidity_p2(k, 1.0);
        s.ref_T2 = e.T2;
        s.ref_Q2 = e.Q2;
        s.ref_geo_upper = geo_corridor_upper(AnalyticEllipse{k, 1.0});
        s.family_bound = family_gamma_bounds(GammaFamily::kEllipseP2, k);
        out.push_back(s);
      }
      break;
    case FamilyKind::kTriangles:
      for (const auto& t : cfg.triangles) {
        SweepShape s;
        s.shape_id = "triangle_" + t.name;
        s.family = fam;
        s.spec = t.shape;
        s.ref_geo_upper = 2.0;
        s.family_bound = family_gamma_bounds(GammaFamily::kTriangle);
        out.push_back(s);
      }
      break;
    case FamilyKind::kRandom:
      for (int i = 0; i < cfg.sampler.count; ++i) {
        SweepShape s;
        s.shape_id = "random_" + std::to_string(i);
        s.family = fam;
        s.seed = sample_seed(cfg.sampler.seed, i);
        out.push_back(s);
      }
      break;
  }
  return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
  if (n == 0) return;
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

namespace {

struct CellOutcome {
  ShapeReport report;
  double base_h = 0.0;
};

ShapeReport failed_report(const std::string& id, const std::string& kind, double p,
                          const std::string& error) {
  ShapeReport rep;
  rep.shape_id = id;
  rep.kind = kind;
  PReport row;
  row.p = p;
  row.error = error;
  rep.rows.push_back(row);
  return rep;
}

}  // namespace

SweepResult sweep(const FamilySweepConfig& cfg) {
  cfg.validate();
  const std::vector<SweepShape> shapes = family_shapes(cfg);
  const std::size_t np = cfg.p_grid.size();
  const std::size_t cells = shapes.size() * np;
  std::vector<CellOutcome> out(cells);

  parallel_for(cells, cfg.threads, [&](std::size_t c) {
    const SweepShape& s = shapes[c / np];
    const double p = cfg.p_grid[c % np];
    std::string kind = s.seed ? "random" : shape_kind(s.spec);
    try {
      const ConvexPolygon base =
          s.seed ? sample_polygon(cfg.sampler, static_cast<int>(c / np)) : materialize(s.spec);
      const ConvexPolygon poly = normalize(base, cfg.normalization);
      ReportOptions ro;
      ro.p_values = {p};
      ro.levels = cfg.levels;
      ro.base_h = cfg.base_h_factor * inradius(poly).radius;
      ro.cheeger = cfg.cheeger;
      ro.slack_override = cfg.slack_override;
      ro.solver = cfg.solver;
      out[c].base_h = ro.base_h;
      out[c].report = build_report(s.shape_id, kind, poly, ro);
    } catch (const std::exception& e) {
      out[c].report = failed_report(s.shape_id, kind, p, e.what());
    }
  });

  SweepResult res;
  nlohmann::json cells_json = nlohmann::json::array();
  for (std::size_t c = 0; c < cells; ++c) {
    const SweepShape& s = shapes[c / np];
    SweepRow row{s, std::move(out[c].report)};
    const PReport& pr = row.report.rows.front();
    if (!pr.solved) ++res.failed_rows;
    nlohmann::json cj = {{"shape_id", s.shape_id}, {"p", num(pr.p)},     {"levels", pr.levels},
                         {"nodes", pr.nodes},      {"base_h", num(out[c].base_h)},
                         {"solved", pr.solved}};
    if (s.seed) cj["seed"] = *s.seed;
    if (s.kappa > 0) cj["kappa"] = num(s.kappa);
    cells_json.push_back(cj);
    res.rows.push_back(std::move(row));
  }

  nlohmann::json m;
  m["schema_version"] = "1";
  m["family"] = family_name(cfg.family);
  nlohmann::json pj = nlohmann::json::array();
  for (double p : cfg.p_grid) pj.push_back(num(p));
  m["p_grid"] = pj;
  if (!cfg.kappas.empty() &&
      (cfg.family == FamilyKind::kRectangles || cfg.family == FamilyKind::kEllipses)) {
    nlohmann::json kj = nlohmann::json::array();
    for (double k : cfg.kappas) kj.push_back(num(k));
    m["kappas"] = kj;
  }
  if (cfg.family == FamilyKind::kEllipses) m["ellipse_vertices"] = cfg.ellipse_vertices;
  if (cfg.family == FamilyKind::kTriangles) {
    nlohmann::json tj = nlohmann::json::array();
    for (const auto& t : cfg.triangles)
      tj.push_back({{"name", t.name},
                    {"vertices",
                     {{num(t.shape.p0.x), num(t.shape.p0.y)},
                      {num(t.shape.p1.x), num(t.shape.p1.y)},
                      {num(t.shape.p2.x), num(t.shape.p2.y)}}}});
    m["triangles"] = tj;
  }
  if (cfg.family == FamilyKind::kRandom)
    m["sampler"] = {{"count", cfg.sampler.count},
                    {"seed", cfg.sampler.seed},
                    {"vertices", cfg.sampler.vertices},
                    {"mixed", cfg.sampler.mixed},
                    {"mode", cfg.sampler.mode == SamplerMode::kHullOfUniform ? "hull_of_uniform"
                                                                             : "perturbed_ngon"}};
  m["levels"] = cfg.levels;
  m["base_h_factor"] = num(cfg.base_h_factor);
  m["normalization"] = {{"kind", normalization_name(cfg.normalization.kind)},
                        {"target", num(cfg.normalization.target)}};
  m["solver"] = {{"tol_energy", num(cfg.solver.tol_energy)},
                 {"max_iters", cfg.solver.max_iters},
                 {"method", cfg.solver.method == SolverMethod::kNewton ? "newton" : "lagged_diffusivity"}};
  m["cheeger"] = cfg.cheeger;
  if (cfg.slack_override) m["slack_override"] = num(*cfg.slack_override);
  m["cells"] = cells_json;
  m["failed_rows"] = res.failed_rows;
  res.manifest = std::move(m);
  return res;
}

std::string sweep_csv(const SweepResult& result) {
  const std::vector<std::string> extra = {"family",        "kappa",  "seed",
                                          "ref_T_p",       "ref_Q_p", "ref_geo_upper",
                                          "family_gamma_bound"};
  std::ostringstream os;
  const auto header = csv_header(extra);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : result.rows) {
    const SweepShape& s = row.shape;
    const double p = row.report.rows.front().p;
    const bool p2 = p == 2.0;
    std::vector<std::string> ev = {
        s.family,
        s.kappa > 0 ? format9(s.kappa) : "",
        s.seed ? std::to_string(*s.seed) : "",
        p2 && s.ref_T2 ? format9(*s.ref_T2) : "",
        p2 && s.ref_Q2 ? format9(*s.ref_Q2) : "",
        s.ref_geo_upper ? format9(*s.ref_geo_upper) : "",
        // the ellipse value is a p = 2 statement
        s.family_bound && (s.family != "ellipses" || p2) ? format9(s.family_bound->value) : ""};
    for (const auto& line : csv_rows(row.report, ev)) os << line << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

struct GammaCandidate {
  std::string id;
  std::string family;
  std::optional<std::uint64_t> seed;
  std::function<ConvexPolygon()> make;
};

double member_value(const GeometryBlock& g, double p, const RefinedRigidity& r, bool qbar) {
  const double tn = normalized_rigidity(r.T_p, g.area, p);
  return qbar ? qbar_functional(tn, g.delta, p) : q_functional(tn, g.inradius, p);
}

}  // namespace

GammaEstimate estimate_gamma(double p, const SamplerConfig& sampler, int n, bool use_qbar, int levels,
                             const SolverOptions& opts, int threads) {
  check_p(p);
  require(n >= 10, "estimate_gamma needs n >= 10");
  require(levels >= 2, "levels must be >= 2");
  opts.validate();

  std::vector<GammaCandidate> cands;
  cands.push_back({"rectangle_k1000", "rectangle", std::nullopt,
                   [] { return materialize(RectangleShape{500.0, 0.5}); }});
  cands.push_back({"square", "rectangle", std::nullopt, [] { return unit_square(); }});
  cands.push_back({"equilateral_triangle", "triangle", std::nullopt,
                   [] { return equilateral_triangle(1.0); }});
  cands.push_back({"disk_64gon", "ellipse", std::nullopt,
                   [] { return materialize(RegularNgonShape{64, 1.0}); }});
  for (int i = 0; i < n; ++i)
    cands.push_back({"random_" + std::to_string(i), "random", sample_seed(sampler.seed, i),
                     [&sampler, i] { return sample_polygon(sampler, i); }});

  std::vector<std::optional<GammaMember>> slots(cands.size());
  std::vector<std::string> errs(cands.size());
  parallel_for(cands.size(), threads, [&](std::size_t k) {
    const GammaCandidate& c = cands[k];
    try {
      const ConvexPolygon poly = c.make();
      const GeometryBlock g = geometry_block(poly);
      const RefinedRigidity r = rigidity_with_refinement(poly, p, levels, 0.0, opts);
      GammaMember m;
      m.shape_id = c.id;
      m.family = c.family;
      m.seed = c.seed;
      m.value = member_value(g, p, r, use_qbar);
      m.slack = (p - 1.0) / p * r.relative_slack() + 1e-12;
      m.nodes = r.level_nodes.empty() ? 0 : r.level_nodes.back();
      m.levels = levels;
      slots[k] = m;
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      errs[k] = c.id + ": " + e.what();
    }
  });

  GammaEstimate est;
  est.p = p;
  est.use_qbar = use_qbar;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (slots[k]) est.members.push_back(*slots[k]);
    if (!errs[k].empty()) est.errors.push_back(errs[k]);
  }
  const std::string f = use_qbar ? "Qbar_p" : "Q_p";
  est.label = "gamma_hat = min " + f + " / max " + f + " over the sample is an upper bound of gamma_{2," +
              format9(p) + "}, not the constant itself";
  if (est.members.empty()) return est;

  const GammaMember* lo = &est.members.front();
  const GammaMember* hi = lo;
  for (const auto& m : est.members) {
    if (m.value < lo->value) lo = &m;
    if (m.value > hi->value) hi = &m;
  }
  est.alpha_hat = lo->value;
  est.beta_hat = hi->value;
  est.alpha_member = lo->shape_id;
  est.beta_member = hi->shape_id;
  est.gamma_hat = est.alpha_hat / est.beta_hat;
  est.slack = lo->slack + hi->slack;

  // Each injected member is checked inside its own family: the measured ratio
  // over the injected members of that family against the family bound.
  struct FamilyDef {
    std::string name;
    GammaFamily fam;
    double kappa;
    std::vector<std::string> ids;
  };
  std::vector<FamilyDef> defs = {
      {"rectangle", GammaFamily::kRectangle, 2.0, {"rectangle_k1000", "square"}},
      {"triangle", GammaFamily::kTriangle, 0.0, {"equilateral_triangle"}}};
  if (p == 2.0 && !use_qbar) defs.push_back({"ellipse", GammaFamily::kEllipseP2, 1.0, {"disk_64gon"}});
  for (const auto& d : defs) {
    FamilyCheck fc;
    fc.family = d.name;
    fc.kappa = d.kappa;
    fc.bound = family_gamma_bounds(d.fam, d.kappa > 0 ? d.kappa : 2.0);
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0, smin = 0.0, smax = 0.0;
    for (const auto& m : est.members)
      if (std::find(d.ids.begin(), d.ids.end(), m.shape_id) != d.ids.end()) {
        fc.members.push_back(m.shape_id);
        if (m.value < vmin) vmin = m.value, smin = m.slack;
        if (m.value > vmax) vmax = m.value, smax = m.slack;
      }
    if (fc.members.empty()) continue;
    fc.gamma_family = vmin / vmax;
    fc.slack = fc.members.size() > 1 ? smin + smax : 0.0;
    fc.pass = fc.gamma_family >= fc.bound.value * (1.0 - fc.slack) - 1e-12;
    fc.global_at_least_bound = est.gamma_hat >= fc.bound.value;
    est.family_checks.push_back(fc);
  }
  return est;
}

GammaOverGrid estimate_gamma_over_grid(const std::vector<double>& p_grid, const SamplerConfig& sampler,
                                       int n, bool use_qbar, int levels, const SolverOptions& opts,
                                       int threads) {
  require(!p_grid.empty(), "p grid is empty");
  GammaOverGrid out;
  for (double p : p_grid) {
    out.per_p.push_back(estimate_gamma(p, sampler, n, use_qbar, levels, opts, threads));
    const GammaEstimate& g = out.per_p.back();
    if (g.members.empty()) continue;
    if (out.p_at_min == 0.0 || g.gamma_hat < out.gamma_hat_min) {
      out.gamma_hat_min = g.gamma_hat;
      out.p_at_min = p;
    }
  }
  return out;
}

nlohmann::json gamma_to_json(const GammaEstimate& g) {
  nlohmann::json j;
  j["schema_version"] = "1";
  j["p"] = num(g.p);
  j["D"] = g.D;
  j["functional"] = g.use_qbar ? "Qbar_p" : "Q_p";
  j["alpha_hat"] = num(g.alpha_hat);
  j["beta_hat"] = num(g.beta_hat);
  j["gamma_hat"] = num(g.gamma_hat);
  j["alpha_member"] = g.alpha_member;
  j["beta_member"] = g.beta_member;
  j["slack"] = num(g.slack);
  j["label"] = g.label;
  j["bound_direction"] = "upper";
  const double lo_floor = g.use_qbar ? 0.5 : 1.0;
  const double hi_ceiling = g.use_qbar ? 1.0 : g.D;
  j["invariants"] = {
      {"alpha_hat_at_least_floor", g.alpha_hat >= lo_floor * (1 - g.slack)},
      {"beta_hat_below_ceiling", g.beta_hat < hi_ceiling * (1 + g.slack)},
      {"gamma_hat_in_unit_interval", g.gamma_hat > 0 && g.gamma_hat <= 1},
      {"gamma_hat_above_universal_floor", g.gamma_hat >= 1.0 / g.D * (1 - g.slack)}};
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& f : g.family_checks) {
    nlohmann::json ids = f.members;
    fams.push_back({{"family", f.family},
                    {"kappa", f.kappa > 0 ? num(f.kappa) : nlohmann::json(nullptr)},
                    {"bound", num(f.bound.value)},
                    {"bound_exact", f.bound.exact},
                    {"members", ids},
                    {"gamma_family", num(f.gamma_family)},
                    {"slack", num(f.slack)},
                    {"pass", f.pass},
                    {"gamma_hat_at_least_bound", f.global_at_least_bound}});
  }
  j["family_checks"] = fams;
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : g.members) {
    nlohmann::json mj = {{"shape_id", m.shape_id}, {"family", m.family}, {"value", num(m.value)},
                         {"slack", num(m.slack)},  {"nodes", m.nodes},   {"levels", m.levels}};
    if (m.seed) mj["seed"] = *m.seed;
    ms.push_back(mj);
  }
  j["manifest"] = ms;
  j["errors"] = g.errors;
  return j;
}

// ---------------------------------------------------------------------------

bool PairTable::all_pass() const {
  for (const auto& c : pairs) {
    if (!c.error.empty()) return false;
    if (c.pass && !*c.pass) return false;
  }
  return true;
}

PairTable compare_pairs(double a, double b, double p, int n_pairs, std::uint64_t seed, int levels,
                        const SolverOptions& opts, int threads, Normalization by) {
  check_p(p);
  require(a > 0 && b > 0 && std::isfinite(a) && std::isfinite(b) && a < b, "need 0 < a < b");
  require(n_pairs >= 1, "need at least one pair");
  require(by != Normalization::kNone, "pairs must be normalized");
  opts.validate();

  PairTable t;
  t.a = a;
  t.b = b;
  t.p = p;
  t.guaranteed = a <= b / t.D * (1 + 1e-12);
  t.hp_lower_a = hp_prefactor(p) / std::pow(a, p);
  t.buser_inradius_upper_b = hp_prefactor(p) * std::pow(t.D / b, p);

  SamplerConfig sc;
  sc.seed = seed;
  sc.vertices = 0;
  t.pairs.resize(static_cast<std::size_t>(n_pairs));
  parallel_for(t.pairs.size(), threads, [&](std::size_t k) {
    PairComparison& c = t.pairs[k];
    const int ia = static_cast<int>(2 * k), ib = static_cast<int>(2 * k + 1);
    c.seed_a = sample_seed(seed, ia);
    c.seed_b = sample_seed(seed, ib);
    c.guaranteed = t.guaranteed;
    try {
      const ConvexPolygon pa = normalize(sample_polygon(sc, ia), {by, a});
      const ConvexPolygon pb = normalize(sample_polygon(sc, ib), {by, b});
      const RefinedRigidity ra = rigidity_with_refinement(pa, p, levels, 0.0, opts);
      const RefinedRigidity rb = rigidity_with_refinement(pb, p, levels, 0.0, opts);
      c.T_a = ra.T_norm;
      c.T_b = rb.T_norm;
      c.difference = c.T_b - c.T_a;
      c.margin = (c.T_a - c.T_b) / c.T_a;
      // Relative slack on T_norm from the two T_p slacks.
      c.slack = (p - 1.0) * (ra.relative_slack() + rb.relative_slack()) + 1e-12;
      if (t.guaranteed) c.pass = c.margin >= -c.slack;
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
  });
  return t;
}

nlohmann::json pairs_to_json(const PairTable& t) {
  nlohmann::json j;
  j["schema_version"] = "1";
  j["a"] = num(t.a);
  j["b"] = num(t.b);
  j["p"] = num(t.p);
  j["D"] = t.D;
  j["branch"] = t.guaranteed ? "guaranteed" : "unresolved by corridor";
  j["hp_lower_a"] = num(t.hp_lower_a);
  j["buser_inradius_upper_b"] = num(t.buser_inradius_upper_b);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : t.pairs) {
    nlohmann::json r = {{"seed_a", c.seed_a},         {"seed_b", c.seed_b},
                        {"T_a", num(c.T_a)},           {"T_b", num(c.T_b)},
                        {"difference", num(c.difference)}, {"margin", num(c.margin)},
                        {"slack", num(c.slack)}};
    r["pass"] = c.pass ? nlohmann::json(*c.pass) : nlohmann::json(nullptr);
    if (!c.error.empty()) r["error"] = c.error;
    rows.push_back(r);
  }
  j["pairs"] = rows;
  j["all_pass"] = t.all_pass();
  return j;
}

// ---------------------------------------------------------------------------

PToInfinityTrend p_to_infinity_trend(const ConvexPolygon& poly, const std::vector<double>& p_list,
                                     int levels, const SolverOptions& opts) {
  require(!p_list.empty(), "p list is empty");
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    check_p(p_list[i]);
    require(p_list[i] <= opts.p_max_supported, "exponent exceeds solver support");
    if (i) require(p_list[i] > p_list[i - 1], "p list must be strictly increasing");
  }
  PToInfinityTrend t;
  t.delta = average_distance(poly);
  t.inradius = inradius(poly).radius;
  t.Qinf = t.inradius / t.delta;
  t.qinf_in_range = t.Qinf >= 2.0 * (1 - 1e-12) && t.Qinf <= 3.0 * (1 + 1e-12);
  for (double p : p_list) {
    const RefinedRigidity r = rigidity_with_refinement(poly, p, levels, 0.0, opts);
    PToInfinityRow row;
    row.p = p;
    row.T_norm = r.T_norm;
    row.scaled_root = std::pow(r.T_norm, 1.0 / p) * t.delta;
    row.deviation = std::abs(row.scaled_root - 1.0);
    t.rows.push_back(row);
  }
  t.strictly_decreasing = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    if (!(t.rows[i].deviation < t.rows[i - 1].deviation)) t.strictly_decreasing = false;
  return t;
}

}  // namespace ptorsion
