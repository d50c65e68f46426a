#include "ptorsion/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ptorsion/functionals.hpp"

namespace ptorsion {

namespace {

double get_number(const nlohmann::json& j, const char* key, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw InputError(std::string("shape spec is missing \"") + key + "\"");
  }
  if (!j[key].is_number()) throw InputError(std::string("\"") + key + "\" must be a number");
  return j[key].get<double>();
}

int get_int(const nlohmann::json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw InputError(std::string("\"") + key + "\" must be an integer");
  return j[key].get<int>();
}

std::vector<Vec2> get_vertices(const nlohmann::json& j) {
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw InputError("shape spec needs a \"vertices\" array");
  std::vector<Vec2> v;
  for (const auto& p : j["vertices"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw InputError("each vertex must be a pair [x, y]");
    v.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return v;
}

nlohmann::json pt(Vec2 p) { return {p.x, p.y}; }

}  // namespace

ShapeSpec parse_shape_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("shape spec must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError("shape spec needs a string \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "polygon") return PolygonShape{get_vertices(j)};
  if (kind == "rectangle") return RectangleShape{get_number(j, "L"), get_number(j, "R")};
  if (kind == "square") {
    const double s = get_number(j, "side", 1.0);
    return PolygonShape{{{0, 0}, {s, 0}, {s, s}, {0, s}}};
  }
  if (kind == "regular_ngon")
    return RegularNgonShape{get_int(j, "n", 64), get_number(j, "circumradius", 1.0)};
  if (kind == "ellipse")
    return EllipsePolygonShape{get_number(j, "a"), get_number(j, "b"), get_int(j, "n", 256)};
  if (kind == "triangle") {
    const auto v = get_vertices(j);
    if (v.size() != 3) throw InputError("triangle needs exactly 3 vertices");
    return TriangleShape{v[0], v[1], v[2]};
  }
  if (kind == "equilateral_triangle") {
    const double r = get_number(j, "inradius", 1.0);
    if (!(r > 0) || !std::isfinite(r)) throw InputError("inradius must be positive");
    return PolygonShape{equilateral_triangle(r).vertices()};
  }
  throw InputError("unknown shape kind \"" + kind + "\"");
}

ShapeSpec load_shape_spec(const std::string& arg) {
  std::string text;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw InputError("cannot read spec file " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON in shape spec: ") + e.what());
  }
  return parse_shape_spec(j);
}

nlohmann::json shape_spec_to_json(const ShapeSpec& spec) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolygonShape>) {
          nlohmann::json v = nlohmann::json::array();
          for (Vec2 p : s.vertices) v.push_back(pt(p));
          return {{"kind", "polygon"}, {"vertices", v}};
        } else if constexpr (std::is_same_v<T, RectangleShape>) {
          return {{"kind", "rectangle"}, {"L", s.length}, {"R", s.half_width}};
        } else if constexpr (std::is_same_v<T, RegularNgonShape>) {
          return {{"kind", "regular_ngon"}, {"n", s.n}, {"circumradius", s.circumradius}};
        } else if constexpr (std::is_same_v<T, EllipsePolygonShape>) {
          return {{"kind", "ellipse"}, {"a", s.a}, {"b", s.b}, {"n", s.n}};
        } else {
          return {{"kind", "triangle"}, {"vertices", {pt(s.p0), pt(s.p1), pt(s.p2)}}};
        }
      },
      spec);
}

nlohmann::json solution_to_json(const TorsionSolution& sol) {
  nlohmann::json j;
  j["schema_version"] = "1";
  j["p"] = round9(sol.p);
  j["T_p"] = round9(sol.T_p);
  j["converged"] = sol.converged;
  j["iterations"] = sol.iterations;
  nlohmann::json nodes = nlohmann::json::array(), tris = nlohmann::json::array(),
                 bnd = nlohmann::json::array(), u = nlohmann::json::array();
  if (sol.mesh) {
    for (std::size_t i = 0; i < sol.mesh->nodes.size(); ++i) {
      nodes.push_back({round9(sol.mesh->nodes[i].x), round9(sol.mesh->nodes[i].y)});
      bnd.push_back(sol.mesh->boundary_mask[i] ? 1 : 0);
    }
    for (const auto& t : sol.mesh->triangles) tris.push_back({t[0], t[1], t[2]});
  }
  for (double x : sol.u) u.push_back(round9(x));
  j["nodes"] = nodes;
  j["triangles"] = tris;
  j["boundary"] = bnd;
  j["u"] = u;
  return j;
}

}  // namespace ptorsion
