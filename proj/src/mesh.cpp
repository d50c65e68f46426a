#include "ptorsion/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace ptorsion {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

// > 0 when d lies inside the circumcircle of the counter-clockwise triangle abc.
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 ad = a - d, bd = b - d, cd = c - d;
  const double a2 = dot(ad, ad), b2 = dot(bd, bd), c2 = dot(cd, cd);
  return ad.x * (bd.y * c2 - b2 * cd.y) - ad.y * (bd.x * c2 - b2 * cd.x) +
         a2 * (bd.x * cd.y - bd.y * cd.x);
}

double max_angle(Vec2 a, Vec2 b, Vec2 c) {
  auto angle = [](Vec2 p, Vec2 q, Vec2 r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  return std::max({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

// Incremental Delaunay triangulation of points inside a convex polygon. The
// hull never changes: the structure starts as the fan of the polygon around an
// interior seed and every later point lies in the closed polygon.
class DelaunayBuilder {
 public:
  DelaunayBuilder(const ConvexPolygon& poly, Vec2 seed) {
    scale_ = poly.diameter();
    for (const Vec2& v : poly.vertices()) add_node(v, true);
    const int c = add_node(seed, false);
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
      tri_.push_back({c, i, (i + 1) % n});
      // Opposite c: the polygon edge; opposite i: edge (i+1, c); opposite i+1: edge (c, i).
      nbr_.push_back({-1, (i + 1) % n, (i + n - 1) % n});
    }
  }

  int add_node(Vec2 p, bool boundary) {
    pts_.push_back(p);
    boundary_.push_back(boundary ? 1 : 0);
    return static_cast<int>(pts_.size()) - 1;
  }

  // Inserts p; returns false when it duplicates an existing node.
  bool insert(Vec2 p, bool boundary) {
    int t = locate(p);
    if (t < 0) return false;
    const auto& v = tri_[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k)
      if (distance(pts_[static_cast<std::size_t>(v[static_cast<std::size_t>(k)])], p) <= 1e-9 * scale_)
        return false;
    // On-edge detection relative to the edge length.
    int on_edge = -1;
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = pts_[static_cast<std::size_t>(v[static_cast<std::size_t>((k + 1) % 3)])];
      const Vec2 b = pts_[static_cast<std::size_t>(v[static_cast<std::size_t>((k + 2) % 3)])];
      const Vec2 e = b - a;
      if (std::abs(orient(a, b, p)) <= 1e-10 * dot(e, e)) on_edge = k;
    }
    const int id = add_node(p, boundary);
    if (on_edge >= 0)
      split_edge(t, on_edge, id);
    else
      split_triangle(t, id);
    last_ = t;
    return true;
  }

  const std::vector<Vec2>& points() const { return pts_; }

  // Longest edges above `limit`, as midpoints to insert.
  std::vector<Vec2> long_edge_midpoints(double limit) const {
    std::vector<Vec2> out;
    for (std::size_t t = 0; t < tri_.size(); ++t)
      for (int k = 0; k < 3; ++k) {
        const int a = tri_[t][static_cast<std::size_t>((k + 1) % 3)];
        const int b = tri_[t][static_cast<std::size_t>((k + 2) % 3)];
        const int u = nbr_[t][static_cast<std::size_t>(k)];
        if (u >= 0 && a > b) continue;  // visit interior edges once
        const Vec2 pa = pts_[static_cast<std::size_t>(a)], pb = pts_[static_cast<std::size_t>(b)];
        if (distance(pa, pb) > limit) out.push_back((pa + pb) * 0.5);
      }
    return out;
  }

  bool is_boundary(int id) const { return boundary_[static_cast<std::size_t>(id)] != 0; }

  Mesh export_mesh() const {
    Mesh mesh;
    mesh.nodes = pts_;
    mesh.boundary_mask = boundary_;
    mesh.triangles = tri_;
    mesh.coarse_node_count = pts_.size();
    return mesh;
  }

 private:
  Vec2 P(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  int locate(Vec2 p) {
    const int count = static_cast<int>(tri_.size());
    int t = std::clamp(last_, 0, count - 1);
    for (int step = 0; step < 4 * count + 16; ++step) {
      const auto& v = tri_[static_cast<std::size_t>(t)];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int kk = (k + step) % 3;  // rotate the start edge to avoid cycling
        const Vec2 a = P(v[static_cast<std::size_t>((kk + 1) % 3)]);
        const Vec2 b = P(v[static_cast<std::size_t>((kk + 2) % 3)]);
        const Vec2 e = b - a;
        if (orient(a, b, p) < -1e-10 * dot(e, e) && nbr_[static_cast<std::size_t>(t)][static_cast<std::size_t>(kk)] >= 0) {
          next = nbr_[static_cast<std::size_t>(t)][static_cast<std::size_t>(kk)];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // Fallback: exhaustive search.
    for (int s = 0; s < count; ++s) {
      const auto& v = tri_[static_cast<std::size_t>(s)];
      bool inside = true;
      for (int k = 0; k < 3 && inside; ++k) {
        const Vec2 a = P(v[static_cast<std::size_t>((k + 1) % 3)]);
        const Vec2 b = P(v[static_cast<std::size_t>((k + 2) % 3)]);
        const Vec2 e = b - a;
        inside = orient(a, b, p) >= -1e-10 * dot(e, e);
      }
      if (inside) return s;
    }
    return -1;
  }

  void replace_neighbor(int u, int old_t, int new_t) {
    if (u < 0) return;
    for (int& x : nbr_[static_cast<std::size_t>(u)])
      if (x == old_t) x = new_t;
  }

  void split_triangle(int t, int p) {
    const auto v = tri_[static_cast<std::size_t>(t)];
    const auto n = nbr_[static_cast<std::size_t>(t)];
    const int t1 = static_cast<int>(tri_.size());
    const int t2 = t1 + 1;
    tri_[static_cast<std::size_t>(t)] = {v[0], v[1], p};
    nbr_[static_cast<std::size_t>(t)] = {t1, t2, n[2]};
    tri_.push_back({v[1], v[2], p});
    nbr_.push_back({t2, t, n[0]});
    tri_.push_back({v[2], v[0], p});
    nbr_.push_back({t, t1, n[1]});
    replace_neighbor(n[0], t, t1);
    replace_neighbor(n[1], t, t2);
    legalize({{t, 2}, {t1, 2}, {t2, 2}});
  }

  // p lies on the edge of t opposite local vertex k.
  void split_edge(int t, int k, int p) {
    const auto tv = tri_[static_cast<std::size_t>(t)];
    const auto tn = nbr_[static_cast<std::size_t>(t)];
    const int a = tv[static_cast<std::size_t>(k)];
    const int b = tv[static_cast<std::size_t>((k + 1) % 3)];
    const int c = tv[static_cast<std::size_t>((k + 2) % 3)];
    const int n_b = tn[static_cast<std::size_t>((k + 1) % 3)];  // across edge (c, a)
    const int n_c = tn[static_cast<std::size_t>((k + 2) % 3)];  // across edge (a, b)
    const int u = tn[static_cast<std::size_t>(k)];
    const int t1 = static_cast<int>(tri_.size());
    if (u < 0) {
      tri_[static_cast<std::size_t>(t)] = {a, b, p};
      nbr_[static_cast<std::size_t>(t)] = {-1, t1, n_c};
      tri_.push_back({a, p, c});
      nbr_.push_back({-1, n_b, t});
      replace_neighbor(n_b, t, t1);
      legalize({{t, 2}, {t1, 1}});
      return;
    }
    const auto uv = tri_[static_cast<std::size_t>(u)];
    const auto un = nbr_[static_cast<std::size_t>(u)];
    int j = 0;
    while (un[static_cast<std::size_t>(j)] != t) ++j;
    const int d = uv[static_cast<std::size_t>(j)];
    const int m_c = un[static_cast<std::size_t>((j + 2) % 3)];  // opposite b in u: edge (d, c)? see below
    const int m_b = un[static_cast<std::size_t>((j + 1) % 3)];
    // u = (d, c, b) counter-clockwise: uv[j+1] == c, uv[j+2] == b.
    // m_b (opposite c) spans (b, d); m_c (opposite b) spans (d, c).
    const int u1 = t1 + 1;
    tri_[static_cast<std::size_t>(t)] = {a, b, p};
    nbr_[static_cast<std::size_t>(t)] = {u1, t1, n_c};
    tri_.push_back({a, p, c});
    nbr_.push_back({u, n_b, t});
    tri_[static_cast<std::size_t>(u)] = {d, c, p};
    nbr_[static_cast<std::size_t>(u)] = {t1, u1, m_c};
    tri_.push_back({d, p, b});
    nbr_.push_back({t, m_b, u});
    replace_neighbor(n_b, t, t1);
    replace_neighbor(m_b, u, u1);
    legalize({{t, 2}, {t1, 1}, {u, 2}, {u1, 1}});
  }

  void legalize(std::vector<std::pair<int, int>> stack) {
    int guard = 0;
    while (!stack.empty() && guard++ < 1'000'000) {
      const auto [t, k] = stack.back();
      stack.pop_back();
      const auto tk = static_cast<std::size_t>(k);
      const int u = nbr_[static_cast<std::size_t>(t)][tk];
      if (u < 0) continue;
      const auto tv = tri_[static_cast<std::size_t>(t)];
      const int p = tv[tk];
      const int a = tv[(tk + 1) % 3];
      const int b = tv[(tk + 2) % 3];
      const auto uv = tri_[static_cast<std::size_t>(u)];
      const auto un = nbr_[static_cast<std::size_t>(u)];
      int j = 0;
      while (j < 3 && un[static_cast<std::size_t>(j)] != t) ++j;
      if (j == 3) continue;
      const int d = uv[static_cast<std::size_t>(j)];
      const Vec2 pp = P(p), pa = P(a), pb = P(b), pd = P(d);
      const double len = std::max({distance(pp, pa), distance(pa, pd), distance(pd, pb),
                                   distance(pb, pp)});
      if (incircle(pp, pa, pb, pd) <= 1e-12 * len * len * len * len) continue;
      if (orient(pp, pa, pd) <= 1e-12 * len * len || orient(pp, pd, pb) <= 1e-12 * len * len)
        continue;
      const auto tn = nbr_[static_cast<std::size_t>(t)];
      const int n_a = tn[(tk + 1) % 3];  // across (b, p)
      const int n_b = tn[(tk + 2) % 3];  // across (p, a)
      // u = (d, b, a): un[j+1] is opposite b, spanning (a, d); un[j+2] opposite a, spanning (d, b).
      const int m_b = un[static_cast<std::size_t>((j + 1) % 3)];
      const int m_a = un[static_cast<std::size_t>((j + 2) % 3)];
      tri_[static_cast<std::size_t>(t)] = {p, a, d};
      nbr_[static_cast<std::size_t>(t)] = {m_b, u, n_b};
      tri_[static_cast<std::size_t>(u)] = {p, d, b};
      nbr_[static_cast<std::size_t>(u)] = {m_a, n_a, t};
      replace_neighbor(m_b, u, t);
      replace_neighbor(n_a, t, u);
      stack.push_back({t, 0});
      stack.push_back({u, 0});
    }
  }

  std::vector<Vec2> pts_;
  std::vector<std::uint8_t> boundary_;
  std::vector<std::array<int, 3>> tri_;
  std::vector<std::array<int, 3>> nbr_;
  int last_ = 0;
  double scale_ = 1.0;
};

Mesh fan_mesh(const ConvexPolygon& poly, Vec2 center) {
  Mesh mesh;
  mesh.nodes = poly.vertices();
  mesh.boundary_mask.assign(poly.size(), 1);
  mesh.nodes.push_back(center);
  mesh.boundary_mask.push_back(0);
  const int c = static_cast<int>(poly.size());
  for (int i = 0; i < c; ++i) mesh.triangles.push_back({c, i, (i + 1) % c});
  mesh.coarse_node_count = mesh.nodes.size();
  return mesh;
}

double fan_max_angle(const ConvexPolygon& poly, Vec2 center) {
  double worst = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    worst = std::max(worst, max_angle(center, poly.vertex(i), poly.vertex(i + 1)));
  return worst;
}

double fan_longest_edge(const ConvexPolygon& poly, Vec2 center) {
  double worst = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    worst = std::max({worst, distance(center, poly.vertex(i)),
                      distance(poly.vertex(i), poly.vertex(i + 1))});
  return worst;
}

Mesh delaunay_mesh(const ConvexPolygon& poly, Vec2 center, double h) {
  DelaunayBuilder builder(poly, center);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly.vertex(i);
    const Vec2 b = poly.vertex(i + 1);
    const int m = std::max(1, static_cast<int>(std::ceil(distance(a, b) / h - 1e-9)));
    for (int j = 1; j < m; ++j) builder.insert(a + (b - a) * (static_cast<double>(j) / m), true);
  }
  // Equilateral lattice aligned with the longest polygon edge, through the seed.
  std::size_t longest = 0;
  for (std::size_t i = 1; i < poly.size(); ++i)
    if (distance(poly.vertex(i), poly.vertex(i + 1)) >
        distance(poly.vertex(longest), poly.vertex(longest + 1)))
      longest = i;
  const Vec2 ex = (poly.vertex(longest + 1) - poly.vertex(longest)) /
                  distance(poly.vertex(longest + 1), poly.vertex(longest));
  const Vec2 ey{-ex.y, ex.x};
  double umin = 0, umax = 0, vmin = 0, vmax = 0;
  for (const Vec2& p : poly.vertices()) {
    const Vec2 d = p - center;
    umin = std::min(umin, dot(d, ex));
    umax = std::max(umax, dot(d, ex));
    vmin = std::min(vmin, dot(d, ey));
    vmax = std::max(vmax, dot(d, ey));
  }
  const double dy = h * std::sqrt(3.0) / 2.0;
  const int jlo = static_cast<int>(std::floor(vmin / dy)) - 1;
  const int jhi = static_cast<int>(std::ceil(vmax / dy)) + 1;
  const int ilo = static_cast<int>(std::floor(umin / h)) - 2;
  const int ihi = static_cast<int>(std::ceil(umax / h)) + 2;
  for (int j = jlo; j <= jhi; ++j) {
    const double shift = (j % 2 != 0) ? 0.5 * h : 0.0;
    for (int i = ilo; i <= ihi; ++i) {
      const Vec2 p = center + ex * (i * h + shift) + ey * (j * dy);
      if (distance(p, center) < 0.5 * h) continue;
      const BoundaryDistance bd = boundary_distance(poly, p);
      if (bd.outside || bd.distance < 0.45 * h) continue;
      builder.insert(p, false);
    }
  }
  for (int pass = 0; pass < 20; ++pass) {
    const std::vector<Vec2> mids = builder.long_edge_midpoints(1.5 * h);
    if (mids.empty()) break;
    for (const Vec2& m : mids) builder.insert(m, false);
  }
  return builder.export_mesh();
}

// One pass moving every interior node to the area-weighted centroid of its
// patch; a move is kept only if the patch stays valid and short-edged.
void smooth_interior(Mesh& mesh, double edge_limit) {
  const std::size_t n = mesh.nodes.size();
  std::vector<std::vector<int>> incident(n);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    for (int v : mesh.triangles[t]) incident[static_cast<std::size_t>(v)].push_back(static_cast<int>(t));
  const std::vector<Vec2> old = mesh.nodes;
  std::vector<Vec2> moved = old;
  for (std::size_t i = 0; i < n; ++i) {
    if (mesh.boundary_mask[i] || incident[i].empty()) continue;
    double w = 0.0;
    Vec2 c;
    for (int t : incident[i]) {
      const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
      const Vec2 a = old[static_cast<std::size_t>(tri[0])];
      const Vec2 b = old[static_cast<std::size_t>(tri[1])];
      const Vec2 d = old[static_cast<std::size_t>(tri[2])];
      const double area = 0.5 * orient(a, b, d);
      c += (a + b + d) * (area / 3.0);
      w += area;
    }
    moved[i] = c / w;
  }
  // Accept node by node against the original neighbours.
  for (std::size_t i = 0; i < n; ++i) {
    if (mesh.boundary_mask[i] || moved[i] == old[i]) continue;
    mesh.nodes[i] = moved[i];
    bool ok = true;
    for (int t : incident[i]) {
      const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
      const Vec2 a = mesh.nodes[static_cast<std::size_t>(tri[0])];
      const Vec2 b = mesh.nodes[static_cast<std::size_t>(tri[1])];
      const Vec2 d = mesh.nodes[static_cast<std::size_t>(tri[2])];
      const double before = orient(old[static_cast<std::size_t>(tri[0])], old[static_cast<std::size_t>(tri[1])],
                                   old[static_cast<std::size_t>(tri[2])]);
      if (orient(a, b, d) < 0.5 * before || distance(a, b) > edge_limit ||
          distance(b, d) > edge_limit || distance(d, a) > edge_limit) {
        ok = false;
        break;
      }
    }
    if (!ok) mesh.nodes[i] = old[i];
  }
}

}  // namespace

double triangle_area(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  return 0.5 * orient(mesh.nodes[static_cast<std::size_t>(tri[0])], mesh.nodes[static_cast<std::size_t>(tri[1])],
                      mesh.nodes[static_cast<std::size_t>(tri[2])]);
}

double total_area(const Mesh& mesh) {
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) s += triangle_area(mesh, t);
  return s;
}

double longest_edge(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k)
      h = std::max(h, distance(mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])],
                               mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])]));
  return h;
}

Mesh refine_uniform(const Mesh& mesh) {
  if (mesh.nodes.size() * 4 > kNodeBudget) throw ResourceError("refinement exceeds node budget");
  std::unordered_map<std::uint64_t, int> edge_count;
  edge_count.reserve(mesh.triangles.size() * 3);
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) ++edge_count[edge_key(tri[static_cast<std::size_t>(k)], tri[static_cast<std::size_t>((k + 1) % 3)])];

  Mesh fine;
  fine.nodes = mesh.nodes;
  fine.boundary_mask = mesh.boundary_mask;
  fine.coarse_node_count = mesh.nodes.size();
  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(edge_count.size());
  auto mid = [&](int a, int b) {
    const std::uint64_t key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(fine.nodes.size());
    fine.nodes.push_back((mesh.nodes[static_cast<std::size_t>(a)] + mesh.nodes[static_cast<std::size_t>(b)]) * 0.5);
    fine.boundary_mask.push_back(edge_count[key] == 1 ? 1 : 0);
    fine.midpoint_parents.push_back({std::min(a, b), std::max(a, b)});
    midpoint.emplace(key, id);
    return id;
  };
  fine.triangles.reserve(mesh.triangles.size() * 4);
  for (const auto& tri : mesh.triangles) {
    const int a = tri[0], b = tri[1], c = tri[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    fine.triangles.push_back({a, ab, ca});
    fine.triangles.push_back({ab, b, bc});
    fine.triangles.push_back({ca, bc, c});
    fine.triangles.push_back({ab, bc, ca});
  }
  fine.h_max = longest_edge(fine);
  return fine;
}

std::vector<double> prolongate(const Mesh& fine, const std::vector<double>& coarse) {
  if (coarse.size() != fine.coarse_node_count ||
      fine.coarse_node_count + fine.midpoint_parents.size() != fine.nodes.size())
    throw std::invalid_argument("prolongate: mesh is not a refinement of the given values");
  std::vector<double> out(coarse);
  out.reserve(fine.nodes.size());
  for (const auto& pr : fine.midpoint_parents)
    out.push_back(0.5 * (coarse[static_cast<std::size_t>(pr[0])] + coarse[static_cast<std::size_t>(pr[1])]));
  return out;
}

Mesh triangulate(const ConvexPolygon& poly, double h_target, MeshStrategy strategy) {
  if (!(h_target > 0.0) || !std::isfinite(h_target))
    throw std::invalid_argument("mesh size must be positive");
  if (h_target >= poly.diameter())
    throw std::invalid_argument("mesh size must be below the polygon diameter");
  const Incircle inc = inradius(poly);
  const double limit = 1.5 * h_target;

  // Fan cost: n * 4^k triangles after k halvings of the longest fan edge.
  const double fan_long = fan_longest_edge(poly, inc.center);
  const int fan_levels = std::max(0, static_cast<int>(std::ceil(std::log2(fan_long / limit) - 1e-12)));
  const double fan_triangles = static_cast<double>(poly.size()) * std::pow(4.0, fan_levels);
  const double iso_triangles =
      area(poly) / (std::sqrt(3.0) / 4.0 * h_target * h_target) + 2.0 * perimeter(poly) / h_target;

  if (strategy == MeshStrategy::kAuto) {
    const bool shapely = fan_max_angle(poly, inc.center) <= 2.0 * kPi / 3.0 + 1e-9;
    strategy = (shapely && fan_triangles <= 16.0 * iso_triangles) ? MeshStrategy::kFan
                                                                  : MeshStrategy::kDelaunay;
  }
  const double budget_estimate = strategy == MeshStrategy::kFan ? fan_triangles / 2.0 : iso_triangles / 2.0;
  if (budget_estimate > static_cast<double>(kNodeBudget))
    throw ResourceError("mesh size too small: node budget exceeded");

  Mesh mesh;
  if (strategy == MeshStrategy::kFan) {
    mesh = fan_mesh(poly, inc.center);
    for (int k = 0; k < fan_levels; ++k) mesh = refine_uniform(mesh);
  } else {
    mesh = delaunay_mesh(poly, inc.center, h_target);
  }
  smooth_interior(mesh, limit);
  mesh.h_max = longest_edge(mesh);
  mesh.coarse_node_count = mesh.nodes.size();
  mesh.midpoint_parents.clear();
  return mesh;
}

MeshQuality mesh_quality(const Mesh& mesh, const ConvexPolygon& poly) {
  MeshQuality q;
  q.min_area = std::numeric_limits<double>::infinity();
  q.min_angle_deg = 180.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double a = triangle_area(mesh, t);
    q.total_area += a;
    q.min_area = std::min(q.min_area, a);
    if (a <= 0.0) q.all_positive = false;
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
      const Vec2 u = mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])] - p;
      const Vec2 v = mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 2) % 3)])] - p;
      const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / kPi;
      q.min_angle_deg = std::min(q.min_angle_deg, ang);
      q.max_angle_deg = std::max(q.max_angle_deg, ang);
    }
  }
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    if (!mesh.boundary_mask[i]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < poly.size(); ++e) {
      const Vec2 a = poly.vertex(e);
      const Vec2 d = poly.vertex(e + 1) - a;
      const double s = std::clamp(dot(mesh.nodes[i] - a, d) / dot(d, d), 0.0, 1.0);
      best = std::min(best, distance(mesh.nodes[i], a + d * s));
    }
    q.max_boundary_offset = std::max(q.max_boundary_offset, best);
  }
  return q;
}

}  // namespace ptorsion
