#include "ptorsion/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace ptorsion {

namespace {

constexpr double kPi = std::numbers::pi;

double compute_diameter(const std::vector<Vec2>& v) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const Vec2 e = v[i] - v[j];
      d2 = std::max(d2, dot(e, e));
    }
  return std::sqrt(d2);
}

Vec2 vertex_mean(const std::vector<Vec2>& v) {
  Vec2 s;
  for (const Vec2& p : v) s += p;
  return s / static_cast<double>(v.size());
}

// Inward unit normal of the edge a -> b of a counter-clockwise polygon.
Vec2 inward_normal(Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double len = norm(e);
  return {-e.y / len, e.x / len};
}

// Half-plane nu . x >= c in coordinates relative to the polygon reference.
struct OffsetLine {
  Vec2 nu;
  double c = 0.0;
};

Vec2 intersect(const OffsetLine& a, const OffsetLine& b) {
  const double det = cross(a.nu, b.nu);
  return {(a.c * b.nu.y - b.c * a.nu.y) / det, (a.nu.x * b.c - b.nu.x * a.c) / det};
}

double shoelace(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

double loop_length(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += distance(v[i], v[(i + 1) % v.size()]);
  return s;
}

// The inner parallel body of a convex polygon, tracked through the offsets at
// which edges shrink to zero length. Offsets are measured from the original
// boundary; vertices are recomputed from line intersections at every query.
class OffsetFront {
 public:
  explicit OffsetFront(const ConvexPolygon& poly)
      : reference_(poly.reference()), scale_(poly.diameter()) {
    const auto& v = poly.vertices();
    lines_.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 nu = inward_normal(v[i], poly.vertex(i + 1));
      lines_.push_back({nu, dot(nu, v[i] - reference_)});
    }
  }

  bool collapsed() const { return collapsed_; }
  double offset() const { return offset_; }

  // Vertices (relative to the reference) at the current offset plus `extra`.
  std::vector<Vec2> vertices(double extra = 0.0) const {
    std::vector<Vec2> out;
    out.reserve(lines_.size());
    const double t = offset_ + extra;
    for (std::size_t j = 0; j < lines_.size(); ++j) {
      OffsetLine a = lines_[j];
      OffsetLine b = lines_[(j + 1) % lines_.size()];
      a.c += t;
      b.c += t;
      out.push_back(intersect(a, b));
    }
    return out;
  }

  struct Piece {
    double length = 0.0;     // offset span until the next event
    double area = 0.0;       // area at the start of the piece
    double perimeter = 0.0;  // perimeter at the start of the piece
    double curvature = 0.0;  // sum of tan(turn/2)
  };

  // Describes the quadratic area law valid until the next edge vanishes.
  Piece next_piece() {
    Piece piece;
    const std::size_t m = lines_.size();
    tan_half_.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2 a = lines_[j].nu;
      const Vec2 b = lines_[(j + 1) % m].nu;
      const double s = cross(a, b);
      const double co = dot(a, b);
      if (s <= 0.0 || 1.0 + co <= 1e-15) {
        collapsed_ = true;
        return piece;
      }
      tan_half_[j] = s / (1.0 + co);
      piece.curvature += tan_half_[j];
    }
    const std::vector<Vec2> w = vertices();
    piece.area = shoelace(w);
    piece.perimeter = loop_length(w);
    vanish_.assign(m, std::numeric_limits<double>::infinity());
    double tau = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2 start = w[(j + m - 1) % m];
      const Vec2 end = w[j];
      const Vec2 dir{lines_[j].nu.y, -lines_[j].nu.x};
      const double len = std::max(0.0, dot(end - start, dir));
      const double rate = tan_half_[(j + m - 1) % m] + tan_half_[j];
      vanish_[j] = len / rate;
      tau = std::min(tau, vanish_[j]);
    }
    piece.length = tau;
    return piece;
  }

  // Advances to the end of the piece returned by the last next_piece().
  void advance(double tau) {
    offset_ += tau;
    const double tol = 1e-12 * scale_;
    std::vector<OffsetLine> kept;
    kept.reserve(lines_.size());
    for (std::size_t j = 0; j < lines_.size(); ++j)
      if (vanish_[j] > tau + tol) kept.push_back(lines_[j]);
    if (kept.size() == lines_.size() && !kept.empty()) {
      // Guard against a stalled event: drop the shortest edge.
      const auto it = std::min_element(vanish_.begin(), vanish_.end());
      kept.erase(kept.begin() + (it - vanish_.begin()));
    }
    lines_ = std::move(kept);
    if (lines_.size() < 3) collapsed_ = true;
  }

  Vec2 reference() const { return reference_; }

 private:
  std::vector<OffsetLine> lines_;
  std::vector<double> tan_half_;
  std::vector<double> vanish_;
  Vec2 reference_;
  double scale_ = 1.0;
  double offset_ = 0.0;
  bool collapsed_ = false;
};

}  // namespace

// ---------------------------------------------------------------------------

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw InvalidPolygon("polygon needs at least 3 vertices, got " + std::to_string(n));
  for (const Vec2& p : vertices)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidPolygon("polygon vertex is not finite");
  ConvexPolygon poly;
  poly.diameter_ = compute_diameter(vertices);
  if (!(poly.diameter_ > 0.0)) throw InvalidPolygon("polygon has zero diameter");
  poly.reference_ = vertex_mean(vertices);
  const double d = poly.diameter_;
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const std::size_t next = (i + 1) % n;
    const Vec2 e0 = vertices[i] - vertices[prev];
    const Vec2 e1 = vertices[next] - vertices[i];
    if (norm(e1) <= kVertexSeparationTol * d) {
      std::ostringstream msg;
      msg << "vertices " << i << " and " << next << " coincide";
      throw InvalidPolygon(msg.str());
    }
    const double c = cross(e0, e1);
    if (c <= kConvexityTol * d * d) {
      std::ostringstream msg;
      msg << "polygon is not strictly convex counter-clockwise at vertex triple (" << prev
          << ", " << i << ", " << next << ")";
      throw InvalidPolygon(msg.str());
    }
    turning += std::atan2(c, dot(e0, e1));
  }
  if (std::abs(turning - 2.0 * kPi) > 1e-6)
    throw InvalidPolygon("polygon boundary winds more than once");
  poly.vertices_ = std::move(vertices);
  return poly;
}

std::optional<ConvexPolygon> cleaned_polygon(std::vector<Vec2> v) {
  if (v.size() < 3) return std::nullopt;
  const double d = compute_diameter(v);
  if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 prev = v[(i + n - 1) % n];
      const Vec2 next = v[(i + 1) % n];
      const bool duplicate = norm(next - v[i]) <= 4.0 * kVertexSeparationTol * d;
      const bool flat = cross(v[i] - prev, next - v[i]) <= 4.0 * kConvexityTol * d * d;
      if (duplicate || flat) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (v.size() < 3) return std::nullopt;
  try {
    return ConvexPolygon::from_vertices(std::move(v));
  } catch (const InvalidPolygon&) {
    return std::nullopt;
  }
}

double area(const ConvexPolygon& poly) {
  const Vec2 ref = poly.reference();
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    s += cross(poly.vertex(i) - ref, poly.vertex(i + 1) - ref);
  return 0.5 * s;
}

double perimeter(const ConvexPolygon& poly) { return loop_length(poly.vertices()); }

Vec2 centroid(const ConvexPolygon& poly) {
  const Vec2 ref = poly.reference();
  double a = 0.0;
  Vec2 c;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 p = poly.vertex(i) - ref;
    const Vec2 q = poly.vertex(i + 1) - ref;
    const double w = cross(p, q);
    a += w;
    c += (p + q) * w;
  }
  return ref + c / (3.0 * a);
}

Incircle inradius(const ConvexPolygon& poly) {
  // Dual of  max r  s.t.  -nu_i . c + r <= b_i:
  //   min b.y  s.t.  sum y_i (-nu_i, 1) = (0, 0, 1), y >= 0.
  // A basic solution has three edges; the simplex multipliers are (c, r).
  const std::size_t n = poly.size();
  const Vec2 ref = poly.reference();
  std::vector<Vec2> nu(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    nu[i] = inward_normal(poly.vertex(i), poly.vertex(i + 1));
    b[i] = -dot(nu[i], poly.vertex(i) - ref);
  }
  auto column = [&](std::size_t i) { return Eigen::Vector3d(-nu[i].x, -nu[i].y, 1.0); };

  // Starting basis: three edges whose normals positively span the plane.
  std::size_t j = 1;
  for (std::size_t i = 1; i < n; ++i) {
    double phi = std::atan2(cross(nu[0], nu[i]), dot(nu[0], nu[i]));
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi < kPi) j = i;
  }
  std::array<std::size_t, 3> basis{0, j, std::min(j + 1, n - 1)};

  const double tol = 1e-14 * poly.diameter();
  const Eigen::Vector3d target(0.0, 0.0, 1.0);
  Eigen::Vector3d pi = Eigen::Vector3d::Zero();
  for (int iter = 0; iter < 50 + 10 * static_cast<int>(n); ++iter) {
    Eigen::Matrix3d B;
    for (int k = 0; k < 3; ++k) B.col(k) = column(basis[k]);
    const Eigen::PartialPivLU<Eigen::Matrix3d> lu(B);
    const Eigen::Vector3d y = lu.solve(target);
    pi = B.transpose().partialPivLu().solve(Eigen::Vector3d(b[basis[0]], b[basis[1]], b[basis[2]]));
    const Vec2 c{pi(0), pi(1)};
    const double r = pi(2);

    // Dantzig pricing first, Bland's rule afterwards to rule out cycling.
    const bool bland = iter > 30;
    std::size_t entering = n;
    double best = -tol;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == basis[0] || m == basis[1] || m == basis[2]) continue;
      const double reduced = b[m] + dot(nu[m], c) - r;
      if (reduced < best) {
        entering = m;
        if (bland) break;
        best = reduced;
      }
    }
    if (entering == n) break;

    const Eigen::Vector3d d = lu.solve(column(entering));
    int leaving = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      if (d(k) <= 1e-14) continue;
      const double q = std::max(0.0, y(k)) / d(k);
      if (q < ratio - 1e-15 || (bland && std::abs(q - ratio) <= 1e-15 &&
                                 basis[k] < basis[static_cast<std::size_t>(leaving)])) {
        ratio = q;
        leaving = k;
      }
    }
    if (leaving < 0) break;  // unbounded dual cannot happen for a bounded polygon
    basis[static_cast<std::size_t>(leaving)] = entering;
  }
  return {pi(2), ref + Vec2{pi(0), pi(1)}};
}

bool contains(const ConvexPolygon& poly, Vec2 x, double tol) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 nu = inward_normal(poly.vertex(i), poly.vertex(i + 1));
    if (dot(nu, x - poly.vertex(i)) < -tol) return false;
  }
  return true;
}

BoundaryDistance boundary_distance(const ConvexPolygon& poly, Vec2 x) {
  if (!contains(poly, x, 1e-14 * poly.diameter())) return {0.0, true};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly.vertex(i);
    const Vec2 e = poly.vertex(i + 1) - a;
    const double s = std::clamp(dot(x - a, e) / dot(e, e), 0.0, 1.0);
    best = std::min(best, distance(x, a + e * s));
  }
  return {best, false};
}

std::optional<ConvexPolygon> erode(const ConvexPolygon& poly, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("erosion offset must be nonnegative");
  if (t == 0.0) return poly;
  OffsetFront front(poly);
  while (true) {
    const OffsetFront::Piece piece = front.next_piece();
    if (front.collapsed()) return std::nullopt;
    const double remaining = t - front.offset();
    if (remaining < piece.length) {
      std::vector<Vec2> v = front.vertices(remaining);
      if (shoelace(v) <= 1e-14 * area(poly)) return std::nullopt;
      for (Vec2& p : v) p += front.reference();
      return cleaned_polygon(std::move(v));
    }
    front.advance(piece.length);
    if (front.collapsed()) return std::nullopt;
  }
}

double eroded_area(const ConvexPolygon& poly, double t) {
  const auto inner = erode(poly, t);
  return inner ? area(*inner) : 0.0;
}

namespace {

struct LayerCake {
  double integral = 0.0;
  double collapse = 0.0;
};

LayerCake integrate_layers(const ConvexPolygon& poly) {
  OffsetFront front(poly);
  LayerCake out;
  const double floor_area = 1e-15 * area(poly);
  while (true) {
    const OffsetFront::Piece piece = front.next_piece();
    if (front.collapsed() || piece.area <= floor_area) break;
    const double s = piece.length;
    out.integral += piece.area * s - 0.5 * piece.perimeter * s * s +
                    piece.curvature * s * s * s / 3.0;
    front.advance(s);
    if (front.collapsed()) break;
  }
  out.collapse = front.offset();
  return out;
}

}  // namespace

double average_distance(const ConvexPolygon& poly) {
  return integrate_layers(poly).integral / area(poly);
}

double collapse_offset(const ConvexPolygon& poly) { return integrate_layers(poly).collapse; }

ConvexPolygon scale(const ConvexPolygon& poly, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scale factor must be positive");
  std::vector<Vec2> v = poly.vertices();
  for (Vec2& p : v) p = p * t;
  return ConvexPolygon::from_vertices(std::move(v));
}

ConvexPolygon translate(const ConvexPolygon& poly, Vec2 shift) {
  std::vector<Vec2> v = poly.vertices();
  for (Vec2& p : v) p += shift;
  return ConvexPolygon::from_vertices(std::move(v));
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

// Platform-independent uniform double in [0, 1).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ConvexPolygon random_convex_polygon(std::uint64_t seed, int n, SamplerMode mode) {
  if (n < 3) throw std::invalid_argument("random polygon needs n >= 3");
  std::mt19937_64 rng(seed);
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    if (mode == SamplerMode::kHullOfUniform) {
      for (int i = 0; i < n; ++i) {
        const double r = std::sqrt(uniform01(rng));
        const double phi = 2.0 * kPi * uniform01(rng);
        pts.push_back({r * std::cos(phi), r * std::sin(phi)});
      }
      if (auto poly = cleaned_polygon(convex_hull(std::move(pts)))) return *poly;
    } else {
      // Vertices are drawn in order; a draw that breaks the turn at the
      // previous vertex (or at the closing vertices) is redrawn.
      auto turn = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - b); };
      auto draw = [&](int k) {
        const double rho = 1.0 + 0.3 * (2.0 * uniform01(rng) - 1.0);
        const double phi = 2.0 * kPi * k / n;
        return Vec2{rho * std::cos(phi), rho * std::sin(phi)};
      };
      const double min_turn = 1e-6;
      bool ok = true;
      for (int k = 0; k < n && ok; ++k) {
        ok = false;
        for (int redraw = 0; redraw < 100 && !ok; ++redraw) {
          const Vec2 x = draw(k);
          ok = k < 2 || turn(pts[static_cast<std::size_t>(k - 2)], pts[static_cast<std::size_t>(k - 1)], x) > min_turn;
          if (ok && k == n - 1)
            ok = turn(pts[static_cast<std::size_t>(k - 1)], x, pts[0]) > min_turn &&
                 turn(x, pts[0], pts[1]) > min_turn;
          if (ok) pts.push_back(x);
        }
      }
      if (ok) {
        try {
          return ConvexPolygon::from_vertices(std::move(pts));
        } catch (const InvalidPolygon&) {
        }
      }
    }
  }
  throw SamplingError("no convex polygon after " + std::to_string(kMaxAttempts) +
                      " attempts (seed " + std::to_string(seed) + ")");
}

// ---------------------------------------------------------------------------

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

ConvexPolygon materialize(const ShapeSpec& spec) {
  return std::visit(
      [](const auto& s) -> ConvexPolygon {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PolygonShape>) {
          return ConvexPolygon::from_vertices(s.vertices);
        } else if constexpr (std::is_same_v<T, RectangleShape>) {
          require_positive(s.length, "rectangle length L");
          require_positive(s.half_width, "rectangle half-width R");
          const double w = 2.0 * s.half_width;
          return ConvexPolygon::from_vertices({{0, 0}, {s.length, 0}, {s.length, w}, {0, w}});
        } else if constexpr (std::is_same_v<T, RegularNgonShape>) {
          if (s.n < 3) throw std::invalid_argument("regular polygon needs n >= 3");
          require_positive(s.circumradius, "circumradius");
          std::vector<Vec2> v;
          for (int k = 0; k < s.n; ++k) {
            const double phi = 2.0 * kPi * k / s.n;
            v.push_back({s.circumradius * std::cos(phi), s.circumradius * std::sin(phi)});
          }
          return ConvexPolygon::from_vertices(std::move(v));
        } else if constexpr (std::is_same_v<T, EllipsePolygonShape>) {
          if (s.n < 3) throw std::invalid_argument("ellipse polygon needs n >= 3");
          require_positive(s.a, "ellipse semi-axis a");
          require_positive(s.b, "ellipse semi-axis b");
          std::vector<Vec2> v;
          for (int k = 0; k < s.n; ++k) {
            const double phi = 2.0 * kPi * k / s.n;
            v.push_back({s.a * std::cos(phi), s.b * std::sin(phi)});
          }
          return ConvexPolygon::from_vertices(std::move(v));
        } else {
          std::vector<Vec2> v{s.p0, s.p1, s.p2};
          if (cross(v[1] - v[0], v[2] - v[0]) < 0.0) std::swap(v[1], v[2]);
          return ConvexPolygon::from_vertices(std::move(v));
        }
      },
      spec);
}

std::string shape_kind(const ShapeSpec& spec) {
  static const char* names[] = {"polygon", "rectangle", "regular_ngon", "ellipse_polygon",
                                "triangle"};
  return names[spec.index()];
}

ConvexPolygon unit_square() { return ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

ConvexPolygon equilateral_triangle(double r) {
  require_positive(r, "inradius");
  std::vector<Vec2> v;
  for (int k = 0; k < 3; ++k) {
    const double phi = kPi / 2.0 + 2.0 * kPi * k / 3.0;
    v.push_back({2.0 * r * std::cos(phi), 2.0 * r * std::sin(phi)});
  }
  return ConvexPolygon::from_vertices(std::move(v));
}

}  // namespace ptorsion
