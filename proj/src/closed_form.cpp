#include "ptorsion/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ptorsion {

namespace {

constexpr double kPi = std::numbers::pi;

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
}

void require_dimension(int D) {
  if (D < 1) throw std::invalid_argument("dimension must be at least 1");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double hp_prefactor(double p) {
  require_p(p);
  return std::exp((p - 1.0) * std::log((2.0 * p - 1.0) / (p - 1.0)));
}

double unit_ball_volume(int D) {
  require_dimension(D);
  double v = (D % 2 == 1) ? 2.0 : kPi;
  for (int d = (D % 2 == 1) ? 3 : 4; d <= D; d += 2) v *= 2.0 * kPi / d;
  return v;
}

double ball_normalized_rigidity(double p, int D, double R) {
  require_p(p);
  require_dimension(D);
  require_positive(R, "radius");
  return D * std::exp((p - 1.0) * std::log(D + p / (p - 1.0)) - p * std::log(R));
}

double ball_rigidity(double p, int D, double R) {
  const double T = ball_normalized_rigidity(p, D, R);
  return unit_ball_volume(D) * std::pow(R, D) * std::exp(-std::log(T) / (p - 1.0));
}

double ball_torsion_value(double r, double p, int D, double R) {
  require_p(p);
  require_dimension(D);
  require_positive(R, "radius");
  if (r < 0.0 || r > R) throw std::invalid_argument("point lies outside the ball");
  const double q = p / (p - 1.0);
  return D * (p - 1.0) / p * (std::pow(R / D, q) - std::pow(r / D, q));
}

double ball_q_power(double p, int D) {
  require_p(p);
  require_dimension(D);
  const double q = p / (p - 1.0);
  return D * std::exp((p - 1.0) * std::log((D + q) / (1.0 + q)));
}

EllipseRigidity ellipse_rigidity_p2(double a, double b) {
  require_positive(a, "semi-axis a");
  require_positive(b, "semi-axis b");
  if (a < b) throw std::invalid_argument("ellipse requires a >= b");
  EllipseRigidity out;
  out.T2 = kPi * a * a * a * b * b * b / (4.0 * (a * a + b * b));
  const double k = a / b;
  out.Q2 = 2.0 / std::sqrt(3.0) * std::sqrt(1.0 + 1.0 / (k * k));
  out.inradius = b;
  return out;
}

double ellipse_perimeter(double a, double b) {
  require_positive(a, "semi-axis a");
  require_positive(b, "semi-axis b");
  const int n = 4096;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    s += std::hypot(a * std::sin(t), b * std::cos(t));
  }
  return 2.0 * kPi * s / n;
}

GammaBound family_gamma_bounds(GammaFamily family, double kappa, int D) {
  switch (family) {
    case GammaFamily::kRectangle:
      if (!(kappa >= 2.0) || !std::isfinite(kappa)) throw std::invalid_argument("rectangles need kappa >= 2");
      return {kappa / (kappa + 2.0), false};
    case GammaFamily::kOrthotope:
      if (!(kappa >= 2.0) || !std::isfinite(kappa)) throw std::invalid_argument("orthotopes need kappa >= 2");
      if (D < 2) throw std::invalid_argument("orthotopes need D >= 2");
      return {kappa / (kappa + 2.0 * (D - 1)), false};
    case GammaFamily::kEllipseP2:
      if (!(kappa >= 1.0)) throw std::invalid_argument("ellipses need kappa >= 1");
      return {std::sqrt(0.5 * (1.0 + 1.0 / (kappa * kappa))), true};
    case GammaFamily::kTriangle:
      return {0.5, false};
  }
  throw std::invalid_argument("unknown family");
}

CorridorEndpoints corridor_endpoints(double p, int D, double R, double P, double area,
                                     double delta) {
  require_p(p);
  require_dimension(D);
  require_positive(R, "inradius");
  require_positive(P, "perimeter");
  require_positive(area, "area");
  require_positive(delta, "average distance");
  const double c = hp_prefactor(p);
  CorridorEndpoints e;
  e.hp_lower = c * std::pow(R, -p);
  e.buser_upper = c * std::pow(P / area, p);
  e.buser_inradius_upper = c * std::pow(D / R, p);
  e.delta_lower = c * std::pow((D + 1) * delta, -p);
  e.delta_upper = c * std::pow(D / (2.0 * delta), p);
  e.geo_corridor_upper = R * P / area;
  return e;
}

void validate(const AnalyticShape& shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AnalyticBall>) {
          require_dimension(s.D);
          require_positive(s.R, "radius");
        } else if constexpr (std::is_same_v<T, AnalyticOrthotope>) {
          if (s.sides.empty()) throw std::invalid_argument("orthotope needs side lengths");
          for (double l : s.sides) require_positive(l, "side length");
        } else if constexpr (std::is_same_v<T, AnalyticEllipse>) {
          require_positive(s.a, "semi-axis a");
          require_positive(s.b, "semi-axis b");
          if (s.a < s.b) throw std::invalid_argument("ellipse requires a >= b");
        } else {
          require_positive(s.R, "inradius");
          require_positive(s.P, "perimeter");
          require_positive(s.area, "area");
          if (std::abs(s.area - s.R * s.P / 2.0) > 1e-12 * s.area)
            throw std::invalid_argument("triangle measures violate |T| = R P / 2");
        }
      },
      shape);
}

double geo_corridor_upper(const AnalyticShape& shape) {
  validate(shape);
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AnalyticBall>) {
          return static_cast<double>(s.D);
        } else if constexpr (std::is_same_v<T, AnalyticOrthotope>) {
          const double lmin = *std::min_element(s.sides.begin(), s.sides.end());
          double sum = 0.0;
          for (double l : s.sides) sum += lmin / l;
          return sum;
        } else if constexpr (std::is_same_v<T, AnalyticEllipse>) {
          return s.b * ellipse_perimeter(s.a, s.b) / (kPi * s.a * s.b);
        } else {
          return s.R * s.P / s.area;
        }
      },
      shape);
}

}  // namespace ptorsion
