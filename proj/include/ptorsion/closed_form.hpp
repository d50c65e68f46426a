#pragma once

#include <variant>
#include <vector>

namespace ptorsion {

/// ((2p-1)/(p-1))^{p-1}, evaluated as exp((p-1) log(...)); tends to 1 as p -> 1.
double hp_prefactor(double p);

/// Volume of the unit ball in R^D.
double unit_ball_volume(int D);

/// Normalized rigidity of the ball: D (D + p/(p-1))^{p-1} / R^p.
double ball_normalized_rigidity(double p, int D, double R);

/// Rigidity T_p of the ball, |B| * T(p;B)^{-1/(p-1)}.
double ball_rigidity(double p, int D, double R);

/// Torsion function of the ball at distance r from the center.
double ball_torsion_value(double r, double p, int D, double R);

/// Q_p(ball)^p = D ((D + p') / (1 + p'))^{p-1}; independent of R.
double ball_q_power(double p, int D);

struct EllipseRigidity {
  double T2 = 0.0;
  double Q2 = 0.0;
  double inradius = 0.0;
};

/// Requires a >= b > 0.
EllipseRigidity ellipse_rigidity_p2(double a, double b);

/// Perimeter of the ellipse (trapezoidal rule, spectrally accurate).
double ellipse_perimeter(double a, double b);

enum class GammaFamily { kRectangle, kOrthotope, kEllipseP2, kTriangle };

struct GammaBound {
  double value = 0.0;
  bool exact = false;  ///< true for the ellipse value, false for lower bounds
};

/// kappa >= 2 for rectangles and orthotopes, kappa >= 1 (may be +inf) for
/// ellipses; ignored for triangles. D is used by orthotopes only.
GammaBound family_gamma_bounds(GammaFamily family, double kappa = 2.0, int D = 2);

struct CorridorEndpoints {
  double hp_lower = 0.0;
  double buser_upper = 0.0;
  double buser_inradius_upper = 0.0;
  double delta_lower = 0.0;
  double delta_upper = 0.0;
  double geo_corridor_upper = 0.0;
};

CorridorEndpoints corridor_endpoints(double p, int D, double R, double P, double area,
                                     double delta);

// Analytic shapes described by their measures.

struct AnalyticBall {
  int D = 2;
  double R = 1.0;
};
struct AnalyticOrthotope {
  std::vector<double> sides;
};
struct AnalyticEllipse {
  double a = 1.0;
  double b = 1.0;
};
struct AnalyticTriangle {
  double R = 0.0;
  double P = 0.0;
  double area = 0.0;
};

using AnalyticShape = std::variant<AnalyticBall, AnalyticOrthotope, AnalyticEllipse, AnalyticTriangle>;

/// Throws std::invalid_argument when the parameters violate the shape's invariants.
void validate(const AnalyticShape& shape);

/// R * P / |Omega| for the shape.
double geo_corridor_upper(const AnalyticShape& shape);

}  // namespace ptorsion
