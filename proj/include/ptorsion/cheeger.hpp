#pragma once

#include <vector>

#include "ptorsion/geometry.hpp"
#include "ptorsion/solver.hpp"

namespace ptorsion {

struct CheegerResult {
  double h = 0.0;
  double r_star = 0.0;
  ConvexPolygon cheeger_core;  ///< the inner parallel body at r_star
  double residual = 0.0;       ///< |area(core) - pi r_star^2|
  int iterations = 0;
};

/// Cheeger constant of a convex polygon: h = 1/r* with r* the root of
/// area(erode(poly, r)) = pi r^2 on (0, inradius), found by bisection.
CheegerResult cheeger_constant(const ConvexPolygon& poly);

struct PToOneRow {
  double p = 0.0;
  double T_norm = 0.0;
  double deviation = 0.0;  ///< |T_norm - h|
  double error_estimate = 0.0;
};

struct PToOneTrend {
  double h = 0.0;
  double inradius = 0.0;
  double Q1 = 0.0;  ///< inradius * h
  std::vector<PToOneRow> rows;
  bool strictly_decreasing = false;
};

/// Smallest exponent accepted by the p -> 1 study.
inline constexpr double kPToOneFloor = 1.05;

/// Normalized rigidity against h along a decreasing list of exponents
/// (all >= kPToOneFloor).
PToOneTrend p_to_one_trend(const ConvexPolygon& poly, const std::vector<double>& p_list,
                           int levels = 5, const SolverOptions& opts = {});

}  // namespace ptorsion
