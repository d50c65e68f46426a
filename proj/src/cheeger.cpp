#include "ptorsion/cheeger.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ptorsion {

CheegerResult cheeger_constant(const ConvexPolygon& poly) {
  const double R = inradius(poly).radius;
  auto f = [&](double r) { return eroded_area(poly, r) - std::numbers::pi * r * r; };
  double lo = 0.0, hi = R;
  int iterations = 0;
  while (hi - lo > 1e-15 * R && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    ++iterations;
  }
  const double r = 0.5 * (lo + hi);
  auto core = erode(poly, r);
  if (!core) throw std::logic_error("Cheeger core is empty below the inradius");
  return CheegerResult{1.0 / r, r, *core, std::abs(area(*core) - std::numbers::pi * r * r),
                       iterations};
}

PToOneTrend p_to_one_trend(const ConvexPolygon& poly, const std::vector<double>& p_list,
                           int levels, const SolverOptions& opts) {
  if (p_list.empty()) throw std::invalid_argument("p list is empty");
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    if (!(p_list[i] >= kPToOneFloor))
      throw std::invalid_argument("p -> 1 study requires p >= 1.05");
    if (i > 0 && !(p_list[i] < p_list[i - 1]))
      throw std::invalid_argument("p list must be strictly decreasing");
  }
  PToOneTrend out;
  out.h = cheeger_constant(poly).h;
  out.inradius = inradius(poly).radius;
  out.Q1 = out.inradius * out.h;
  for (double p : p_list) {
    const RefinedRigidity r = rigidity_with_refinement(poly, p, levels, 0.0, opts);
    const double Tn_err = r.T_norm * (p - 1.0) * r.error_estimate / r.T_p;
    out.rows.push_back({p, r.T_norm, std::abs(r.T_norm - out.h), Tn_err});
  }
  out.strictly_decreasing = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i)
    if (!(out.rows[i].deviation < out.rows[i - 1].deviation)) out.strictly_decreasing = false;
  return out;
}

}  // namespace ptorsion
