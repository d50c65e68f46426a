#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "ptorsion/geometry.hpp"
#include "ptorsion/mesh.hpp"

namespace ptorsion {

enum class SolverMethod {
  kNewton,              ///< exact Hessian of the regularized energy
  kLaggedDiffusivity,   ///< weighted-stiffness fixed point
};

struct SolverOptions {
  double tol_energy = 1e-10;
  int max_iters = 500;
  std::vector<double> epsilon_schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6,
                                          1e-7, 1e-8, 1e-9, 1e-10};
  double p_max_supported = 32.0;
  SolverMethod method = SolverMethod::kNewton;
  /// Stopping threshold on the intermediate regularization levels.
  double tol_intermediate = 1e-6;

  /// Throws std::invalid_argument unless tolerances are positive and the
  /// schedule is nonempty and strictly decreasing.
  void validate() const;
};

/// Discrete p-torsion function on a mesh.
struct TorsionSolution {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> u;
  double p = 2.0;
  double T_p = 0.0;     ///< integral of u
  double T_norm = 0.0;  ///< |Omega|^{p-1} T_p^{1-p}, evaluated in logarithms
  double energy = 0.0;  ///< (1/p) int |grad u|^p - int u
  int iterations = 0;
  bool converged = false;
  /// Regularized energy after each accepted step, with its level index.
  std::vector<double> energy_history;
  std::vector<int> level_history;
};

/// Carries the last iterate of a solve that did not converge.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, TorsionSolution last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const TorsionSolution& last_iterate() const { return last_; }

 private:
  TorsionSolution last_;
};

/// Minimizes (1/p) int |grad u|^p - int u over P1 functions vanishing on the
/// boundary. `initial` (values per node, any scale) replaces the default
/// Poisson warm start.
TorsionSolution solve_p_torsion(std::shared_ptr<const Mesh> mesh, double p,
                                const SolverOptions& opts = {},
                                const std::vector<double>* initial = nullptr);

struct RefinedRigidity {
  double T_p = 0.0;             ///< extrapolated
  double T_norm = 0.0;          ///< from the extrapolated T_p
  double error_estimate = 0.0;  ///< |T_L - T_{L-1}| of the two finest levels
  double order = 2.0;           ///< observed convergence order used for extrapolation
  bool order_observed = false;
  std::vector<double> level_T_p;
  std::vector<double> level_h;
  std::vector<std::size_t> level_nodes;
  int total_iterations = 0;
  TorsionSolution finest;

  /// Relative slack 3 * error / value used by verdicts.
  double relative_slack() const { return 3.0 * error_estimate / T_p; }
};

/// Default coarse mesh size: half the inradius.
double default_base_h(const ConvexPolygon& poly);

/// Solves on `levels` nested meshes (the base mesh and levels - 1 uniform
/// refinements) and Richardson-extrapolates T_p. Requires levels >= 2.
RefinedRigidity rigidity_with_refinement(const ConvexPolygon& poly, double p, int levels,
                                         double base_h = 0.0, const SolverOptions& opts = {},
                                         MeshStrategy strategy = MeshStrategy::kAuto);

/// Plain finite element value on one mesh, no extrapolation and a zero error
/// estimate.
RefinedRigidity single_level_rigidity(const ConvexPolygon& poly, double p, double h = 0.0,
                                      const SolverOptions& opts = {},
                                      MeshStrategy strategy = MeshStrategy::kAuto);

/// Exact integral of a P1 function.
double integrate_p1(const Mesh& mesh, const std::vector<double>& values);

}  // namespace ptorsion
