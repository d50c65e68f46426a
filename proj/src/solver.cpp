#include "ptorsion/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace ptorsion {

void SolverOptions::validate() const {
  if (!(tol_energy > 0.0) || !(tol_intermediate > 0.0))
    throw std::invalid_argument("solver tolerances must be positive");
  if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
  if (epsilon_schedule.empty()) throw std::invalid_argument("epsilon schedule is empty");
  for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
    if (!(epsilon_schedule[i] > 0.0))
      throw std::invalid_argument("epsilon schedule entries must be positive");
    if (i > 0 && !(epsilon_schedule[i] < epsilon_schedule[i - 1]))
      throw std::invalid_argument("epsilon schedule must be strictly decreasing");
  }
  if (!(p_max_supported > 1.0)) throw std::invalid_argument("p_max_supported must exceed 1");
}

double integrate_p1(const Mesh& mesh, const std::vector<double>& values) {
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    s += triangle_area(mesh, t) *
         (values[static_cast<std::size_t>(tri[0])] + values[static_cast<std::size_t>(tri[1])] +
          values[static_cast<std::size_t>(tri[2])]) /
         3.0;
  }
  return s;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

constexpr double kRelativeWeightFloor = 1e-10;

struct Element {
  std::array<int, 3> dof;  // free index or -1
  std::array<Vec2, 3> grad;
  double area;
};

// Fixed P1 data of one mesh: element gradients, the free-node numbering, the
// load vector and the stiffness sparsity pattern with per-element slots.
class Discretization {
 public:
  explicit Discretization(const Mesh& mesh) {
    const std::size_t n = mesh.nodes.size();
    free_of_node_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i)
      if (!mesh.boundary_mask[i]) {
        free_of_node_[i] = static_cast<int>(node_of_free_.size());
        node_of_free_.push_back(static_cast<int>(i));
      }
    nf_ = static_cast<int>(node_of_free_.size());
    if (nf_ == 0) throw std::invalid_argument("mesh has no interior nodes");
    load_ = Vec::Zero(nf_);

    std::map<std::pair<int, int>, int> edges;
    elements_.reserve(mesh.triangles.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      Element e{};
      const Vec2 a = mesh.nodes[static_cast<std::size_t>(tri[0])];
      const Vec2 b = mesh.nodes[static_cast<std::size_t>(tri[1])];
      const Vec2 c = mesh.nodes[static_cast<std::size_t>(tri[2])];
      const double twice = cross(b - a, c - a);
      e.area = 0.5 * twice;
      const std::array<Vec2, 3> opp = {c - b, a - c, b - a};
      for (int k = 0; k < 3; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        e.grad[kk] = Vec2{-opp[kk].y, opp[kk].x} / twice;
        e.dof[kk] = free_of_node_[static_cast<std::size_t>(tri[kk])];
        if (e.dof[kk] >= 0) load_[e.dof[kk]] += e.area / 3.0;
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (e.dof[static_cast<std::size_t>(i)] >= 0 && e.dof[static_cast<std::size_t>(j)] >= 0)
            trip.emplace_back(e.dof[static_cast<std::size_t>(i)], e.dof[static_cast<std::size_t>(j)], 1.0);
      elements_.push_back(e);
      for (int k = 0; k < 3; ++k) {
        const int u = tri[static_cast<std::size_t>(k)], v = tri[static_cast<std::size_t>((k + 1) % 3)];
        ++edges[{std::min(u, v), std::max(u, v)}];
      }
    }
    for (const auto& [e, count] : edges)
      if (count == 1)
        boundary_length_ += distance(mesh.nodes[static_cast<std::size_t>(e.first)],
                                     mesh.nodes[static_cast<std::size_t>(e.second)]);
    for (const Element& e : elements_) area_ += e.area;

    matrix_.resize(nf_, nf_);
    matrix_.setFromTriplets(trip.begin(), trip.end());
    matrix_.makeCompressed();
    slots_.resize(elements_.size());
    for (std::size_t t = 0; t < elements_.size(); ++t)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int r = elements_[t].dof[static_cast<std::size_t>(i)];
          const int c = elements_[t].dof[static_cast<std::size_t>(j)];
          int slot = -1;
          if (r >= 0 && c >= 0) {
            const int* begin = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[c];
            const int* end = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[c + 1];
            slot = static_cast<int>(std::lower_bound(begin, end, r) - matrix_.innerIndexPtr());
          }
          slots_[t][static_cast<std::size_t>(3 * i + j)] = slot;
        }
    solver_.analyzePattern(matrix_);
  }

  int free_count() const { return nf_; }
  double area() const { return area_; }
  double boundary_length() const { return boundary_length_; }
  const Vec& load() const { return load_; }

  Vec2 gradient(const Element& e, const Vec& v) const {
    Vec2 g;
    for (int k = 0; k < 3; ++k)
      if (e.dof[static_cast<std::size_t>(k)] >= 0)
        g += e.grad[static_cast<std::size_t>(k)] * v[e.dof[static_cast<std::size_t>(k)]];
    return g;
  }

  double energy(const Vec& v, double p, double eps, double f) const {
    double s = 0.0;
    for (const Element& e : elements_) {
      const Vec2 g = gradient(e, v);
      s += e.area * std::pow(dot(g, g) + eps * eps, 0.5 * p);
    }
    return s / p - f * load_.dot(v);
  }

  // Energy gradient and, depending on `newton`, either the Hessian or the
  // lagged-diffusivity stiffness, assembled into the shared pattern.
  void assemble(const Vec& v, double p, double eps, double f, bool newton, Vec& grad_out) {
    std::fill(matrix_.valuePtr(), matrix_.valuePtr() + matrix_.nonZeros(), 0.0);
    grad_out = -f * load_;
    double* values = matrix_.valuePtr();
    weights_.resize(elements_.size());
    double w_max = 0.0;
    for (std::size_t t = 0; t < elements_.size(); ++t) {
      const Vec2 g = gradient(elements_[t], v);
      weights_[t] = std::pow(dot(g, g) + eps * eps, 0.5 * (p - 2.0));
      w_max = std::max(w_max, weights_[t]);
    }
    // Flat regions of the iterate make the matrix singular for large p; the
    // floor only enters the matrix, never the gradient.
    const double w_floor = kRelativeWeightFloor * w_max;
    for (std::size_t t = 0; t < elements_.size(); ++t) {
      const Element& e = elements_[t];
      const Vec2 g = gradient(e, v);
      const double s = dot(g, g) + eps * eps;
      const double w_true = weights_[t];
      const double w = std::max(w_true, w_floor);
      const double c = newton ? (p - 2.0) * w_true / s : 0.0;
      for (int i = 0; i < 3; ++i) {
        const int r = e.dof[static_cast<std::size_t>(i)];
        if (r < 0) continue;
        const Vec2 gi = e.grad[static_cast<std::size_t>(i)];
        grad_out[r] += e.area * w_true * dot(g, gi);
        for (int j = 0; j < 3; ++j) {
          const int slot = slots_[t][static_cast<std::size_t>(3 * i + j)];
          if (slot < 0) continue;
          const Vec2 gj = e.grad[static_cast<std::size_t>(j)];
          values[slot] += e.area * (w * dot(gi, gj) + c * dot(g, gi) * dot(g, gj));
        }
      }
    }
  }

  void assemble_laplacian() {
    std::fill(matrix_.valuePtr(), matrix_.valuePtr() + matrix_.nonZeros(), 0.0);
    double* values = matrix_.valuePtr();
    for (std::size_t t = 0; t < elements_.size(); ++t) {
      const Element& e = elements_[t];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int slot = slots_[t][static_cast<std::size_t>(3 * i + j)];
          if (slot >= 0)
            values[slot] += e.area * dot(e.grad[static_cast<std::size_t>(i)], e.grad[static_cast<std::size_t>(j)]);
        }
    }
  }

  bool solve(const Vec& rhs, Vec& out) {
    solver_.factorize(matrix_);
    if (solver_.info() != Eigen::Success) return false;
    out = solver_.solve(rhs);
    return solver_.info() == Eigen::Success && out.allFinite();
  }

  double p_energy(const Vec& v, double p) const {
    double s = 0.0;
    for (const Element& e : elements_) {
      const Vec2 g = gradient(e, v);
      s += e.area * std::pow(dot(g, g), 0.5 * p);
    }
    return s;
  }

  std::vector<double> to_nodes(const Vec& v, double factor, std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < nf_; ++k) out[static_cast<std::size_t>(node_of_free_[static_cast<std::size_t>(k)])] = factor * v[k];
    return out;
  }

  Vec from_nodes(const std::vector<double>& u) const {
    Vec v(nf_);
    for (int k = 0; k < nf_; ++k) v[k] = u[static_cast<std::size_t>(node_of_free_[static_cast<std::size_t>(k)])];
    return v;
  }

 private:
  int nf_ = 0;
  std::vector<int> free_of_node_;
  std::vector<int> node_of_free_;
  std::vector<Element> elements_;
  std::vector<std::array<int, 9>> slots_;
  Vec load_;
  double area_ = 0.0;
  double boundary_length_ = 0.0;
  SpMat matrix_;
  Eigen::SimplicialLDLT<SpMat> solver_;
  std::vector<double> weights_;
};

// Minimizer of the unregularized energy along the ray through v.
void rescale_to_ray_minimum(const Discretization& d, Vec& v, double p, double f) {
  const double a = d.p_energy(v, p);
  const double b = f * d.load().dot(v);
  if (a > 0.0 && b > 0.0) v *= std::pow(b / a, 1.0 / (p - 1.0));
}

}  // namespace

TorsionSolution solve_p_torsion(std::shared_ptr<const Mesh> mesh, double p,
                                const SolverOptions& opts, const std::vector<double>* initial) {
  opts.validate();
  if (!mesh) throw std::invalid_argument("solve_p_torsion: null mesh");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
  if (p > opts.p_max_supported)
    throw std::invalid_argument("p exceeds the supported maximum " + std::to_string(opts.p_max_supported));
  Discretization disc(*mesh);
  // The load f = P/|Omega| keeps the scaled solution's gradients of order one.
  const double f = disc.boundary_length() / disc.area();
  const double back = std::pow(f, -1.0 / (p - 1.0));  // u = back * v

  Vec v;
  if (initial != nullptr) {
    if (initial->size() != mesh->nodes.size())
      throw std::invalid_argument("initial guess has the wrong size");
    v = disc.from_nodes(*initial);
    if (!(v.maxCoeff() > 0.0)) v.resize(0);
  }
  if (v.size() == 0) {
    disc.assemble_laplacian();
    if (!disc.solve(f * disc.load(), v)) throw std::runtime_error("Poisson warm start failed");
  }
  rescale_to_ray_minimum(disc, v, p, f);

  TorsionSolution sol;
  sol.mesh = mesh;
  sol.p = p;
  const bool newton = opts.method == SolverMethod::kNewton;
  const auto level_count = static_cast<int>(opts.epsilon_schedule.size());
  int iters = 0;
  bool converged = false;
  bool budget_exhausted = false;
  Vec grad, dir, trial;
  dir.resize(disc.free_count());

  for (int level = 0; level < level_count && !budget_exhausted; ++level) {
    const double eps = opts.epsilon_schedule[static_cast<std::size_t>(level)];
    const bool final_level = level + 1 == level_count;
    const double tol = final_level ? opts.tol_energy : opts.tol_intermediate;
    double J = disc.energy(v, p, eps, f);
    sol.energy_history.push_back(J);
    sol.level_history.push_back(level);
    bool level_done = false;
    while (!level_done) {
      if (iters >= opts.max_iters) {
        budget_exhausted = true;
        break;
      }
      disc.assemble(v, p, eps, f, newton, grad);
      Vec step;
      if (!disc.solve(-grad, step)) step = -grad;
      double slope = grad.dot(step);
      if (!(slope < 0.0)) {
        step = -grad;
        slope = -grad.squaredNorm();
      }
      const double predicted = -0.5 * slope / std::max(std::abs(J), 1e-300);
      double alpha = 1.0;
      double J_new = J;
      bool accepted = false;
      for (int k = 0; k < 60; ++k) {
        trial = v + alpha * step;
        J_new = disc.energy(trial, p, eps, f);
        if (std::isfinite(J_new) && J_new <= J + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++iters;
      if (!accepted) {
        // No representable decrease: the iterate is stationary to round-off.
        level_done = true;
        if (final_level) converged = predicted < opts.tol_energy;
        break;
      }
      const double decrease = (J - J_new) / std::max(std::abs(J_new), 1e-300);
      v = trial;
      J = J_new;
      sol.energy_history.push_back(J);
      sol.level_history.push_back(level);
      if (decrease < tol && (alpha == 1.0 || predicted < tol)) {
        level_done = true;
        if (final_level) converged = true;
      }
    }
  }

  sol.iterations = iters;
  sol.converged = converged;
  sol.u = disc.to_nodes(v, back, mesh->nodes.size());
  const double integral_v = disc.load().dot(v);
  sol.T_p = back * integral_v;
  sol.T_norm = std::exp((p - 1.0) * std::log(disc.area()) + std::log(f) +
                        (1.0 - p) * std::log(integral_v));
  sol.energy = std::pow(f, -p / (p - 1.0)) * (disc.p_energy(v, p) / p - f * integral_v);
  if (!converged) {
    throw SolverError("p-torsion solve did not converge within " + std::to_string(opts.max_iters) +
                          " iterations (p = " + std::to_string(p) + ")",
                      std::move(sol));
  }
  return sol;
}

double default_base_h(const ConvexPolygon& poly) { return 0.5 * inradius(poly).radius; }

RefinedRigidity rigidity_with_refinement(const ConvexPolygon& poly, double p, int levels,
                                         double base_h, const SolverOptions& opts,
                                         MeshStrategy strategy) {
  if (levels < 2) throw std::invalid_argument("rigidity_with_refinement needs levels >= 2");
  if (base_h <= 0.0) base_h = default_base_h(poly);
  RefinedRigidity out;
  auto mesh = std::make_shared<const Mesh>(triangulate(poly, base_h, strategy));
  std::vector<double> warm;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = std::make_shared<const Mesh>(refine_uniform(*mesh));
    const std::vector<double> guess = level > 0 ? prolongate(*mesh, warm) : std::vector<double>{};
    TorsionSolution sol = solve_p_torsion(mesh, p, opts, level > 0 ? &guess : nullptr);
    out.level_T_p.push_back(sol.T_p);
    out.level_h.push_back(mesh->h_max);
    out.level_nodes.push_back(mesh->node_count());
    out.total_iterations += sol.iterations;
    warm = sol.u;
    out.finest = std::move(sol);
  }
  const auto& T = out.level_T_p;
  const std::size_t L = T.size() - 1;
  out.order = 2.0;
  if (T.size() >= 3) {
    const double d1 = T[L - 1] - T[L - 2];
    const double d2 = T[L] - T[L - 1];
    if (d1 != 0.0 && d2 != 0.0 && (d1 > 0) == (d2 > 0) && std::abs(d1) > std::abs(d2)) {
      out.order = std::clamp(std::log2(std::abs(d1) / std::abs(d2)), 1.0, 3.0);
      out.order_observed = true;
    }
  }
  const double diff = T[L] - T[L - 1];
  out.T_p = T[L] + diff / (std::pow(2.0, out.order) - 1.0);
  out.error_estimate = std::abs(diff);
  const double A = area(poly);
  out.T_norm = std::exp((p - 1.0) * std::log(A) + (1.0 - p) * std::log(out.T_p));
  return out;
}

RefinedRigidity single_level_rigidity(const ConvexPolygon& poly, double p, double h,
                                      const SolverOptions& opts, MeshStrategy strategy) {
  if (h <= 0.0) h = default_base_h(poly);
  RefinedRigidity out;
  auto mesh = std::make_shared<const Mesh>(triangulate(poly, h, strategy));
  TorsionSolution sol = solve_p_torsion(mesh, p, opts);
  out.T_p = sol.T_p;
  out.order_observed = false;
  out.level_T_p = {sol.T_p};
  out.level_h = {mesh->h_max};
  out.level_nodes = {mesh->node_count()};
  out.total_iterations = sol.iterations;
  out.finest = std::move(sol);
  out.T_norm = std::exp((p - 1.0) * std::log(area(poly)) + (1.0 - p) * std::log(out.T_p));
  return out;
}

}  // namespace ptorsion
