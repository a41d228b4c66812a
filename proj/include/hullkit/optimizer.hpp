#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hullkit/hull_queries.hpp"
#include "hullkit/polytope.hpp"

namespace hullkit {

struct Objective {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> eval;
  // Optional; central differences are used when empty.
  std::function<Vector(std::span<const double>)> grad;

  bool has_grad() const noexcept { return static_cast<bool>(grad); }
};

// Feasible iff eval(x) >= 0.
struct Constraint {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> eval;
};

// Default budgets and tolerances.
struct SolveOptions {
  std::size_t max_fun_evals = 0;  // 0: 20000 for solve_vrep, 5000 for solve_hrep
  std::size_t max_iters = 500;
  double step_tol = 1e-6;
  double constraint_tol = 1e-6;
  double objective_tol = 1e-6;
  double fd_step_max = 0.1;
  double fd_step_min = 1e-8;
};

enum class VrepMethod { ProjectedGradient, FrankWolfe };

struct SolveResult {
  Vector minimizer;
  std::optional<Weights> weights;  // V-rep path
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t fun_evals = 0;
  double elapsed = 0.0;  // seconds
  bool converged = false;  // false means the budget ran out; minimizer is best-so-far
  std::vector<double> history;  // best-so-far objective after each iteration
};

// Central-difference gradient with per-coordinate step clamp(1e-6 * max(1,|x_i|), min, max).
Vector finite_difference_gradient(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                                  double step_min = 1e-8, double step_max = 0.1);

// Euclidean projection onto {alpha : alpha >= 0, sum alpha = 1}.
Weights project_to_simplex(std::span<const double> y);

// F(alpha) = f(sum_i alpha_i v_i) with the chain-rule gradient grad_i = grad f . v_i.
Objective compose_objective(const Objective& f, const VRep& v);

// Linear-minimization oracle over the simplex: index of the smallest gradient entry
// (lowest index on ties).
std::size_t frank_wolfe_vertex(std::span<const double> grad);

// Minimizes f over conv(v) subject to cons via the simplex reparameterization.
SolveResult solve_vrep(const Objective& f, const std::vector<Constraint>& cons, const VRep& v,
                       const SolveOptions& opts = {}, VrepMethod method = VrepMethod::ProjectedGradient);

// Log-barrier method over the half-spaces of h. Throws InfeasibleStart unless
// start is strictly inside h.
SolveResult solve_hrep(const Objective& f, const std::vector<Constraint>& cons, const HRep& h,
                       std::span<const double> start, const SolveOptions& opts = {});

struct ChebyshevBall {
  Vector center;
  double radius = 0.0;
};

// Largest inscribed ball, from the dual of max r s.t. a_i.x + r <= b_i.
// Throws EmptyInterior when the radius is <= 1e-9 or the polyhedron is empty/unbounded.
ChebyshevBall chebyshev_ball(const HRep& h);
Vector chebyshev_center(const HRep& h);

}  // namespace hullkit
