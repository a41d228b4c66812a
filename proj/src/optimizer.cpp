#include "hullkit/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace hullkit {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kArmijo = 1e-4;
constexpr std::size_t kPenaltyRounds = 3;
constexpr double kPenaltyStart = 10.0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Objective + quadratic penalty on violated constraints, evaluated in R^n.
class PenalizedModel {
 public:
  PenalizedModel(const Objective& f, const std::vector<Constraint>& cons, const SolveOptions& o)
      : f_(f), cons_(cons), o_(o) {}

  struct Value {
    double f = 0.0;
    double merit = 0.0;  // f + penalty
    double violation = 0.0;
  };

  double rho = kPenaltyStart;
  std::size_t evals = 0;

  Value value(std::span<const double> x) {
    Value v;
    v.f = f_.eval(x);
    ++evals;
    double pen = 0.0;
    for (const auto& c : cons_) {
      const double g = c.eval(x);
      if (g < 0.0) {
        pen += g * g;
        v.violation = std::max(v.violation, -g);
      }
    }
    v.merit = v.f + rho * pen;
    return v;
  }

  Vector grad(std::span<const double> x) {
    Vector g;
    if (f_.has_grad()) {
      g = f_.grad(x);
      ++evals;
    } else {
      g = finite_difference_gradient(f_.eval, x, o_.fd_step_min, o_.fd_step_max);
      evals += 2 * x.size();
    }
    for (const auto& c : cons_) {
      const double gv = c.eval(x);
      if (gv >= 0.0) continue;
      const Vector dg = finite_difference_gradient(c.eval, x, o_.fd_step_min, o_.fd_step_max);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += rho * 2.0 * gv * dg[i];
    }
    return g;
  }

  bool has_constraints() const noexcept { return !cons_.empty(); }

 private:
  const Objective& f_;
  const std::vector<Constraint>& cons_;
  const SolveOptions& o_;
};

// Best feasible iterate so far (by objective), falling back to least violation.
struct Incumbent {
  explicit Incumbent(double t) : tol(t) {}

  double tol;
  Vector x;
  Vector alpha;
  PenalizedModel::Value val;
  bool have = false;

  void offer(std::span<const double> xs, std::span<const double> as, const PenalizedModel::Value& v,
             std::vector<double>& history) {
    const bool feas = v.violation <= tol;
    const bool cur_feas = have && val.violation <= tol;
    bool better = !have;
    if (have) {
      if (feas && cur_feas) {
        better = v.f < val.f;
      } else if (feas != cur_feas) {
        better = feas;
      } else {
        better = v.violation < val.violation;
      }
    }
    if (better) {
      x.assign(xs.begin(), xs.end());
      alpha.assign(as.begin(), as.end());
      val = v;
      have = true;
    }
    if (val.violation <= tol) history.push_back(val.f);
  }
};

Vector combine(const VRep& v, std::span<const double> alpha) {
  Vector x(v.dim(), 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double a = alpha[i];
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += a * v[i][j];
  }
  return x;
}

Vector pullback(const VRep& v, std::span<const double> gx) {
  Vector g(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) g[i] = dot(gx, v[i]);
  return g;
}

Weights clean_weights(std::span<const double> alpha) {
  Vector a(alpha.begin(), alpha.end());
  for (auto& x : a) x = std::max(0.0, x);
  const double s = std::accumulate(a.begin(), a.end(), 0.0);
  for (auto& x : a) x /= s;
  return Weights(std::move(a));
}

}  // namespace

Vector finite_difference_gradient(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                                  double step_min, double step_max) {
  Vector xp(x.begin(), x.end());
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = std::clamp(1e-6 * std::max(1.0, std::abs(x[i])), step_min, step_max);
    const double orig = xp[i];
    xp[i] = orig + h;
    const double fp = f(xp);
    xp[i] = orig - h;
    const double fm = f(xp);
    xp[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Weights project_to_simplex(std::span<const double> y) {
  const std::size_t m = y.size();
  if (m == 0) throw DimensionError("project_to_simplex: empty input");
  if (!all_finite(y)) throw DimensionError("project_to_simplex: non-finite input");
  Vector u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  Vector a(m);
  for (std::size_t i = 0; i < m; ++i) a[i] = std::max(0.0, y[i] - theta);
  const double s = std::accumulate(a.begin(), a.end(), 0.0);
  if (std::abs(s - 1.0) >= 1e-12) {
    for (auto& x : a) x /= s;
  }
  return Weights(std::move(a));
}

Objective compose_objective(const Objective& f, const VRep& v) {
  if (f.dim != v.dim()) throw DimensionError("compose_objective: objective and hull dimensions differ");
  Objective out;
  out.dim = v.size();
  out.eval = [f, v](std::span<const double> alpha) {
    if (alpha.size() != v.size()) throw DimensionError("composed objective: wrong weight count");
    return f.eval(combine(v, alpha));
  };
  out.grad = [f, v](std::span<const double> alpha) {
    if (alpha.size() != v.size()) throw DimensionError("composed objective: wrong weight count");
    const Vector x = combine(v, alpha);
    const Vector gx = f.has_grad() ? f.grad(x) : finite_difference_gradient(f.eval, x);
    return pullback(v, gx);
  };
  return out;
}

std::size_t frank_wolfe_vertex(std::span<const double> grad) {
  if (grad.empty()) throw DimensionError("frank_wolfe_vertex: empty gradient");
  return static_cast<std::size_t>(std::min_element(grad.begin(), grad.end()) - grad.begin());
}

SolveResult solve_vrep(const Objective& f, const std::vector<Constraint>& cons, const VRep& v,
                       const SolveOptions& opts, VrepMethod method) {
  const auto t0 = Clock::now();
  if (f.dim != v.dim()) throw DimensionError("solve_vrep: objective and hull dimensions differ");
  if (v.size() < 2) throw TooFewPoints("solve_vrep: need at least two points");
  for (const auto& c : cons) {
    if (c.dim != v.dim()) throw DimensionError("solve_vrep: constraint dimension mismatch");
  }
  const std::size_t budget = opts.max_fun_evals ? opts.max_fun_evals : 20000;
  const std::size_t m = v.size();

  PenalizedModel model(f, cons, opts);
  SolveResult res;
  Incumbent best(opts.constraint_tol);
  Vector alpha(m, 1.0 / static_cast<double>(m));
  bool converged = false;
  double last_violation = 0.0;

  auto exhausted = [&] { return res.iterations >= opts.max_iters || model.evals >= budget; };
  auto merit_grad = [&](std::span<const double> a) { return pullback(v, model.grad(combine(v, a))); };

  for (std::size_t round = 0; round < kPenaltyRounds; ++round) {
    converged = false;
    Vector x = combine(v, alpha);
    auto val = model.value(x);
    best.offer(x, alpha, val, res.history);
    Vector g = merit_grad(alpha);

    if (method == VrepMethod::ProjectedGradient) {
      double step = 1.0 / std::max(1.0, norm_inf(g));
      Vector trial(m), d(m);
      while (!exhausted()) {
        // Backtracking (halving) on the projection arc with the Armijo condition.
        PenalizedModel::Value tval;
        Vector tx;
        bool accepted = false;
        for (int halvings = 0; halvings < 60 && model.evals < budget; ++halvings) {
          for (std::size_t i = 0; i < m; ++i) trial[i] = alpha[i] - step * g[i];
          const Weights w = project_to_simplex(trial);
          for (std::size_t i = 0; i < m; ++i) d[i] = w[i] - alpha[i];
          if (norm_inf(d) == 0.0) break;
          tx = combine(v, w.alpha());
          tval = model.value(tx);
          if (tval.merit <= val.merit + kArmijo * dot(g, d)) {
            trial = w.alpha();
            accepted = true;
            break;
          }
          step *= 0.5;
        }
        if (!accepted) {
          converged = model.evals < budget;  // stationary to working precision
          break;
        }
        ++res.iterations;
        const Vector gn = merit_grad(trial);
        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          ss += d[i] * d[i];
          sy += d[i] * (gn[i] - g[i]);
        }
        // Barzilai-Borwein trial step for the next iteration.
        step = sy > 1e-300 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(step * 4.0, 1e12);
        const double decrease = val.merit - tval.merit;
        alpha = trial;
        g = gn;
        val = tval;
        best.offer(tx, alpha, val, res.history);
        if (norm_inf(d) <= opts.step_tol && decrease <= opts.objective_tol) {
          converged = true;
          break;
        }
      }
    } else {
      for (std::size_t t = 0; !exhausted(); ++t) {
        const std::size_t k = frank_wolfe_vertex(g);
        const double gap = dot(g, alpha) - g[k];
        if (gap <= opts.objective_tol * std::max(1.0, std::abs(val.merit))) {
          converged = true;
          break;
        }
        const double gamma = 2.0 / (static_cast<double>(t) + 2.0);
        for (std::size_t i = 0; i < m; ++i) alpha[i] *= (1.0 - gamma);
        alpha[k] += gamma;
        ++res.iterations;
        x = combine(v, alpha);
        val = model.value(x);
        best.offer(x, alpha, val, res.history);
        g = merit_grad(alpha);
      }
    }

    // Raise the penalty only while the iterate itself still violates the constraints.
    last_violation = val.violation;
    if (!model.has_constraints() || last_violation <= opts.constraint_tol || exhausted()) break;
    model.rho *= 10.0;
  }

  res.weights = clean_weights(best.alpha);
  res.minimizer = res.weights->combine(v);
  res.objective = f.eval(res.minimizer);
  res.fun_evals = model.evals + 1;
  res.converged = converged && last_violation <= opts.constraint_tol && best.val.violation <= opts.constraint_tol;
  res.elapsed = seconds_since(t0);
  return res;
}

namespace {

class BarrierModel {
 public:
  BarrierModel(PenalizedModel& inner, const HRep& h) : inner_(inner), h_(h) {}

  double mu = 1.0;

  // +inf outside the open polytope.
  double value(std::span<const double> x, PenalizedModel::Value* pv = nullptr) {
    double bar = 0.0;
    for (const auto& hp : h_.halfspaces()) {
      const double s = hp.offset - dot(hp.normal, x);
      if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
      bar -= std::log(s);
    }
    const auto v = inner_.value(x);
    if (pv) *pv = v;
    return v.merit + mu * bar;
  }

  // Adds the barrier gradient to g and its (exact) Hessian to the row-major hess.
  void add_barrier(std::span<const double> x, Vector& g, std::vector<double>& hess) const {
    const std::size_t n = x.size();
    for (const auto& hp : h_.halfspaces()) {
      const double s = hp.offset - dot(hp.normal, x);
      const double w = mu / s;
      const double w2 = w / s;
      for (std::size_t i = 0; i < n; ++i) {
        g[i] += w * hp.normal[i];
        for (std::size_t j = 0; j < n; ++j) hess[i * n + j] += w2 * hp.normal[i] * hp.normal[j];
      }
    }
  }

 private:
  PenalizedModel& inner_;
  const HRep& h_;
};

// Damped BFGS update of a row-major Hessian approximation b.
void damped_bfgs_update(std::vector<double>& b, std::span<const double> s, Vector y) {
  const std::size_t n = s.size();
  Vector bs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) bs[i] += b[i * n + j] * s[j];
  }
  const double sbs = dot(s, bs);
  double sy = dot(s, y);
  if (sbs <= 1e-300) {
    // First curvature pair: start from a scaled identity.
    if (sy <= 1e-300) return;
    const double gamma = dot(y, y) / sy;
    for (std::size_t i = 0; i < n; ++i) b[i * n + i] = gamma;
    return;
  }
  if (sy < 0.2 * sbs) {
    const double theta = 0.8 * sbs / (sbs - sy);
    for (std::size_t i = 0; i < n; ++i) y[i] = theta * y[i] + (1.0 - theta) * bs[i];
    sy = dot(s, y);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) b[i * n + j] += y[i] * y[j] / sy - bs[i] * bs[j] / sbs;
  }
}

}  // namespace

SolveResult solve_hrep(const Objective& f, const std::vector<Constraint>& cons, const HRep& h,
                       std::span<const double> start, const SolveOptions& opts) {
  const auto t0 = Clock::now();
  const std::size_t n = h.dim();
  if (f.dim != n || start.size() != n) throw DimensionError("solve_hrep: dimension mismatch");
  for (const auto& c : cons) {
    if (c.dim != n) throw DimensionError("solve_hrep: constraint dimension mismatch");
  }
  for (const auto& hp : h.halfspaces()) {
    if (hp.offset - dot(hp.normal, start) <= kGeomEps) throw InfeasibleStart("solve_hrep: start is not strictly inside");
  }
  const std::size_t budget = opts.max_fun_evals ? opts.max_fun_evals : 5000;

  PenalizedModel model(f, cons, opts);
  BarrierModel barrier(model, h);
  SolveResult res;
  Incumbent best(opts.constraint_tol);
  Vector x(start.begin(), start.end());
  bool converged = false;
  double last_violation = 0.0;
  auto exhausted = [&] { return res.iterations >= opts.max_iters || model.evals >= budget; };

  // Curvature model of the penalized objective; the barrier Hessian is exact, so
  // steps stay well scaled inside thin wedges near degenerate vertices.
  std::vector<double> bf(n * n, 0.0);

  // Newton-type descent on the barrier subproblem for the current mu and rho.
  auto minimize_stage = [&]() -> bool {
    PenalizedModel::Value pv;
    double phi = barrier.value(x, &pv);
    best.offer(x, {}, pv, res.history);
    Vector gm = model.grad(x);
    Vector xn(n), s(n), y(n);
    while (!exhausted()) {
      Vector g = gm;
      std::vector<double> hess = bf;
      barrier.add_barrier(x, g, hess);
      Vector p;
      try {
        p = gaussian_solve(Matrix(n, n, hess), g);
        for (auto& e : p) e = -e;
      } catch (const Error&) {
        p = g;
        for (auto& e : p) e = -e;
      }
      double slope = dot(g, p);
      if (!(slope < 0.0)) {
        p = g;
        for (auto& e : p) e = -e;
        slope = dot(g, p);
        if (!(slope < 0.0)) return true;
      }
      // Half the squared Newton decrement estimates the remaining decrease.
      if (-0.5 * slope <= opts.objective_tol) return true;
      double t = 1.0;
      double phin = std::numeric_limits<double>::infinity();
      PenalizedModel::Value pvn;
      bool accepted = false;
      for (int halvings = 0; halvings < 60 && model.evals < budget; ++halvings) {
        for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * p[i];
        phin = barrier.value(xn, &pvn);
        if (phin <= phi + kArmijo * t * slope) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) return model.evals < budget;
      ++res.iterations;
      const Vector gmn = model.grad(xn);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = xn[i] - x[i];
        y[i] = gmn[i] - gm[i];
      }
      damped_bfgs_update(bf, s, y);
      x = xn;
      gm = gmn;
      phi = phin;
      best.offer(x, {}, pvn, res.history);
      if (norm_inf(s) <= 1e-3 * opts.step_tol) return true;
    }
    return false;
  };

  for (std::size_t round = 0; round < kPenaltyRounds; ++round) {
    const double mu_start = round == 0 ? 1.0 : 1e-6;
    for (double mu = mu_start; mu >= 1e-6 * 0.5 && !exhausted(); mu *= 0.1) {
      barrier.mu = mu;
      converged = minimize_stage();
    }
    last_violation = model.has_constraints() ? model.value(x).violation : 0.0;
    if (last_violation <= opts.constraint_tol || exhausted()) break;
    model.rho *= 10.0;
  }

  res.minimizer = best.x;
  res.objective = f.eval(res.minimizer);
  res.fun_evals = model.evals + 1;
  res.converged = converged && !exhausted() && last_violation <= opts.constraint_tol &&
                  best.val.violation <= opts.constraint_tol;
  res.elapsed = seconds_since(t0);
  return res;
}

ChebyshevBall chebyshev_ball(const HRep& h) {
  const std::size_t n = h.dim();
  const std::size_t k = h.size();
  // Dual: min b^T y  s.t.  A^T y == 0, 1^T y == 1, y >= 0. Its multipliers are (x, r).
  GeneralLp dual;
  dual.cost.resize(k);
  dual.eq = Matrix(n + 1, k);
  dual.eq_rhs.assign(n + 1, 0.0);
  dual.eq_rhs[n] = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    dual.cost[i] = h[i].offset;
    for (std::size_t j = 0; j < n; ++j) dual.eq(j, i) = h[i].normal[j];
    dual.eq(n, i) = 1.0;
  }
  const StandardForm sf = to_standard_form(dual);
  const LpOutcome out = lp_solve(sf.problem);
  if (out.status != LpStatus::Optimal) {
    throw EmptyInterior("chebyshev_center: polyhedron is empty or unbounded");
  }
  ChebyshevBall ball;
  ball.center.assign(out.duals.begin(), out.duals.begin() + static_cast<std::ptrdiff_t>(n));
  ball.radius = out.duals[n];
  // The duals are only as accurate as the final basis; take the radius actually achieved.
  double achieved = std::numeric_limits<double>::infinity();
  for (const auto& hp : h.halfspaces()) achieved = std::min(achieved, hp.offset - dot(hp.normal, ball.center));
  ball.radius = std::min(ball.radius, achieved);
  if (!(ball.radius > 1e-9)) throw EmptyInterior("chebyshev_center: polyhedron has empty interior");
  return ball;
}

Vector chebyshev_center(const HRep& h) { return chebyshev_ball(h).center; }

}  // namespace hullkit
