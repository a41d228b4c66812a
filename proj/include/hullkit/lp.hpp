#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hullkit/numeric.hpp"

namespace hullkit {

// min cost^T x  s.t.  eq_matrix x == eq_rhs,  x >= 0
struct LpProblem {
  Vector cost;
  Matrix eq_matrix;
  Vector eq_rhs;

  std::size_t num_rows() const noexcept { return eq_matrix.rows(); }
  std::size_t num_vars() const noexcept { return eq_matrix.cols(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s) noexcept;

struct LpOptions {
  // 0 selects 50 * (rows + vars).
  std::size_t max_iterations = 0;
  // Phase-1 optimum above this is reported as infeasible.
  double feasibility_tol = 1e-8;
  bool record_pivots = false;
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Vector solution;  // Optimal only
  double objective = 0.0;  // Optimal only; value carried by the phase-2 tableau
  Vector duals;  // Optimal only; multipliers y with cost - A^T y >= 0
  Vector farkas;  // Infeasible only; y^T A >= 0 and y^T b < 0
  std::vector<std::size_t> basis;  // basic structural columns at termination
  std::size_t iterations = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, column), when recorded
};

// Two-phase primal simplex on a dense tableau with Bland's rule in both phases.
LpOutcome lp_solve(const LpProblem& p, const LpOptions& opts = {});

enum class VarKind { NonNegative, Free };

// min cost^T x  s.t.  eq x == eq_rhs,  ineq x <= ineq_rhs, per-variable sign bounds.
// Empty matrices mean "no rows of that kind"; empty bounds means all NonNegative.
struct GeneralLp {
  Vector cost;
  Matrix eq;
  Vector eq_rhs;
  Matrix ineq;
  Vector ineq_rhs;
  std::vector<VarKind> bounds;
};

struct StandardForm {
  LpProblem problem;
  std::size_t num_original = 0;
  std::vector<std::optional<std::size_t>> negative_part;  // column of x^- for free variables
  std::size_t slack_begin = 0;
  std::size_t slack_count = 0;

  // Maps a standard-form solution back to the original variables.
  Vector recover(std::span<const double> x) const;
};

StandardForm to_standard_form(const GeneralLp& lp);

}  // namespace hullkit
