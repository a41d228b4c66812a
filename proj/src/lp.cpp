#include "hullkit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hullkit {

const char* to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Tableau layout: rows_ constraint rows of width cols_ = vars + rows + 1.
// Columns [0, vars) structural, [vars, vars + rows) artificial, last is rhs.
// Artificial columns stay in the tableau so B^-1 can be read off for duals,
// but they never re-enter the basis.
class Tableau {
 public:
  Tableau(const LpProblem& p, const LpOptions& opts, LpOutcome& out)
      : m_(p.num_rows()), n_(p.num_vars()), w_(n_ + m_ + 1), opts_(opts), out_(out) {
    t_.assign(m_ * w_, 0.0);
    sign_.assign(m_, 1.0);
    double scale = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (p.eq_rhs[i] < 0.0) sign_[i] = -1.0;
      double* r = row(i);
      for (std::size_t j = 0; j < n_; ++j) {
        r[j] = sign_[i] * p.eq_matrix(i, j);
        scale = std::max(scale, std::abs(r[j]));
      }
      r[n_ + i] = 1.0;
      r[w_ - 1] = sign_[i] * p.eq_rhs[i];
    }
    eps_ = 1e-11 * scale;
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
    dead_.assign(m_, false);
    reduced_.assign(w_, 0.0);
    max_iter_ = opts.max_iterations ? opts.max_iterations : 50 * (m_ + n_);
  }

  // Returns the phase-1 optimum (sum of artificials).
  double phase1() {
    std::fill(reduced_.begin(), reduced_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double* r = row(i);
      for (std::size_t j = 0; j < n_; ++j) reduced_[j] -= r[j];
      reduced_[w_ - 1] -= r[w_ - 1];
    }
    run();
    return -reduced_[w_ - 1];
  }

  void phase1_farkas(Vector& y) const {
    y.resize(m_);
    // pi_i = 1 - r_art(i); certificate is -S pi.
    for (std::size_t i = 0; i < m_; ++i) y[i] = -sign_[i] * (1.0 - reduced_[n_ + i]);
  }

  // Pivots basic artificials out at zero level; rows with no usable pivot are redundant.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      const double* r = row(i);
      std::size_t best = n_;
      double best_val = eps_ * 100.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(r[j]) > best_val) {
          best_val = std::abs(r[j]);
          best = j;
        }
      }
      if (best == n_) {
        dead_[i] = true;
      } else {
        pivot(i, best);
      }
    }
  }

  // Returns false when unbounded.
  bool phase2(const Vector& cost) {
    std::fill(reduced_.begin(), reduced_.end(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) reduced_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t b = basis_[i];
      const double cb = b < n_ ? cost[b] : 0.0;
      if (cb == 0.0) continue;
      const double* r = row(i);
      for (std::size_t j = 0; j < w_; ++j) reduced_[j] -= cb * r[j];
    }
    return run();
  }

  void extract_optimal(const Vector& cost) {
    out_.solution.assign(n_, 0.0);
    out_.basis.clear();
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        out_.solution[basis_[i]] = std::max(0.0, row(i)[w_ - 1]);
        out_.basis.push_back(basis_[i]);
      }
    }
    std::sort(out_.basis.begin(), out_.basis.end());
    out_.objective = -reduced_[w_ - 1];
    (void)cost;
    out_.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) out_.duals[i] = dead_[i] ? 0.0 : -sign_[i] * reduced_[n_ + i];
  }

  void extract_basis() {
    out_.basis.clear();
    for (std::size_t b : basis_) {
      if (b < n_) out_.basis.push_back(b);
    }
    std::sort(out_.basis.begin(), out_.basis.end());
  }

 private:
  double* row(std::size_t i) { return t_.data() + i * w_; }
  const double* row(std::size_t i) const { return t_.data() + i * w_; }

  // Bland's rule: lowest-index improving column; ratio ties broken by lowest basic index.
  bool run() {
    for (;;) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (reduced_[j] < -eps_) {
          enter = j;
          break;
        }
      }
      if (enter == n_) return true;

      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (dead_[i]) continue;
        const double a = row(i)[enter];
        if (a <= eps_) continue;
        const double ratio = row(i)[w_ - 1] / a;
        if (leave == m_) {
          best_ratio = ratio;
          leave = i;
          continue;
        }
        const double tie = 1e-12 * std::max(1.0, std::abs(best_ratio));
        if (ratio < best_ratio - tie) {
          best_ratio = ratio;
          leave = i;
        } else if (ratio <= best_ratio + tie && basis_[i] < basis_[leave]) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    if (++out_.iterations > max_iter_) {
      throw IterationLimitError("simplex exceeded " + std::to_string(max_iter_) + " iterations");
    }
    if (opts_.record_pivots) out_.pivots.emplace_back(pr, pc);
    double* prow = row(pr);
    const double inv = 1.0 / prow[pc];
    for (std::size_t j = 0; j < w_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == pr) continue;
      double* r = row(i);
      const double f = r[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w_; ++j) r[j] -= f * prow[j];
      r[pc] = 0.0;
    }
    const double f = reduced_[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j < w_; ++j) reduced_[j] -= f * prow[j];
      reduced_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  std::size_t m_, n_, w_;
  const LpOptions& opts_;
  LpOutcome& out_;
  std::vector<double> t_;
  std::vector<double> reduced_;  // reduced costs; last entry holds -objective
  std::vector<double> sign_;
  std::vector<std::size_t> basis_;
  std::vector<bool> dead_;
  double eps_ = 1e-11;
  std::size_t max_iter_ = 0;
};

void validate(const LpProblem& p) {
  const std::size_t m = p.num_rows();
  const std::size_t n = p.num_vars();
  if (m == 0 || n == 0) throw DimensionError("lp_solve requires at least one row and one variable");
  if (p.cost.size() != n) throw DimensionError("lp_solve: cost has wrong length");
  if (p.eq_rhs.size() != m) throw DimensionError("lp_solve: rhs has wrong length");
  if (!all_finite(p.cost) || !all_finite(p.eq_rhs) || !all_finite(p.eq_matrix.data())) {
    throw DimensionError("lp_solve: non-finite data");
  }
}

}  // namespace

LpOutcome lp_solve(const LpProblem& p, const LpOptions& opts) {
  validate(p);
  LpOutcome out;
  Tableau tab(p, opts, out);
  const double infeasibility = tab.phase1();
  if (infeasibility > opts.feasibility_tol) {
    out.status = LpStatus::Infeasible;
    tab.phase1_farkas(out.farkas);
    tab.extract_basis();
    return out;
  }
  tab.drive_out_artificials();
  if (!tab.phase2(p.cost)) {
    out.status = LpStatus::Unbounded;
    tab.extract_basis();
    return out;
  }
  out.status = LpStatus::Optimal;
  tab.extract_optimal(p.cost);
  return out;
}

Vector StandardForm::recover(std::span<const double> x) const {
  if (x.size() != problem.num_vars()) throw DimensionError("StandardForm::recover: wrong solution length");
  Vector out(num_original);
  for (std::size_t j = 0; j < num_original; ++j) {
    out[j] = x[j];
    if (negative_part[j]) out[j] -= x[*negative_part[j]];
  }
  return out;
}

StandardForm to_standard_form(const GeneralLp& lp) {
  const std::size_t n = lp.cost.size();
  const std::size_t meq = lp.eq.empty() ? 0 : lp.eq.rows();
  const std::size_t mineq = lp.ineq.empty() ? 0 : lp.ineq.rows();
  if (meq && lp.eq.cols() != n) throw DimensionError("to_standard_form: equality matrix width");
  if (mineq && lp.ineq.cols() != n) throw DimensionError("to_standard_form: inequality matrix width");
  if (lp.eq_rhs.size() != meq) throw DimensionError("to_standard_form: equality rhs length");
  if (lp.ineq_rhs.size() != mineq) throw DimensionError("to_standard_form: inequality rhs length");
  if (!lp.bounds.empty() && lp.bounds.size() != n) throw DimensionError("to_standard_form: bounds length");

  StandardForm sf;
  sf.num_original = n;
  sf.negative_part.assign(n, std::nullopt);
  std::size_t col = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (!lp.bounds.empty() && lp.bounds[j] == VarKind::Free) sf.negative_part[j] = col++;
  }
  sf.slack_begin = col;
  sf.slack_count = mineq;
  const std::size_t total = col + mineq;
  const std::size_t rows = meq + mineq;

  Matrix a(rows, total);
  Vector b(rows);
  auto fill_row = [&](std::size_t r, std::span<const double> src) {
    for (std::size_t j = 0; j < n; ++j) {
      a(r, j) = src[j];
      if (sf.negative_part[j]) a(r, *sf.negative_part[j]) = -src[j];
    }
  };
  for (std::size_t i = 0; i < meq; ++i) {
    fill_row(i, lp.eq.row(i));
    b[i] = lp.eq_rhs[i];
  }
  for (std::size_t i = 0; i < mineq; ++i) {
    fill_row(meq + i, lp.ineq.row(i));
    a(meq + i, sf.slack_begin + i) = 1.0;
    b[meq + i] = lp.ineq_rhs[i];
  }
  Vector c(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = lp.cost[j];
    if (sf.negative_part[j]) c[*sf.negative_part[j]] = -lp.cost[j];
  }
  sf.problem = LpProblem{std::move(c), std::move(a), std::move(b)};
  return sf;
}

}  // namespace hullkit
