#pragma once
// Independent reference computations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hullkit/lp.hpp"
#include "hullkit/polytope.hpp"

namespace oracle {

using hullkit::Matrix;
using hullkit::Vector;

inline double uniform01(std::mt19937_64& rng) { return hullkit::uniform01(rng); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * hullkit::uniform01(rng); }

// Uniform on the simplex via normalized exponentials.
inline Vector random_simplex_point(std::mt19937_64& rng, std::size_t m) {
  Vector a(m);
  double s = 0.0;
  for (auto& x : a) {
    x = -std::log(1.0 - hullkit::uniform01(rng));
    s += x;
  }
  for (auto& x : a) x /= s;
  return a;
}

// Plain Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<Vector> solve_dense(std::vector<std::vector<double>> a, Vector b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) < 1e-10) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

struct BasisResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
};

// Minimum of cost.x over all feasible basic solutions of {Ax = b, x >= 0}
// (A of full row rank). Exact for bounded problems.
inline BasisResult basis_enumeration(const hullkit::LpProblem& p) {
  const std::size_t m = p.num_rows(), n = p.num_vars();
  BasisResult best;
  if (m > n) return best;
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    std::vector<std::vector<double>> b(m, std::vector<double>(m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) b[r][c] = p.eq_matrix(r, idx[c]);
    }
    if (auto xb = solve_dense(b, p.eq_rhs)) {
      bool ok = true;
      for (double v : *xb) ok = ok && v >= -1e-9;
      if (ok) {
        double obj = 0.0;
        for (std::size_t c = 0; c < m; ++c) obj += p.cost[idx[c]] * (*xb)[c];
        best.feasible = true;
        best.objective = std::min(best.objective, obj);
      }
    }
    // next m-combination of n
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

// Exact minimizer of ||alpha - y||^2 over the simplex mesh {k/steps : sum k = steps},
// by dynamic programming over the separable objective.
inline Vector grid_simplex_projection(std::span<const double> y, int steps) {
  const std::size_t m = y.size();
  const double h = 1.0 / steps;
  const double inf = std::numeric_limits<double>::infinity();
  // cost[i][s]: best value using coordinates i.. with s units remaining.
  std::vector<std::vector<double>> cost(m + 1, std::vector<double>(steps + 1, inf));
  std::vector<std::vector<int>> choice(m, std::vector<int>(steps + 1, 0));
  cost[m][0] = 0.0;
  for (std::size_t i = m; i-- > 0;) {
    for (int s = 0; s <= steps; ++s) {
      double best = inf;
      int arg = 0;
      for (int k = 0; k <= s; ++k) {
        const double d = k * h - y[i];
        const double v = d * d + cost[i + 1][s - k];
        if (v < best) {
          best = v;
          arg = k;
        }
      }
      cost[i][s] = best;
      choice[i][s] = arg;
    }
  }
  Vector a(m);
  int s = steps;
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = choice[i][s] * h;
    s -= choice[i][s];
  }
  return a;
}

// Smallest distance from target to {sum alpha_i v_i} over the simplex mesh; a
// brute-force witness that target is (or is not) a convex combination.
inline double grid_hull_distance(const std::vector<Vector>& v, std::span<const double> target, int steps) {
  const std::size_t m = v.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> k(m, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == m) {
      k[i] = left;
      double d2 = 0.0;
      for (std::size_t j = 0; j < target.size(); ++j) {
        double x = 0.0;
        for (std::size_t r = 0; r < m; ++r) x += static_cast<double>(k[r]) / steps * v[r][j];
        d2 += (x - target[j]) * (x - target[j]);
      }
      best = std::min(best, std::sqrt(d2));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      k[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, steps);
  return best;
}

// Central differences with a fixed step.
inline Vector central_difference(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                                 double h = 1e-6) {
  Vector xp(x.begin(), x.end());
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = xp[i];
    xp[i] = x0 + h;
    const double fp = f(xp);
    xp[i] = x0 - h;
    const double fm = f(xp);
    xp[i] = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Minimum of a linear function over a point set (a linear objective attains its
// minimum over conv(V) at one of the points).
inline double vertex_scan(const std::vector<Vector>& v, std::span<const double> c) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : v) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * p[j];
    best = std::min(best, s);
  }
  return best;
}

// Random standard-form LP. Row 0 has strictly positive entries, so the feasible
// set is bounded. With feasible_by_construction the rhs is A x0 for some x0 >= 0.
inline hullkit::LpProblem random_lp(std::mt19937_64& rng, std::size_t m, std::size_t n, bool feasible_by_construction) {
  hullkit::LpProblem p;
  p.eq_matrix = Matrix(m, n);
  for (std::size_t j = 0; j < n; ++j) p.eq_matrix(0, j) = uniform(rng, 0.5, 1.5);
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.eq_matrix(i, j) = uniform(rng, -1.0, 1.0);
  }
  p.eq_rhs.resize(m);
  if (feasible_by_construction) {
    Vector x0(n);
    for (auto& x : x0) x = uniform01(rng) < 0.5 ? 0.0 : uniform(rng, 0.0, 2.0);
    x0[0] += 0.1;
    p.eq_rhs = p.eq_matrix.multiply(x0);
  } else {
    p.eq_rhs[0] = uniform(rng, 0.5, 3.0);
    for (std::size_t i = 1; i < m; ++i) p.eq_rhs[i] = uniform(rng, -3.0, 3.0);
  }
  p.cost.resize(n);
  for (auto& c : p.cost) c = uniform(rng, -1.0, 1.0);
  return p;
}

}  // namespace oracle
