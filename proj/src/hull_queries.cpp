#include "hullkit/hull_queries.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace hullkit {

Weights::Weights(Vector alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw DimensionError("Weights: empty");
  double sum = 0.0;
  for (double a : alpha_) {
    if (!std::isfinite(a) || a < -kGeomEps) throw DimensionError("Weights: entries must be >= 0");
    sum += a;
  }
  if (std::abs(sum - 1.0) > kGeomEps) throw DimensionError("Weights: entries must sum to 1");
}

Weights Weights::barycenter(std::size_t m) {
  if (m == 0) throw DimensionError("Weights::barycenter: m must be positive");
  return Weights(Vector(m, 1.0 / static_cast<double>(m)));
}

Vector Weights::combine(const VRep& v) const {
  if (v.size() != alpha_.size()) throw DimensionError("Weights::combine: size mismatch");
  Vector x(v.dim(), 0.0);
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    const double a = alpha_[i];
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += a * v[i][j];
  }
  return x;
}

namespace {

// Rows: the n coordinates of sum alpha_i v_i == target, then sum alpha_i == 1.
// skip excludes one point (the extreme-point test).
LpProblem combination_lp(const VRep& v, std::span<const double> target, std::optional<std::size_t> skip) {
  const std::size_t n = v.dim();
  const std::size_t cols = v.size() - (skip ? 1 : 0);
  std::vector<double> data((n + 1) * cols);
  std::size_t c = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (skip && *skip == i) continue;
    for (std::size_t r = 0; r < n; ++r) data[r * cols + c] = v[i][r];
    data[n * cols + c] = 1.0;
    ++c;
  }
  Vector rhs(target.begin(), target.end());
  rhs.push_back(1.0);
  return LpProblem{Vector(cols, 0.0), Matrix(n + 1, cols, std::move(data)), std::move(rhs)};
}

}  // namespace

MembershipResult contains(const VRep& v, std::span<const double> query, const LpOptions& opts) {
  if (query.size() != v.dim()) throw DimensionError("contains: query dimension mismatch");
  if (!all_finite(query)) throw DimensionError("contains: non-finite query");
  const auto out = lp_solve(combination_lp(v, query, std::nullopt), opts);

  MembershipResult res;
  if (out.status == LpStatus::Optimal) {
    res.inside = true;
    Vector alpha = out.solution;
    // Roundoff can leave the sum a few ulps off 1; the equality row bounds it well inside 1e-9.
    res.weights.emplace(std::move(alpha));
    return res;
  }
  // Farkas y = (u, u0): u.v_i + u0 >= 0 for all i and u.q + u0 < 0, so -u separates.
  const std::size_t n = v.dim();
  Hyperplane h;
  h.normal.assign(out.farkas.begin(), out.farkas.begin() + static_cast<std::ptrdiff_t>(n));
  for (auto& c : h.normal) c = -c;
  const double len = norm2(h.normal);
  if (len == 0.0) throw Error("contains: degenerate infeasibility certificate");
  for (auto& c : h.normal) c /= len;
  h.offset = dot(h.normal, v[0]);
  for (const auto& p : v.points()) h.offset = std::max(h.offset, dot(h.normal, p));
  res.inside = false;
  res.separator = std::move(h);
  return res;
}

bool is_extreme(const VRep& v, std::size_t k) {
  if (k >= v.size()) throw IndexError("is_extreme: index " + std::to_string(k) + " out of range");
  if (v.size() == 1) return true;
  const auto out = lp_solve(combination_lp(v, v[k], k));
  return out.status == LpStatus::Infeasible;
}

std::vector<std::size_t> extreme_indices(const VRep& v, unsigned threads) {
  const std::size_t m = v.size();
  std::vector<char> flag(m, 0);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m)));
  if (threads == 1) {
    for (std::size_t k = 0; k < m; ++k) flag[k] = is_extreme(v, k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < m; k = next++) flag[k] = is_extreme(v, k);
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < m; ++k) {
    if (flag[k]) idx.push_back(k);
  }
  return idx;
}

VRep extreme_points(const VRep& v, unsigned threads) {
  std::vector<Vector> pts;
  for (std::size_t k : extreme_indices(v, threads)) pts.push_back(v[k]);
  return VRep(v.dim(), std::move(pts));
}

}  // namespace hullkit
