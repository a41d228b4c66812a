#include "hullkit/polytope.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace hullkit {

namespace {

constexpr double kDistinctEps = 1e-12;
constexpr double kFacetDedupEps = 1e-7;

bool near_equal(const Vector& a, const Vector& b, double eps) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > eps) return false;
  }
  return true;
}

// Indices j > i whose point duplicates an earlier one. Sorting on the first
// coordinate limits comparisons to a sliding window.
std::vector<std::size_t> duplicate_indices(const std::vector<Vector>& pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  std::vector<bool> dup(pts.size(), false);
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const std::size_t i = order[a];
      const std::size_t j = order[b];
      if (pts[j][0] - pts[i][0] > kDistinctEps) break;
      if (near_equal(pts[i], pts[j], kDistinctEps)) dup[std::max(i, j)] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dup.size(); ++i) {
    if (dup[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

VRep::VRep(std::size_t dim, std::vector<Vector> points) : dim_(dim), points_(std::move(points)) {
  if (dim_ == 0) throw DimensionError("VRep: dimension must be positive");
  if (points_.empty()) throw DimensionError("VRep: at least one point required");
  for (const auto& p : points_) {
    if (p.size() != dim_) throw DimensionError("VRep: point dimension mismatch");
    if (!all_finite(p)) throw DimensionError("VRep: non-finite coordinate");
    scale_ = std::max(scale_, norm_inf(p));
  }
  if (const auto dups = duplicate_indices(points_); !dups.empty()) {
    throw DegenerateError("VRep: point " + std::to_string(dups.front()) + " duplicates an earlier point");
  }
}

HRep::HRep(std::size_t dim, std::vector<Hyperplane> halfspaces) : dim_(dim), halfspaces_(std::move(halfspaces)) {
  if (dim_ == 0) throw DimensionError("HRep: dimension must be positive");
  if (halfspaces_.empty()) throw DimensionError("HRep: at least one half-space required");
  for (const auto& h : halfspaces_) {
    if (h.normal.size() != dim_) throw DimensionError("HRep: normal dimension mismatch");
    if (!all_finite(h.normal) || !std::isfinite(h.offset)) throw DimensionError("HRep: non-finite coefficient");
    if (std::abs(norm2(h.normal) - 1.0) > kGeomEps) throw DimensionError("HRep: normals must be unit length");
  }
}

HRep HRep::from_inequalities(const Matrix& a, std::span<const double> b) {
  if (a.rows() != b.size()) throw DimensionError("HRep::from_inequalities: row count mismatch");
  std::vector<Hyperplane> hs;
  hs.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    const double len = norm2(r);
    if (len == 0.0) throw DegenerateError("HRep::from_inequalities: zero row");
    Hyperplane h;
    h.normal.assign(r.begin(), r.end());
    for (auto& c : h.normal) c /= len;
    h.offset = b[i] / len;
    hs.push_back(std::move(h));
  }
  return HRep(a.cols(), std::move(hs));
}

ReferencePolytope unit_cube(std::size_t n) {
  if (n == 0) throw DimensionError("unit_cube: n must be positive");
  ReferencePolytope out;
  if (n <= 20) {
    const std::size_t count = std::size_t{1} << n;
    std::vector<Vector> pts(count, Vector(n, 0.0));
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t i = 0; i < n; ++i) pts[k][i] = static_cast<double>((k >> i) & 1u);
    }
    out.vrep.emplace(n, std::move(pts));
  }
  std::vector<Hyperplane> hs;
  hs.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Hyperplane h{Vector(n, 0.0), 1.0};
    h.normal[i] = 1.0;
    hs.push_back(std::move(h));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Hyperplane h{Vector(n, 0.0), 0.0};
    h.normal[i] = -1.0;
    hs.push_back(std::move(h));
  }
  out.hrep.emplace(n, std::move(hs));
  return out;
}

ReferencePolytope cross_polytope(std::size_t n) {
  if (n == 0) throw DimensionError("cross_polytope: n must be positive");
  ReferencePolytope out;
  std::vector<Vector> pts;
  pts.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector p(n, 0.0);
      p[i] = s;
      pts.push_back(std::move(p));
    }
  }
  out.vrep.emplace(n, std::move(pts));
  if (n <= 20) {
    const std::size_t count = std::size_t{1} << n;
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Hyperplane> hs(count);
    for (std::size_t k = 0; k < count; ++k) {
      hs[k].normal.resize(n);
      for (std::size_t i = 0; i < n; ++i) hs[k].normal[i] = ((k >> i) & 1u) ? -inv : inv;
      hs[k].offset = inv;
    }
    out.hrep.emplace(n, std::move(hs));
  }
  return out;
}

namespace {

struct FacetSearch {
  const VRep& v;
  std::size_t n;
  std::size_t m;
  double side_tol;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::atomic<bool>& stop;

  // Per-worker state.
  struct Worker {
    explicit Worker(std::size_t n) : span(n), normal(n) {}
    AffineSpan span;
    Vector normal;
    std::vector<Hyperplane> found;
    std::uint64_t leaves = 0;
    std::size_t last_pos = 0;
    std::size_t last_neg = 0;
  };

  // Classifies a point against the candidate: +1 above, -1 below, 0 on.
  int side(const Worker& w, double offset, std::size_t j) const {
    const double s = dot(w.normal, v[j]) - offset;
    if (s > side_tol) return 1;
    if (s < -side_tol) return -1;
    return 0;
  }

  void leaf(Worker& w) {
    if ((++w.leaves & 0xFFF) == 0 && deadline && std::chrono::steady_clock::now() > *deadline) {
      stop.store(true, std::memory_order_relaxed);
    }
    w.span.normal_into(w.normal);
    const double offset = dot(w.normal, w.span.origin());
    // Witnesses from the last rejection reject most candidates in two dot products.
    const int a = side(w, offset, w.last_pos);
    if (a != 0 && a == -side(w, offset, w.last_neg)) return;
    std::size_t pos = m, neg = m;
    for (std::size_t j = 0; j < m; ++j) {
      const int s = side(w, offset, j);
      if (s > 0) {
        pos = j;
      } else if (s < 0) {
        neg = j;
      } else {
        continue;
      }
      if (pos < m && neg < m) {
        w.last_pos = pos;
        w.last_neg = neg;
        return;
      }
    }
    Hyperplane h{w.normal, offset};
    if (pos < m) {
      for (auto& c : h.normal) c = -c;
      h.offset = -h.offset;
    }
    w.found.push_back(std::move(h));
  }

  void descend(Worker& w, std::size_t start) {
    if (stop.load(std::memory_order_relaxed)) return;
    const std::size_t depth = w.span.size();
    if (depth == n) {
      leaf(w);
      return;
    }
    for (std::size_t i = start; i + (n - depth) <= m; ++i) {
      if (!w.span.push(v[i])) continue;  // affinely dependent prefix: no facet below
      descend(w, i + 1);
      w.span.pop();
      if (stop.load(std::memory_order_relaxed)) return;
    }
  }

  void root(Worker& w, std::size_t i) {
    w.span.clear();
    w.span.push(v[i]);
    descend(w, i + 1);
  }
};

std::vector<Hyperplane> dedup_facets(std::vector<Hyperplane> cand, double offset_eps) {
  std::sort(cand.begin(), cand.end(), [](const Hyperplane& a, const Hyperplane& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  });
  std::vector<Hyperplane> kept;
  for (auto& c : cand) {
    bool dup = false;
    for (std::size_t k = kept.size(); k-- > 0;) {
      if (c.normal[0] - kept[k].normal[0] > kFacetDedupEps) break;
      if (near_equal(kept[k].normal, c.normal, kFacetDedupEps) && std::abs(kept[k].offset - c.offset) <= offset_eps) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(c));
  }
  return kept;
}

}  // namespace

ConversionReport vrep_to_hrep(const VRep& v, const ConversionOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = v.dim();
  const std::size_t m = v.size();
  if (affine_rank(v.points()) < n) throw DegenerateError("vrep_to_hrep: hull is not full-dimensional");

  std::atomic<bool> stop{false};
  FacetSearch search{v, n, m, kGeomEps * v.scale(), opts.deadline, stop};

  std::vector<Hyperplane> candidates;
  std::uint64_t leaves = 0;
  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1) {
    FacetSearch::Worker w(n);
    for (std::size_t i = 0; i + n <= m && !stop; ++i) search.root(w, i);
    candidates = std::move(w.found);
    leaves = w.leaves;
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        FacetSearch::Worker w(n);
        for (std::size_t i = next++; i + n <= m && !stop; i = next++) search.root(w, i);
        std::lock_guard lock(mu);
        candidates.insert(candidates.end(), w.found.begin(), w.found.end());
        leaves += w.leaves;
      });
    }
    for (auto& th : pool) th.join();
  }
  if (stop) throw TimeoutError("vrep_to_hrep: deadline exceeded");

  auto facets = dedup_facets(std::move(candidates), kFacetDedupEps * v.scale());
  ConversionReport rep{HRep(n, std::move(facets)), 0, 0.0, leaves};
  rep.facet_count = rep.hrep.size();
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

bool hrep_contains(const HRep& h, std::span<const double> x) {
  if (x.size() != h.dim()) throw DimensionError("hrep_contains: dimension mismatch");
  return std::all_of(h.halfspaces().begin(), h.halfspaces().end(), [&](const Hyperplane& hp) {
    return dot(hp.normal, x) <= hp.offset + kGeomEps * std::max(1.0, std::abs(hp.offset));
  });
}

VRep random_point_set(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DimensionError("random_point_set: n must be positive");
  if (m < n + 1) throw TooFewPoints("random_point_set: need m >= n + 1");
  std::mt19937_64 rng(seed);
  std::vector<Vector> pts(m, Vector(n));
  auto draw = [&](Vector& p) {
    for (auto& c : p) c = -1.0 + 2.0 * uniform01(rng);
  };
  for (auto& p : pts) draw(p);
  for (auto dups = duplicate_indices(pts); !dups.empty(); dups = duplicate_indices(pts)) {
    for (std::size_t i : dups) draw(pts[i]);
  }
  return VRep(n, std::move(pts));
}

}  // namespace hullkit
