#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hullkit/hull_queries.hpp"
#include "oracles.hpp"

using namespace hullkit;

namespace {

const std::vector<Vector> kQuadWithInterior = {{0, 0}, {2, 0}, {3, 2}, {1, 1}, {0, 1}};

void check_result(const VRep& v, std::span<const double> q, const MembershipResult& r) {
  if (r.inside) {
    REQUIRE(r.weights);
    REQUIRE_FALSE(r.separator);
    double sum = 0.0;
    for (double a : r.weights->alpha()) {
      CHECK(a >= -1e-9);
      sum += a;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    const Vector x = r.weights->combine(v);
    for (std::size_t j = 0; j < q.size(); ++j) CHECK(std::abs(x[j] - q[j]) <= 1e-7);
  } else {
    REQUIRE(r.separator);
    REQUIRE_FALSE(r.weights);
    CHECK(std::abs(norm2(r.separator->normal) - 1.0) <= 1e-12);
    for (const auto& p : v.points()) CHECK(dot(r.separator->normal, p) <= r.separator->offset + 1e-9);
    CHECK(dot(r.separator->normal, q) > r.separator->offset + 1e-9);
  }
}

VRep triangle_with_interior(std::size_t interior, std::uint64_t seed) {
  std::vector<Vector> pts = {{0, 0}, {4, 0}, {1, 3}};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < interior; ++i) {
    Vector a = oracle::random_simplex_point(rng, 3);
    for (auto& x : a) x = 0.05 + 0.85 * x;  // all weights strictly positive
    const double s = std::accumulate(a.begin(), a.end(), 0.0);
    Vector p(2, 0.0);
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t j = 0; j < 2; ++j) p[j] += a[k] / s * pts[k][j];
    }
    pts.push_back(p);
  }
  return VRep(2, pts);
}

}  // namespace

TEST_CASE("Weights validation") {
  CHECK_NOTHROW(Weights(Vector{0.5, 0.5}));
  CHECK_THROWS_AS(Weights(Vector{0.6, 0.6}), DimensionError);
  CHECK_THROWS_AS(Weights(Vector{1.1, -0.1}), DimensionError);
  CHECK(Weights::barycenter(4)[2] == doctest::Approx(0.25));
}

TEST_CASE("contains examples") {
  const VRep fig(2, kQuadWithInterior);
  const auto r = contains(fig, Vector{1, 1});
  CHECK(r.inside);
  check_result(fig, Vector{1, 1}, r);

  const VRep cube = *unit_cube(3).vrep;
  const auto c = contains(cube, Vector{0.5, 0.5, 0.5});
  CHECK(c.inside);
  check_result(cube, Vector{0.5, 0.5, 0.5}, c);

  const VRep tri(2, {{0, 0}, {1, 0}, {0, 1}});
  const auto t = contains(tri, Vector{1, 1});
  REQUIRE_FALSE(t.inside);
  check_result(tri, Vector{1, 1}, t);
  CHECK(t.separator->normal[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(t.separator->normal[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(t.separator->offset == doctest::Approx(1.0 / std::sqrt(2.0)));
  // brute force: the nearest simplex-grid combination stays away from (1,1)
  CHECK(oracle::grid_hull_distance(tri.points(), Vector{1, 1}, 400) >= 0.7);

  CHECK_THROWS_AS(contains(tri, Vector{1, 1, 1}), DimensionError);
}

TEST_CASE("boundary queries are inside") {
  const VRep tri(2, {{0, 0}, {1, 0}, {0, 1}});
  CHECK(contains(tri, Vector{0.5, 0.5}).inside);
  CHECK(contains(tri, Vector{0, 0}).inside);
  CHECK(contains(tri, Vector{0.25, 0}).inside);
}

TEST_CASE("every point is inside its own hull") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const VRep v = random_point_set(25, 1 + seed % 5, seed);
    for (const auto& p : v.points()) CHECK(contains(v, p).inside);
  }
}

TEST_CASE("certificates are valid on random queries") {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 1 + seed % 6;
    const VRep v = random_point_set(10 + 3 * seed, n, seed);
    for (int q = 0; q < 50; ++q) {
      Vector x(n);
      for (auto& c : x) c = oracle::uniform(rng, -1.5, 1.5);
      check_result(v, x, contains(v, x));
    }
  }
}

TEST_CASE("membership is scale invariant") {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const VRep v = random_point_set(20, n, seed);
    std::vector<Vector> big = v.points();
    for (auto& p : big) {
      for (auto& x : p) x *= 1e3;
    }
    const VRep vb(n, big);
    for (int q = 0; q < 50; ++q) {
      Vector x(n);
      for (auto& c : x) c = oracle::uniform(rng, -1.2, 1.2);
      Vector xb = x;
      for (auto& c : xb) c *= 1e3;
      CHECK(contains(v, x).inside == contains(vb, xb).inside);
    }
  }
}

TEST_CASE("is_extreme examples") {
  const VRep fig(2, kQuadWithInterior);
  CHECK_FALSE(is_extreme(fig, 3));
  CHECK(is_extreme(fig, 0));
  CHECK(is_extreme(VRep(2, {{0, 0}, {1, 0}}), 0));
  CHECK_THROWS_AS(is_extreme(fig, 5), IndexError);
  CHECK(is_extreme(VRep(2, {{0, 0}}), 0));
}

TEST_CASE("extreme_points examples") {
  const VRep ext = extreme_points(VRep(2, kQuadWithInterior));
  CHECK(ext.points() == std::vector<Vector>{{0, 0}, {2, 0}, {3, 2}, {0, 1}});
  CHECK(extreme_points(*unit_cube(3).vrep).size() == 8);
  const VRep tri = triangle_with_interior(10, 4);
  CHECK(extreme_points(tri).points() == std::vector<Vector>{{0, 0}, {4, 0}, {1, 3}});
  CHECK(extreme_points(VRep(1, {{0.5}})).size() == 1);
  // collinear points: only the endpoints are extreme
  CHECK(extreme_indices(VRep(2, {{0, 0}, {1, 1}, {3, 3}, {2, 2}})) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("threaded classification matches serial") {
  const VRep v = random_point_set(80, 3, 5);
  CHECK(extreme_indices(v, 1) == extreme_indices(v, 4));
}

TEST_CASE("pruning to extreme points preserves membership") {
  std::mt19937_64 rng(44);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const std::size_t n = 1 + seed % 5;
    const VRep v = random_point_set(20 + 4 * seed, n, seed);
    const VRep e = extreme_points(v);
    CHECK(e.size() <= v.size());
    for (int q = 0; q < 100; ++q) {
      Vector x(n);
      for (auto& c : x) c = oracle::uniform(rng, -1.1, 1.1);
      CHECK(contains(e, x).inside == contains(v, x).inside);
    }
  }
}
