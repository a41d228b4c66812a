#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hullkit/bench.hpp"
#include "hullkit/hull_queries.hpp"
#include "hullkit/optimizer.hpp"
#include "oracles.hpp"

using namespace hullkit;

namespace {

Objective linear(Vector c) {
  Objective f;
  f.dim = c.size();
  f.eval = [c](std::span<const double> x) { return dot(c, x); };
  f.grad = [c](std::span<const double>) { return c; };
  return f;
}

Objective squared_distance(Vector t, bool with_grad = true) {
  Objective f;
  f.dim = t.size();
  f.eval = [t](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += (x[i] - t[i]) * (x[i] - t[i]);
    return s;
  };
  if (with_grad) {
    f.grad = [t](std::span<const double> x) {
      Vector g(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) g[i] = 2.0 * (x[i] - t[i]);
      return g;
    };
  }
  return f;
}

// Smooth non-polynomial test function with an analytic gradient.
Objective wavy(std::size_t n) {
  Objective f;
  f.dim = n;
  f.eval = [](std::span<const double> x) {
    double s = std::exp(0.3 * x[0]);
    for (std::size_t i = 0; i < x.size(); ++i) s += std::sin(1.0 + x[i]) + 0.5 * x[i] * x[i] * (i + 1);
    return s;
  };
  f.grad = [](std::span<const double> x) {
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::cos(1.0 + x[i]) + x[i] * (i + 1);
    g[0] += 0.3 * std::exp(0.3 * x[0]);
    return g;
  };
  return f;
}

bool monotone(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i] > h[i - 1]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("project_to_simplex examples") {
  const Weights a = project_to_simplex(Vector{0.2, 0.8});
  CHECK(a[0] == doctest::Approx(0.2));
  CHECK(a[1] == doctest::Approx(0.8));
  const Weights b = project_to_simplex(Vector{2, 0});
  CHECK(b.alpha() == Vector{1, 0});
  CHECK(project_to_simplex(Vector{-5}).alpha() == Vector{1});
  const Weights c = project_to_simplex(Vector{1, 1, 1, 1});
  for (double x : c.alpha()) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("project_to_simplex matches the grid oracle") {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + trial % 8;
    Vector y(m);
    for (auto& x : y) x = oracle::uniform(rng, -1.0, 2.0);
    const Weights w = project_to_simplex(y);
    const Vector g = oracle::grid_simplex_projection(y, 1000);
    double diff = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      diff = std::max(diff, std::abs(w[i] - g[i]));
      CHECK(w[i] >= 0.0);
      sum += w[i];
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(diff <= 2e-3);
  }
}

TEST_CASE("compose_objective values and gradients") {
  const VRep cube = *unit_cube(2).vrep;
  const Objective first = linear({1, 0});
  const Objective F = compose_objective(first, cube);
  CHECK(F.dim == 4);
  CHECK(F.eval(Weights::barycenter(4).alpha()) == doctest::Approx(0.5));

  const Objective w = wavy(2);
  const Objective W = compose_objective(w, cube);
  for (std::size_t k = 0; k < 4; ++k) {
    Vector e(4, 0.0);
    e[k] = 1.0;
    CHECK(W.eval(e) == doctest::Approx(w.eval(cube[k])));
  }
  CHECK_THROWS_AS(compose_objective(linear({1, 0, 0}), cube), DimensionError);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const VRep v = random_point_set(n + 2 + trial % 5, n, 50 + trial);
    const Objective G = compose_objective(wavy(n), v);
    const Vector alpha = oracle::random_simplex_point(rng, v.size());
    const Vector g = G.grad(alpha);
    const Vector fd = oracle::central_difference(G.eval, alpha);
    double scale = 1.0, err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      scale = std::max(scale, std::abs(fd[i]));
      err = std::max(err, std::abs(g[i] - fd[i]));
    }
    CHECK(err / scale <= 1e-5);
  }
}

TEST_CASE("compose_objective without a gradient falls back to differences") {
  const VRep cube = *unit_cube(2).vrep;
  const Objective F = compose_objective(squared_distance({0.4, 0.3}, false), cube);
  const Vector a = Weights::barycenter(4).alpha();
  const Vector fd = oracle::central_difference(F.eval, a);
  const Vector g = F.has_grad() ? F.grad(a) : finite_difference_gradient(F.eval, a);
  for (std::size_t i = 0; i < 4; ++i) CHECK(g[i] == doctest::Approx(fd[i]).epsilon(1e-5));
}

TEST_CASE("finite_difference_gradient") {
  const Objective w = wavy(3);
  const Vector x{0.3, -0.2, 0.7};
  const Vector g = finite_difference_gradient(w.eval, x);
  const Vector a = w.grad(x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(g[i] - a[i]) <= 1e-6);
}

TEST_CASE("frank_wolfe_vertex picks the smallest entry") {
  CHECK(frank_wolfe_vertex(Vector{3, -1, 2, -1}) == 1);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    Vector g(1 + t % 9);
    for (auto& x : g) x = oracle::uniform(rng, -1, 1);
    const std::size_t k = frank_wolfe_vertex(g);
    CHECK(g[k] == *std::min_element(g.begin(), g.end()));
  }
}

TEST_CASE("solve_vrep examples") {
  const VRep cube = *unit_cube(2).vrep;
  for (auto method : {VrepMethod::ProjectedGradient, VrepMethod::FrankWolfe}) {
    const auto r = solve_vrep(linear({1, 0}), {}, cube, {}, method);
    CHECK(std::abs(r.objective) <= 1e-6);
    CHECK(std::abs(r.minimizer[0]) <= 1e-6);
    REQUIRE(r.weights);
    const Vector x = r.weights->combine(cube);
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(x[j] - r.minimizer[j]) <= 1e-7);
    CHECK(monotone(r.history));
  }
  const auto q = solve_vrep(squared_distance({0.4, 0.3}), {}, cube);
  CHECK(q.objective <= 1e-6);
  CHECK(q.converged);

  const VRep pts = random_point_set(20, 2, 21);
  const double oracle_min = oracle::vertex_scan(pts.points(), Vector{1, 1});
  const auto l = solve_vrep(linear({1, 1}), {}, pts);
  CHECK(std::abs(l.objective - oracle_min) <= 1e-5);
  CHECK(contains(pts, l.minimizer).inside);

  CHECK_THROWS_AS(solve_vrep(linear({1, 0, 0}), {}, cube), DimensionError);
}

TEST_CASE("solve_vrep without an analytic gradient") {
  const VRep cube = *unit_cube(2).vrep;
  const auto q = solve_vrep(squared_distance({0.4, 0.3}, false), {}, cube);
  CHECK(q.objective <= 1e-6);
}

TEST_CASE("solve_vrep respects a penalized constraint") {
  const VRep cube = *unit_cube(2).vrep;
  // minimize distance to (1,1) subject to x1 + x2 <= 1
  Constraint g{2, [](std::span<const double> x) { return 1.0 - x[0] - x[1]; }};
  for (auto method : {VrepMethod::ProjectedGradient, VrepMethod::FrankWolfe}) {
    const auto r = solve_vrep(squared_distance({1, 1}), {g}, cube, {}, method);
    // the returned point is feasible and cannot beat the true constrained optimum 0.5
    CHECK(g.eval(r.minimizer) >= -1e-6);
    CHECK(r.objective >= 0.5 - 1e-9);
    CHECK(r.objective <= 0.6);
    if (r.converged) CHECK(r.objective <= 0.5 + 1e-3);
  }
  // an inactive constraint leaves the unconstrained optimum untouched
  Constraint loose{2, [](std::span<const double> x) { return 3.0 - x[0] - x[1]; }};
  const auto u = solve_vrep(squared_distance({0.4, 0.3}), {loose}, cube);
  CHECK(u.objective <= 1e-6);
  CHECK(u.converged);
}

TEST_CASE("solve_vrep reports an exhausted budget") {
  const VRep v = random_point_set(30, 3, 8);
  SolveOptions o;
  o.max_fun_evals = 3;
  const auto r = solve_vrep(squared_distance({2, 2, 2}), {}, v, o, VrepMethod::FrankWolfe);
  CHECK_FALSE(r.converged);
  CHECK(contains(v, r.minimizer).inside);
}

TEST_CASE("chebyshev_center examples") {
  const auto c = chebyshev_ball(*unit_cube(2).hrep);
  CHECK(c.center[0] == doctest::Approx(0.5));
  CHECK(c.center[1] == doctest::Approx(0.5));
  CHECK(c.radius == doctest::Approx(0.5));
  const auto x = chebyshev_ball(*cross_polytope(2).hrep);
  CHECK(std::abs(x.center[0]) <= 1e-9);
  CHECK(std::abs(x.center[1]) <= 1e-9);
  CHECK(x.radius == doctest::Approx(1.0 / std::sqrt(2.0)));

  const HRep fig = vrep_to_hrep(VRep(2, {{0, 0}, {2, 0}, {3, 2}, {1, 1}, {0, 1}})).hrep;
  const auto f = chebyshev_ball(fig);
  CHECK(f.radius > 0.0);
  for (const auto& hp : fig.halfspaces()) CHECK(hp.offset - dot(hp.normal, f.center) >= f.radius - 1e-9);
  CHECK(chebyshev_center(fig) == f.center);

  // an empty set and a flat box have no interior
  CHECK_THROWS_AS(chebyshev_ball(HRep(1, {{{1}, 0}, {{-1}, -1}})), EmptyInterior);
  CHECK_THROWS_AS(chebyshev_ball(HRep(1, {{{1}, 0}, {{-1}, 0}})), EmptyInterior);
}

TEST_CASE("solve_hrep examples") {
  const HRep cube = *unit_cube(2).hrep;
  const auto l = solve_hrep(linear({1, 0}), {}, cube, Vector{0.5, 0.5});
  CHECK(l.objective <= 1e-4);
  CHECK(hrep_contains(cube, l.minimizer));
  CHECK(monotone(l.history));
  const auto q = solve_hrep(squared_distance({0.4, 0.3}), {}, cube, Vector{0.5, 0.5});
  CHECK(q.objective <= 1e-6);

  const VRep pts = random_point_set(20, 2, 21);
  const HRep h = vrep_to_hrep(pts).hrep;
  const auto hv = solve_hrep(linear({1, 1}), {}, h, chebyshev_center(h));
  const auto vv = solve_vrep(linear({1, 1}), {}, pts);
  CHECK(std::abs(hv.objective - vv.objective) <= 1e-3);
  CHECK(std::abs(hv.objective - oracle::vertex_scan(pts.points(), Vector{1, 1})) <= 1e-3);

  CHECK_THROWS_AS(solve_hrep(linear({1, 0}), {}, cube, Vector{1.0, 0.5}), InfeasibleStart);
  CHECK_THROWS_AS(solve_hrep(linear({1, 0}), {}, cube, Vector{2.0, 0.5}), InfeasibleStart);
}

TEST_CASE("solve_hrep respects a penalized constraint") {
  const HRep cube = *unit_cube(2).hrep;
  Constraint g{2, [](std::span<const double> x) { return 1.0 - x[0] - x[1]; }};
  const auto r = solve_hrep(squared_distance({1, 1}), {g}, cube, Vector{0.25, 0.25});
  CHECK(g.eval(r.minimizer) >= -1e-6);
  CHECK(r.objective >= 0.5 - 1e-9);
  CHECK(r.objective <= 0.6);
  if (r.converged) CHECK(r.objective <= 0.5 + 1e-3);
  Constraint loose{2, [](std::span<const double> x) { return 3.0 - x[0] - x[1]; }};
  const auto u = solve_hrep(squared_distance({0.4, 0.3}), {loose}, cube, Vector{0.5, 0.5});
  CHECK(u.objective <= 1e-6);
  CHECK(u.converged);
}

TEST_CASE("both formulations agree on convex quadratics") {
  std::mt19937_64 rng(314);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 1 + seed % 4;
    const VRep v = random_point_set(10 + 3 * seed, n, seed);
    const HRep h = vrep_to_hrep(v).hrep;
    Vector t(n);
    for (auto& x : t) x = oracle::uniform(rng, -1.5, 1.5);
    const Objective f = squared_distance(t);
    const auto a = solve_vrep(f, {}, v);
    const auto b = solve_hrep(f, {}, h, chebyshev_center(h));
    const auto fw = solve_vrep(f, {}, v, {}, VrepMethod::FrankWolfe);
    CHECK(std::abs(a.objective - b.objective) <= 1e-3);
    CHECK(std::abs(fw.objective - a.objective) <= 1e-2);
    CHECK(hull_violation(v, a.minimizer) <= 1e-6);
    CHECK(hull_violation(v, b.minimizer) <= 1e-6);
    CHECK(monotone(a.history));
    CHECK(monotone(b.history));
    CHECK(monotone(fw.history));
  }
}
