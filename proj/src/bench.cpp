#include "hullkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>

#include "hullkit/hull_queries.hpp"

namespace hullkit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Sample {
  double value;
  bool timed_out;
};

// Lower median; a timed-out sample is a lower bound, so it sorts by its elapsed time.
Sample median(std::vector<Sample> s) {
  std::sort(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.value < b.value; });
  return s[(s.size() - 1) / 2];
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

Vector random_combination(const VRep& v, std::mt19937_64& rng) {
  Vector w(v.size());
  double total = 0.0;
  for (auto& e : w) {
    e = -std::log(1.0 - uniform01(rng));
    total += e;
  }
  Vector x(v.dim(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.dim(); ++j) x[j] += w[i] / total * v[i][j];
  }
  return x;
}

Vector random_box_point(std::size_t n, std::mt19937_64& rng) {
  Vector x(n);
  for (auto& c : x) c = -1.0 + 2.0 * uniform01(rng);
  return x;
}

std::uint64_t query_seed(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ull + 0x5851F42D4C957F2Dull; }

}  // namespace

std::string emit_table(std::vector<BenchRow> rows, TableFormat format) {
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.n != b.n) return a.n < b.n;
    return a.metric < b.metric;
  });
  std::ostringstream out;
  if (format == TableFormat::Csv) {
    out << "m,n,seed,metric,value,unit,timed_out\n";
    for (const auto& r : rows) {
      out << r.m << ',' << r.n << ',' << r.seed << ',' << r.metric << ',' << format_value(r.value) << ',' << r.unit
          << ',' << (r.timed_out ? "true" : "false") << '\n';
    }
  } else {
    out << "| m | n | seed | metric | value | unit | timed_out |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
      out << "| " << r.m << " | " << r.n << " | " << r.seed << " | " << r.metric << " | "
          << (r.timed_out ? std::string("--") : format_value(r.value)) << " | " << r.unit << " | "
          << (r.timed_out ? "yes" : "no") << " |\n";
    }
  }
  return out.str();
}

std::vector<GridCell> parse_grid(const std::string& text) {
  std::vector<GridCell> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw DimensionError("grid cell \"" + item + "\" is not of the form MxN");
    try {
      std::size_t used_m = 0, used_n = 0;
      const std::string ms = item.substr(0, x), ns = item.substr(x + 1);
      const auto m = std::stoul(ms, &used_m);
      const auto n = std::stoul(ns, &used_n);
      if (used_m != ms.size() || used_n != ns.size() || m == 0 || n == 0) throw std::invalid_argument(item);
      out.emplace_back(m, n);
    } catch (const std::logic_error&) {
      throw DimensionError("grid cell \"" + item + "\" is not of the form MxN");
    }
  }
  if (out.empty()) throw DimensionError("empty grid");
  return out;
}

unsigned thread_cap_from_env() {
  const char* s = std::getenv("HULLKIT_THREADS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<unsigned>(std::min<long>(v, 256));
}

std::vector<BenchRow> bench_conversion(const ConversionBenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (const auto& [m, n] : cfg.grid) {
    if (m > 500 || n > 7) throw DimensionError("bench_conversion: grid is capped at m <= 500, n <= 7");
    std::vector<Sample> conv;
    std::vector<double> facets;
    std::vector<double> member;
    const std::size_t seeds = std::max<std::size_t>(1, cfg.seeds);
    std::size_t timeouts = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const std::uint64_t seed = cfg.seed + s;
      const VRep v = random_point_set(m, n, seed);
      ConversionOptions opts;
      opts.threads = cfg.threads;
      const auto t0 = Clock::now();
      opts.deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_s));
      try {
        const auto rep = vrep_to_hrep(v, opts);
        conv.push_back({rep.elapsed, false});
        facets.push_back(static_cast<double>(rep.facet_count));
      } catch (const TimeoutError&) {
        conv.push_back({seconds_since(t0), true});
        ++timeouts;
      }
      std::mt19937_64 rng(query_seed(seed));
      for (std::size_t q = 0; q < cfg.membership_queries; ++q) {
        const Vector x = q % 2 == 0 ? random_combination(v, rng) : random_box_point(n, rng);
        const auto q0 = Clock::now();
        (void)contains(v, x);
        member.push_back(seconds_since(q0));
      }
      // Once most seeds have timed out the median is a timeout regardless of the rest.
      if (2 * timeouts > seeds) break;
    }
    const Sample med = median(conv);
    rows.push_back({m, n, cfg.seed, "conversion_time", med.value, "s", med.timed_out});
    if (!med.timed_out && !facets.empty()) {
      rows.push_back({m, n, cfg.seed, "facet_count", median(facets), "count", false});
    }
    if (!member.empty()) {
      const double mt = median(member);
      rows.push_back({m, n, cfg.seed, "membership_time", mt, "s", false});
      rows.push_back({m, n, cfg.seed, "conversion_membership_ratio", med.value / std::max(mt, 1e-12), "ratio",
                      med.timed_out});
    }
  }
  return rows;
}

std::vector<BenchRow> bench_membership(const MembershipBenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (const auto& [m, n] : cfg.grid) {
    if (m > 2000 || n > 15) throw DimensionError("bench_membership: grid is capped at m <= 2000, n <= 15");
    std::vector<double> t_in, t_uni;
    std::size_t in_hits = 0, in_total = 0, uni_hits = 0, uni_total = 0;
    for (std::size_t s = 0; s < std::max<std::size_t>(1, cfg.seeds); ++s) {
      const std::uint64_t seed = cfg.seed + s;
      const VRep v = random_point_set(m, n, seed);
      std::mt19937_64 rng(query_seed(seed));
      for (std::size_t q = 0; q < cfg.queries_per_cell; ++q) {
        const bool inside_query = q % 2 == 0;
        const Vector x = inside_query ? random_combination(v, rng) : random_box_point(n, rng);
        const auto q0 = Clock::now();
        const bool in = contains(v, x).inside;
        const double dt = seconds_since(q0);
        if (inside_query) {
          t_in.push_back(dt);
          in_hits += in;
          ++in_total;
        } else {
          t_uni.push_back(dt);
          uni_hits += in;
          ++uni_total;
        }
      }
    }
    if (!t_in.empty()) {
      rows.push_back({m, n, cfg.seed, "membership_time_inside_queries", median(t_in), "s", false});
      rows.push_back({m, n, cfg.seed, "inside_rate_inside_queries",
                      static_cast<double>(in_hits) / static_cast<double>(in_total), "fraction", false});
    }
    if (!t_uni.empty()) {
      rows.push_back({m, n, cfg.seed, "membership_time_uniform_queries", median(t_uni), "s", false});
      rows.push_back({m, n, cfg.seed, "inside_rate_uniform_queries",
                      static_cast<double>(uni_hits) / static_cast<double>(uni_total), "fraction", false});
    }
  }
  return rows;
}

double hull_violation(const VRep& v, std::span<const double> x) {
  const auto r = contains(v, x);
  if (r.inside) return 0.0;
  return r.separator->signed_distance(x);
}

OptimizeBenchReport bench_optimize(const OptimizeBenchConfig& cfg) {
  const SynthEngine engine = synth_engine(cfg.seed, cfg.n_inputs);
  const auto groups = group_by_operating_point(engine.data);
  std::vector<std::size_t> inputs(cfg.n_inputs);
  for (std::size_t i = 0; i < cfg.n_inputs; ++i) inputs[i] = i;

  OptimizeBenchReport rep;
  const auto cell_start = Clock::now();
  const auto deadline =
      cell_start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_s));
  const SolveOptions sopts;

  for (std::size_t p = 0; p < groups.size(); ++p) {
    const auto& g = groups[p];
    BoundaryModel model = build_boundary_model(g.rows, inputs, cfg.prune, cfg.normalize,
                                               "op" + std::to_string(p + 1), g.key);
    const Objective f = bsfc_objective(engine.responses.at(p), model);

    OptimizeModelRecord rec;
    rec.op_point_key = g.key;
    rec.points = model.vrep.size();
    rec.vrep = solve_vrep(f, {}, model.vrep, sopts, cfg.method);
    rec.vrep_feasible = hull_violation(model.vrep, rec.vrep.minimizer) <= sopts.constraint_tol;
    rep.vrep_optimization_total += rec.vrep.elapsed;

    if (!rep.conversion_timed_out) {
      ConversionOptions copts;
      copts.deadline = deadline;
      copts.threads = cfg.threads;
      const auto t0 = Clock::now();
      try {
        const auto conv = vrep_to_hrep(model.vrep, copts);
        rec.conversion_done = true;
        rec.conversion_time = conv.elapsed;
        rec.facets = conv.facet_count;
        const auto h0 = Clock::now();
        const Vector start = chebyshev_center(conv.hrep);
        rec.hrep = solve_hrep(f, {}, conv.hrep, start, sopts);
        rec.hrep_time = seconds_since(h0);
        rec.hrep_feasible = hrep_contains(conv.hrep, rec.hrep->minimizer) &&
                            hull_violation(model.vrep, rec.hrep->minimizer) <= sopts.constraint_tol;
        rep.hrep_optimization_total += rec.hrep_time;
        rep.max_objective_gap = std::max(rep.max_objective_gap, std::abs(rec.hrep->objective - rec.vrep.objective));
      } catch (const TimeoutError&) {
        rec.conversion_time = seconds_since(t0);
        rep.conversion_timed_out = true;
      }
      rep.conversion_total += rec.conversion_time;
    }
    rep.models.push_back(std::move(rec));
  }

  const std::size_t n = cfg.n_inputs;
  const std::size_t rows_total = engine.data.rows.size();
  auto count_if = [&](auto pred) {
    return static_cast<double>(std::count_if(rep.models.begin(), rep.models.end(), pred));
  };
  for (std::size_t p = 0; p < rep.models.size(); ++p) {
    const auto& r = rep.models[p];
    const std::string tag = "op" + std::to_string(p + 1) + ".";
    rep.rows.push_back({r.points, n, cfg.seed, tag + "vrep_time", r.vrep.elapsed, "s", false});
    rep.rows.push_back({r.points, n, cfg.seed, tag + "vrep_objective", r.vrep.objective, "g/kWh", false});
    if (r.conversion_done) {
      rep.rows.push_back({r.points, n, cfg.seed, tag + "conversion_time", r.conversion_time, "s", false});
      rep.rows.push_back({r.points, n, cfg.seed, tag + "facet_count", static_cast<double>(r.facets), "count", false});
      rep.rows.push_back({r.points, n, cfg.seed, tag + "hrep_time", r.hrep_time, "s", false});
      rep.rows.push_back({r.points, n, cfg.seed, tag + "hrep_objective", r.hrep->objective, "g/kWh", false});
      rep.rows.push_back({r.points, n, cfg.seed, tag + "objective_gap",
                          std::abs(r.hrep->objective - r.vrep.objective), "g/kWh", false});
    } else if (r.conversion_time > 0.0) {
      rep.rows.push_back({r.points, n, cfg.seed, tag + "conversion_time", r.conversion_time, "s", true});
    }
  }
  rep.rows.push_back({rows_total, n, cfg.seed, "models_built", static_cast<double>(rep.models.size()), "count", false});
  rep.rows.push_back({rows_total, n, cfg.seed, "vrep_feasible", count_if([](const auto& r) { return r.vrep_feasible; }),
                      "count", false});
  rep.rows.push_back({rows_total, n, cfg.seed, "hrep_feasible", count_if([](const auto& r) { return r.hrep_feasible; }),
                      "count", false});
  rep.rows.push_back({rows_total, n, cfg.seed, "conversion_time_total", rep.conversion_total, "s",
                      rep.conversion_timed_out});
  rep.rows.push_back({rows_total, n, cfg.seed, "hrep_optimization_time_total", rep.hrep_optimization_total, "s", false});
  rep.rows.push_back({rows_total, n, cfg.seed, "vrep_optimization_time_total", rep.vrep_optimization_total, "s", false});
  rep.rows.push_back({rows_total, n, cfg.seed, "max_objective_gap", rep.max_objective_gap, "g/kWh", false});
  return rep;
}

}  // namespace hullkit
