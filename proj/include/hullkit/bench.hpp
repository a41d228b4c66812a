#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hullkit/boundary_io.hpp"
#include "hullkit/optimizer.hpp"

namespace hullkit {

struct BenchRow {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  std::string unit;
  bool timed_out = false;  // value then holds the elapsed time at the timeout
};

enum class TableFormat { Csv, Markdown };

// Rows sorted by (m, n, metric); columns m, n, seed, metric, value, unit, timed_out.
// Markdown renders timed-out values as "--".
std::string emit_table(std::vector<BenchRow> rows, TableFormat format);

using GridCell = std::pair<std::size_t, std::size_t>;  // (m, n)

// Parses "50x5,100x6".
std::vector<GridCell> parse_grid(const std::string& text);

// Threads from HULLKIT_THREADS (positive integer); 1 when unset or invalid.
unsigned thread_cap_from_env();

struct ConversionBenchConfig {
  std::vector<GridCell> grid;
  std::size_t seeds = 3;
  std::uint64_t seed = 1;
  double timeout_s = 60.0;
  // LP membership queries timed on the same point sets, for the conversion/membership ratio.
  std::size_t membership_queries = 10;
  unsigned threads = 1;
};

// Per cell: conversion_time, facet_count (when the median run finished),
// membership_time and conversion_membership_ratio. Medians over seeds.
std::vector<BenchRow> bench_conversion(const ConversionBenchConfig& cfg);

struct MembershipBenchConfig {
  std::vector<GridCell> grid;
  std::size_t seeds = 3;
  std::uint64_t seed = 1;
  std::size_t queries_per_cell = 20;  // half convex combinations, half uniform on [-1,1]^n
};

std::vector<BenchRow> bench_membership(const MembershipBenchConfig& cfg);

struct OptimizeBenchConfig {
  std::size_t n_inputs = 4;
  std::uint64_t seed = 1;
  // Shared by the seven conversions of one run; later conversions are skipped once it expires.
  double timeout_s = 60.0;
  bool prune = false;
  bool normalize = true;
  unsigned threads = 1;
  VrepMethod method = VrepMethod::ProjectedGradient;
};

struct OptimizeModelRecord {
  Vector op_point_key;
  std::size_t points = 0;
  bool conversion_done = false;
  double conversion_time = 0.0;
  std::size_t facets = 0;
  SolveResult vrep;
  std::optional<SolveResult> hrep;
  double hrep_time = 0.0;  // Chebyshev start + barrier solve
  bool vrep_feasible = false;
  bool hrep_feasible = false;
};

struct OptimizeBenchReport {
  std::vector<OptimizeModelRecord> models;
  double conversion_total = 0.0;
  bool conversion_timed_out = false;
  double hrep_optimization_total = 0.0;
  double vrep_optimization_total = 0.0;
  double max_objective_gap = 0.0;  // over models where both methods ran
  std::vector<BenchRow> rows;
};

OptimizeBenchReport bench_optimize(const OptimizeBenchConfig& cfg);

// Distance-like violation of x against conv(v): 0 when LP membership holds,
// otherwise the margin by which x clears the separating hyperplane.
double hull_violation(const VRep& v, std::span<const double> x);

}  // namespace hullkit
