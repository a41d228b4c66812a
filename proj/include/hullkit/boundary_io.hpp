#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hullkit/optimizer.hpp"
#include "hullkit/polytope.hpp"

namespace hullkit {

struct Dataset {
  std::vector<std::string> column_names;
  std::vector<Vector> rows;
  std::vector<std::size_t> op_point_columns;

  std::size_t column_index(const std::string& name) const;  // throws IndexError
};

// Header row of names, then numeric rows; comma separator, no quoting.
// Columns named in op_point_names (when present) become the operating-point key.
Dataset load_csv(const std::filesystem::path& path,
                 const std::vector<std::string>& op_point_names = {"SPEED", "BTQ"});
void save_csv(const std::filesystem::path& path, const Dataset& d);

struct OpPointGroup {
  Vector key;
  std::vector<Vector> rows;
};

// Exact-equality grouping on the op-point columns, ordered lexicographically by key.
std::vector<OpPointGroup> group_by_operating_point(const Dataset& d);

// x_normalized = (x - offset) / scale
struct ColumnScaling {
  double offset = 0.0;
  double scale = 1.0;
  friend bool operator==(const ColumnScaling&, const ColumnScaling&) = default;
};

struct BoundaryModel {
  std::string name;
  std::vector<std::size_t> input_columns;
  Vector op_point_key;
  VRep vrep;  // in normalized coordinates
  bool pruned = false;
  std::optional<HRep> cached_hrep;
  std::vector<ColumnScaling> normalization;  // identity scalings when not normalized
  // Membership answers recorded when the H-rep was cached; re-checked on load.
  std::vector<Vector> validation_queries;
  std::vector<bool> validation_inside;

  Vector normalize(std::span<const double> raw) const;
  Vector denormalize(std::span<const double> x) const;
  // Membership of a raw (un-normalized) input vector.
  bool contains_raw(std::span<const double> raw) const;
};

// rows are full dataset rows; input_columns selects the hull coordinates.
BoundaryModel build_boundary_model(const std::vector<Vector>& rows, const std::vector<std::size_t>& input_columns,
                                   bool prune, bool normalize, std::string name = {}, Vector op_point_key = {});

// Stores h as the model's H-rep and records validation answers on seeded probe points.
void attach_hrep(BoundaryModel& model, HRep h, std::uint64_t seed = 1, std::size_t probes = 32);

void save_model(const BoundaryModel& m, const std::filesystem::path& path);
// Throws IoError, ParseError (malformed JSON) or SchemaError (bad content or version).
BoundaryModel load_model(const std::filesystem::path& path);

inline constexpr int kModelSchemaVersion = 1;

// Signal names for the 4-, 7- and 9-input engine variants.
std::vector<std::string> engine_input_names(std::size_t n_inputs);

// Smooth synthetic BSFC response for one operating point, a convex quadratic in
// box-normalized inputs z = (x - mid) / half.
struct BsfcModel {
  Vector op_point_key;
  Vector mid;
  Vector half;
  Vector center;   // optimum location in z coordinates
  Vector weights;  // diagonal curvature
  Vector coupling; // rank-one coupling direction
  double base = 0.0;

  double eval(std::span<const double> x) const;
  Vector grad(std::span<const double> x) const;
};

struct SynthEngine {
  Dataset data;
  std::vector<BsfcModel> responses;  // one per operating point, in key order
};

// 875 rows over 7 operating points (125 each): inputs, SPEED, BTQ, BSFC.
SynthEngine synth_engine(std::uint64_t seed, std::size_t n_inputs);
Dataset synth_engine_dataset(std::uint64_t seed, std::size_t n_inputs);

// The response as an objective over the model's normalized coordinates.
Objective bsfc_objective(const BsfcModel& bsfc, const BoundaryModel& model);

}  // namespace hullkit
