#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hullkit/numeric.hpp"

namespace hullkit {

// Vertex representation: conv of a finite set of pairwise distinct points.
class VRep {
 public:
  // Throws DimensionError on empty/ragged/non-finite input and
  // DegenerateError when two points coincide (max-norm distance <= 1e-12).
  VRep(std::size_t dim, std::vector<Vector> points);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Vector>& points() const noexcept { return points_; }
  const Vector& operator[](std::size_t i) const { return points_[i]; }

  // Largest absolute coordinate, at least 1; the scale for relative tolerances.
  double scale() const noexcept { return scale_; }

  friend bool operator==(const VRep& a, const VRep& b) { return a.dim_ == b.dim_ && a.points_ == b.points_; }

 private:
  std::size_t dim_;
  std::vector<Vector> points_;
  double scale_ = 1.0;
};

// Half-space representation: {x : normal_i . x <= offset_i for all i}, unit normals.
class HRep {
 public:
  HRep(std::size_t dim, std::vector<Hyperplane> halfspaces);
  // Normalizes rows of a and the matching entries of b.
  static HRep from_inequalities(const Matrix& a, std::span<const double> b);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return halfspaces_.size(); }
  const std::vector<Hyperplane>& halfspaces() const noexcept { return halfspaces_; }
  const Hyperplane& operator[](std::size_t i) const { return halfspaces_[i]; }

  friend bool operator==(const HRep&, const HRep&) = default;

 private:
  std::size_t dim_;
  std::vector<Hyperplane> halfspaces_;
};

struct ReferencePolytope {
  std::optional<VRep> vrep;
  std::optional<HRep> hrep;
};

// {0,1}^n vertices (omitted for n > 20) and the 2n half-spaces e_i.x <= 1, -e_i.x <= 0.
ReferencePolytope unit_cube(std::size_t n);

// Vertices +-e_i and the 2^n half-spaces s.x <= 1 over sign vectors s (omitted for n > 20).
ReferencePolytope cross_polytope(std::size_t n);

struct ConversionOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  unsigned threads = 1;
};

struct ConversionReport {
  HRep hrep;
  std::size_t facet_count = 0;
  double elapsed = 0.0;  // seconds
  std::uint64_t candidates_examined = 0;
};

// Facet enumeration by exhaustive search over affinely independent n-subsets.
// Throws DegenerateError for a hull that is not full-dimensional and
// TimeoutError when the deadline passes.
ConversionReport vrep_to_hrep(const VRep& v, const ConversionOptions& opts = {});

bool hrep_contains(const HRep& h, std::span<const double> x);

// m points uniform on [-1,1]^n from a 64-bit Mersenne twister; duplicates are redrawn.
VRep random_point_set(std::size_t m, std::size_t n, std::uint64_t seed);

// Uniform double on [0,1) from the top 53 bits of a 64-bit draw.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace hullkit
