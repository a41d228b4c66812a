#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hullkit/lp.hpp"
#include "hullkit/polytope.hpp"

namespace hullkit {

// A point on the standard simplex: alpha >= -1e-9, |sum(alpha) - 1| <= 1e-9.
class Weights {
 public:
  explicit Weights(Vector alpha);
  static Weights barycenter(std::size_t m);

  std::size_t size() const noexcept { return alpha_.size(); }
  const Vector& alpha() const noexcept { return alpha_; }
  double operator[](std::size_t i) const { return alpha_[i]; }

  // sum_i alpha_i v_i
  Vector combine(const VRep& v) const;

 private:
  Vector alpha_;
};

struct MembershipResult {
  bool inside = false;
  std::optional<Weights> weights;       // inside only
  std::optional<Hyperplane> separator;  // outside only: points on the <= side, query strictly above
};

// Feasibility LP over convex-combination weights with zero cost.
MembershipResult contains(const VRep& v, std::span<const double> query, const LpOptions& opts = {});

// True iff v[k] is not a convex combination of the other points.
bool is_extreme(const VRep& v, std::size_t k);

// Indices of extreme points in input order. threads > 1 classifies concurrently.
std::vector<std::size_t> extreme_indices(const VRep& v, unsigned threads = 1);

// Sub-VRep of the extreme points, in input order.
VRep extreme_points(const VRep& v, unsigned threads = 1);

}  // namespace hullkit
