#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hullkit/errors.hpp"

namespace hullkit {

// Global geometric tolerance, applied relative to the coordinate scale where one exists.
inline constexpr double kGeomEps = 1e-9;

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Throws DimensionError if data.size() != rows*cols or any entry is non-finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Matrix from_rows(const std::vector<Vector>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const noexcept { return data_; }

  Vector multiply(std::span<const double> x) const;
  // y^T * this
  Vector left_multiply(std::span<const double> y) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Oriented hyperplane {x : normal . x == offset}; as a half-space, normal . x <= offset.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  double signed_distance(std::span<const double> x) const;
  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
bool all_finite(std::span<const double> a);

// Solves a*x = rhs by Gaussian elimination with scaled partial pivoting.
Vector gaussian_solve(const Matrix& a, std::span<const double> rhs);

// Dimension of the affine hull of the points (rank of {p_i - p_0}).
std::size_t affine_rank(const std::vector<Vector>& points);

// Normalized hyperplane through exactly n points in R^n. Orientation is arbitrary.
Hyperplane hyperplane_through(const std::vector<Vector>& points);

// Incremental affine-independence tracker. Points are pushed one at a time and
// reduced against an echelon basis of the difference vectors, so a depth-first
// enumeration of point subsets pays O(n^2) per push instead of a fresh solve.
class AffineSpan {
 public:
  explicit AffineSpan(std::size_t dim, double tol = kGeomEps);

  // Returns false, leaving the state unchanged, when p lies in the current
  // affine span (or the span is already the whole space).
  bool push(std::span<const double> p);
  void pop();
  void clear();

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return count_; }
  std::size_t rank() const noexcept { return count_ == 0 ? 0 : count_ - 1; }

  // Unit normal of the spanned hyperplane; requires rank() == dim() - 1.
  Vector normal() const;
  void normal_into(std::span<double> out) const;
  std::span<const double> origin() const { return {origin_.data(), dim_}; }

 private:
  std::size_t dim_;
  double tol_;
  std::size_t count_ = 0;
  Vector origin_;
  std::vector<double> rows_;          // rank() rows of length dim_, pivot entry == 1
  std::vector<std::size_t> pivots_;
  mutable std::vector<double> scratch_;
};

}  // namespace hullkit
