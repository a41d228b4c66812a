#include "hullkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hullkit {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows_ * cols_));
  }
  if (!all_finite(data_)) throw DimensionError("matrix entries must be finite");
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionError("ragged matrix rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("matrix-vector size mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = dot(row(r), x);
  return y;
}

Vector Matrix::left_multiply(std::span<const double> y) const {
  if (y.size() != rows_) throw DimensionError("vector-matrix size mismatch");
  Vector out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    const auto rr = row(r);
    for (std::size_t c = 0; c < cols_; ++c) out[c] += yr * rr[c];
  }
  return out;
}

double Hyperplane::signed_distance(std::span<const double> x) const { return dot(normal, x) - offset; }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

Vector gaussian_solve(const Matrix& a, std::span<const double> rhs) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("gaussian_solve requires a square matrix");
  if (rhs.size() != n) throw DimensionError("gaussian_solve rhs size mismatch");

  Matrix m = a;
  Vector b(rhs.begin(), rhs.end());
  Vector scale(n);
  for (std::size_t r = 0; r < n; ++r) {
    scale[r] = norm_inf(m.row(r));
    if (scale[r] == 0.0) throw SingularError("zero row in gaussian_solve");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_val = -1.0;
    for (std::size_t r = k; r < n; ++r) {
      const double v = std::abs(m(perm[r], k)) / scale[perm[r]];
      if (v > best_val) {
        best_val = v;
        best = r;
      }
    }
    if (best_val < 1e-12) throw SingularError("matrix is singular to working precision");
    std::swap(perm[k], perm[best]);
    const std::size_t pk = perm[k];
    const double piv = m(pk, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const std::size_t pr = perm[r];
      const double f = m(pr, k) / piv;
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) m(pr, c) -= f * m(pk, c);
      b[pr] -= f * b[pk];
    }
  }

  Vector x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t pk = perm[k];
    double s = b[pk];
    for (std::size_t c = k + 1; c < n; ++c) s -= m(pk, c) * x[c];
    x[k] = s / m(pk, k);
  }
  return x;
}

std::size_t affine_rank(const std::vector<Vector>& points) {
  if (points.empty()) return 0;
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw DimensionError("affine_rank: points of unequal dimension");
  }
  AffineSpan span(dim);
  for (const auto& p : points) {
    span.push(p);
    if (span.rank() == dim) break;
  }
  return span.rank();
}

Hyperplane hyperplane_through(const std::vector<Vector>& points) {
  if (points.empty()) throw DimensionError("hyperplane_through: no points");
  const std::size_t n = points.front().size();
  if (points.size() != n) throw DimensionError("hyperplane_through: need exactly n points in R^n");
  AffineSpan span(n);
  for (const auto& p : points) {
    if (p.size() != n) throw DimensionError("hyperplane_through: points of unequal dimension");
    if (!span.push(p)) throw DegenerateError("hyperplane_through: points are affinely dependent");
  }
  Hyperplane h;
  h.normal = span.normal();
  h.offset = dot(h.normal, points.front());
  return h;
}

AffineSpan::AffineSpan(std::size_t dim, double tol)
    : dim_(dim), tol_(tol), origin_(dim, 0.0), scratch_(dim, 0.0) {
  rows_.reserve(dim * dim);
  pivots_.reserve(dim);
}

bool AffineSpan::push(std::span<const double> p) {
  if (p.size() != dim_) throw DimensionError("AffineSpan::push: dimension mismatch");
  if (count_ == 0) {
    std::copy(p.begin(), p.end(), origin_.begin());
    count_ = 1;
    return true;
  }
  const std::size_t r = rank();
  if (r >= dim_) return false;

  double* d = scratch_.data();
  for (std::size_t c = 0; c < dim_; ++c) d[c] = p[c] - origin_[c];
  const double scale = std::max(1.0, norm_inf({d, dim_}));
  for (std::size_t k = 0; k < r; ++k) {
    const double f = d[pivots_[k]];
    if (f == 0.0) continue;
    const double* row = rows_.data() + k * dim_;
    for (std::size_t c = 0; c < dim_; ++c) d[c] -= f * row[c];
    d[pivots_[k]] = 0.0;
  }
  std::size_t piv = 0;
  double best = -1.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    const double v = std::abs(d[c]);
    if (v > best) {
      best = v;
      piv = c;
    }
  }
  if (best <= tol_ * scale) return false;

  const double inv = 1.0 / d[piv];
  rows_.resize((r + 1) * dim_);
  double* row = rows_.data() + r * dim_;
  for (std::size_t c = 0; c < dim_; ++c) row[c] = d[c] * inv;
  row[piv] = 1.0;
  pivots_.push_back(piv);
  ++count_;
  return true;
}

void AffineSpan::pop() {
  if (count_ == 0) return;
  if (count_ > 1) {
    pivots_.pop_back();
    rows_.resize(pivots_.size() * dim_);
  }
  --count_;
}

void AffineSpan::clear() {
  count_ = 0;
  rows_.clear();
  pivots_.clear();
}

Vector AffineSpan::normal() const {
  Vector out(dim_);
  normal_into(out);
  return out;
}

void AffineSpan::normal_into(std::span<double> x) const {
  if (dim_ == 0 || rank() + 1 != dim_ || x.size() != dim_) {
    throw DegenerateError("AffineSpan::normal requires rank == dim - 1");
  }
  // Each row k is zero in the pivot columns of rows 0..k-1, so back-substitution
  // from the last row determines the pivot coordinates given x_free = 1.
  std::size_t free_col = 0;
  {
    auto& used = scratch_;
    std::fill(used.begin(), used.end(), 0.0);
    for (std::size_t pc : pivots_) used[pc] = 1.0;
    while (free_col < dim_ && used[free_col] != 0.0) ++free_col;
  }
  std::fill(x.begin(), x.end(), 0.0);
  x[free_col] = 1.0;
  for (std::size_t k = pivots_.size(); k-- > 0;) {
    const double* row = rows_.data() + k * dim_;
    double s = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
      if (c != pivots_[k]) s += row[c] * x[c];
    }
    x[pivots_[k]] = -s;
  }
  const double len = norm2({x.data(), x.size()});
  for (auto& v : x) v /= len;
}

}  // namespace hullkit
