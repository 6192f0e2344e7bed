#ifndef EGR_MATRIX_HPP
#define EGR_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace egr {

/// Dense row-major matrix of doubles. Sized once; entries mutable.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

  std::span<double> row(int i) { return {d_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
  std::span<const double> row(int i) const {
    return {d_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }

  std::span<const double> data() const { return d_; }
  std::span<double> data() { return d_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> d_;
};

/// Symmetric matrix with packed lower-triangle storage. Both (i,j) and
/// (j,i) address the same cell, so symmetry cannot be violated.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * (n + 1) / 2, 0.0) {}

  static SymMatrix identity(int n) {
    SymMatrix s(n);
    for (int i = 0; i < n; ++i) s.at(i, i) = 1.0;
    return s;
  }

  /// Symmetrizes with (m + m^t)/2; use on products that are symmetric up to roundoff.
  static SymMatrix from_dense(const Matrix& m);

  int order() const { return n_; }

  double operator()(int i, int j) const { return a_[idx(i, j)]; }
  double& at(int i, int j) { return a_[idx(i, j)]; }

  Matrix dense() const;
  std::vector<double> mul(std::span<const double> x) const;
  double trace() const;

 private:
  size_t idx(int i, int j) const {
    if (i < j) { const int t = i; i = j; j = t; }
    return static_cast<size_t>(i) * (i + 1) / 2 + j;
  }

  int n_ = 0;
  std::vector<double> a_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);

double inf_norm(const Matrix& a);
double frob_norm(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace egr

#endif
