#include "egr/matrix.hpp"

#include <cmath>

namespace egr {

SymMatrix SymMatrix::from_dense(const Matrix& m) {
  SymMatrix s(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j <= i; ++j) s.at(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

Matrix SymMatrix::dense() const {
  Matrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

std::vector<double> SymMatrix::mul(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double acc = 0;
    for (int j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

double SymMatrix::trace() const {
  double t = 0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double acc = 0;
    for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

double inf_norm(const Matrix& a) {
  double v = 0;
  for (double x : a.data()) v = std::max(v, std::abs(x));
  return v;
}

double frob_norm(const Matrix& a) {
  double v = 0;
  for (double x : a.data()) v += x * x;
  return std::sqrt(v);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double v = 0;
  for (size_t i = 0; i < a.size(); ++i) v += a[i] * b[i];
  return v;
}

}  // namespace egr
