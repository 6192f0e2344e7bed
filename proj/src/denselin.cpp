#include "egr/denselin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egr/error.hpp"

namespace egr {

namespace {

double off_diag_frob(const std::vector<double>& a, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(2.0 * s);
}

}  // namespace

EigDecomposition eigh(const SymMatrix& sym) {
  const int n = sym.order();
  std::vector<double> a(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = sym(i, j);

  Matrix v = Matrix::identity(n);
  double norm_f = 0;
  for (double x : a) norm_f += x * x;
  norm_f = std::sqrt(norm_f);
  const double stop = 1e-14 * norm_f;

  bool converged = (norm_f == 0.0) || (n < 2);
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    if (off_diag_frob(a, n) <= stop) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j == p || j == q) continue;
          const double ajp = a[j * n + p];
          const double ajq = a[j * n + q];
          a[j * n + p] = a[p * n + j] = ajp - s * (ajq + tau * ajp);
          a[j * n + q] = a[q * n + j] = ajq + s * (ajp - tau * ajq);
        }
        for (int j = 0; j < n; ++j) {
          const double vjp = v(j, p);
          const double vjq = v(j, q);
          v(j, p) = vjp - s * (vjq + tau * vjp);
          v(j, q) = vjq + s * (vjp - tau * vjq);
        }
      }
    }
  }
  if (!converged && off_diag_frob(a, n) > stop)
    throw Error(Errc::NoConvergence, "Jacobi sweep cap reached");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a[i * n + i] < a[j * n + j]; });

  EigDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double CholeskyFactor::log_det() const {
  double s = 0;
  for (int i = 0; i < l_.rows(); ++i) s += std::log(l_(i, i));
  return 2.0 * s;
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  const int n = l_.rows();
  std::vector<double> y(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    double acc = y[i];
    for (int k = 0; k < i; ++k) acc -= l_(i, k) * y[k];
    y[i] = acc / l_(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = y[i];
    for (int k = i + 1; k < n; ++k) acc -= l_(k, i) * y[k];
    y[i] = acc / l_(i, i);
  }
  return y;
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
  Matrix x(b.rows(), b.cols());
  std::vector<double> col(b.rows());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    std::vector<double> sol = solve(col);
    for (int i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
  }
  return x;
}

std::optional<CholeskyFactor> try_cholesky(const SymMatrix& a) {
  const int n = a.order();
  Matrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = a(i, j);
      for (int k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(acc > 0.0)) return std::nullopt;
        l(i, i) = std::sqrt(acc);
      } else {
        l(i, j) = acc / l(j, j);
      }
    }
  }
  return CholeskyFactor(std::move(l));
}

Matrix solve_spd(const SymMatrix& a, const Matrix& rhs) {
  auto chol = try_cholesky(a);
  if (!chol) throw Error(Errc::NotPositiveDefinite, "nonpositive pivot in Cholesky");
  return chol->solve(rhs);
}

SvdResult svd(const Matrix& a) {
  const bool transposed = a.rows() < a.cols();
  Matrix w = transposed ? transpose(a) : a;
  const int rows = w.rows();
  const int cols = w.cols();
  Matrix v = Matrix::identity(cols);

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < cols - 1; ++i) {
      for (int j = i + 1; j < cols; ++j) {
        double alpha = 0, beta = 0, gamma = 0;
        for (int r = 0; r < rows; ++r) {
          const double wi = w(r, i), wj = w(r, j);
          alpha += wi * wi;
          beta += wj * wj;
          gamma += wi * wj;
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int r = 0; r < rows; ++r) {
          const double wi = w(r, i), wj = w(r, j);
          w(r, i) = c * wi - s * wj;
          w(r, j) = s * wi + c * wj;
        }
        for (int r = 0; r < cols; ++r) {
          const double vi = v(r, i), vj = v(r, j);
          v(r, i) = c * vi - s * vj;
          v(r, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(cols);
  for (int j = 0; j < cols; ++j) {
    double s = 0;
    for (int r = 0; r < rows; ++r) s += w(r, j) * w(r, j);
    sigma[j] = std::sqrt(s);
  }

  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return sigma[i] > sigma[j]; });

  SvdResult out;
  out.sigma.resize(cols);
  out.u = Matrix(rows, cols);
  out.v = Matrix(cols, cols);
  for (int k = 0; k < cols; ++k) {
    const int src = order[k];
    out.sigma[k] = sigma[src];
    const double inv = sigma[src] > 0 ? 1.0 / sigma[src] : 0.0;
    for (int r = 0; r < rows; ++r) out.u(r, k) = w(r, src) * inv;
    for (int r = 0; r < cols; ++r) out.v(r, k) = v(r, src);
  }
  if (transposed) {
    std::swap(out.u, out.v);
    // v currently spans only range(a'); complete it to a full orthonormal
    // basis so trailing columns expose the nullspace of a wide matrix.
    const int full = rows;  // columns of the original a
    Matrix v_full(full, full);
    for (int i = 0; i < full; ++i)
      for (int j = 0; j < cols; ++j) v_full(i, j) = out.v(i, j);
    int have = cols;
    for (int cand = 0; cand < full && have < full; ++cand) {
      std::vector<double> dir(full, 0.0);
      dir[cand] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < have; ++j) {
          double proj = 0;
          for (int i = 0; i < full; ++i) proj += dir[i] * v_full(i, j);
          for (int i = 0; i < full; ++i) dir[i] -= proj * v_full(i, j);
        }
      }
      double norm = 0;
      for (double x : dir) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-8) continue;
      for (int i = 0; i < full; ++i) v_full(i, have) = dir[i] / norm;
      ++have;
    }
    out.v = std::move(v_full);
    out.sigma.resize(full, 0.0);
  }
  return out;
}

int numerical_rank(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  SvdResult s = svd(a);
  if (s.sigma.empty() || s.sigma[0] == 0.0) return 0;
  int rank = 0;
  for (double x : s.sigma)
    if (x > tol * s.sigma[0]) ++rank;
  return rank;
}

std::vector<double> lstsq_min_norm(const Matrix& a, std::span<const double> b, double rcond) {
  SvdResult s = svd(a);
  const double cutoff = s.sigma.empty() ? 0.0 : rcond * s.sigma[0];
  std::vector<double> x(a.cols(), 0.0);
  const int k = static_cast<int>(s.sigma.size());
  for (int i = 0; i < k; ++i) {
    if (!(s.sigma[i] > cutoff)) break;
    double proj = 0;  // u_i' b
    for (int r = 0; r < a.rows(); ++r) proj += s.u(r, i) * b[r];
    proj /= s.sigma[i];
    for (int c = 0; c < a.cols(); ++c) x[c] += proj * s.v(c, i);
  }
  return x;
}

int svec_dim(int d) { return d * (d + 1) / 2; }

std::vector<double> svec_pack(const SymMatrix& s) {
  const int d = s.order();
  std::vector<double> out;
  out.reserve(svec_dim(d));
  const double root2 = std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i <= j; ++i) out.push_back(i == j ? s(i, j) : root2 * s(i, j));
  return out;
}

SymMatrix svec_unpack(std::span<const double> v, int d) {
  SymMatrix s(d);
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  int idx = 0;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i <= j; ++i, ++idx) s.at(i, j) = (i == j) ? v[idx] : inv_root2 * v[idx];
  return s;
}

std::vector<double> solve_pd_robust(const SymMatrix& h, std::span<const double> rhs) {
  const int n = h.order();
  std::vector<double> scale(n);
  for (int i = 0; i < n; ++i) {
    const double d = h(i, i);
    scale[i] = d > 0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  SymMatrix hs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) hs.at(i, j) = h(i, j) * scale[i] * scale[j];

  std::vector<double> b(n);
  for (int i = 0; i < n; ++i) b[i] = rhs[i] * scale[i];

  for (double ridge : {0.0, 1e-14, 1e-11, 1e-8}) {
    SymMatrix hr = hs;
    if (ridge > 0)
      for (int i = 0; i < n; ++i) hr.at(i, i) += ridge;
    if (auto chol = try_cholesky(hr)) {
      std::vector<double> y = chol->solve(b);
      for (int i = 0; i < n; ++i) y[i] *= scale[i];
      return y;
    }
  }

  // Last resort: eigenvalue-filtered pseudo-solve keeps the step usable even
  // for numerically indefinite Hessians.
  EigDecomposition e = eigh(hs);
  const double lam_max = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  const double floor_val = std::max(1e-14 * lam_max, 1e-300);
  std::vector<double> y(n, 0.0);
  for (int k = 0; k < n; ++k) {
    const double lam = std::max(e.values[k], floor_val);
    double proj = 0;
    for (int i = 0; i < n; ++i) proj += e.vectors(i, k) * b[i];
    proj /= lam;
    for (int i = 0; i < n; ++i) y[i] += proj * e.vectors(i, k);
  }
  for (int i = 0; i < n; ++i) y[i] *= scale[i];
  return y;
}

}  // namespace egr
