#ifndef EGR_DENSELIN_HPP
#define EGR_DENSELIN_HPP

#include <optional>
#include <span>
#include <vector>

#include "egr/matrix.hpp"

namespace egr {

/// Full eigendecomposition of a symmetric matrix. values are ascending and
/// vectors holds the matching orthonormal eigenvectors as columns.
struct EigDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi eigensolver. Sweeps until the off-diagonal Frobenius norm
/// drops below 1e-14 * ||A||_F (at most 100 sweeps).
EigDecomposition eigh(const SymMatrix& a);

/// Cholesky factor of a positive definite matrix (lower triangular).
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Matrix l) : l_(std::move(l)) {}

  const Matrix& l() const { return l_; }
  double log_det() const;
  std::vector<double> solve(std::span<const double> b) const;
  Matrix solve(const Matrix& b) const;

 private:
  Matrix l_;
};

/// Returns nullopt on a nonpositive pivot.
std::optional<CholeskyFactor> try_cholesky(const SymMatrix& a);

/// Solves a x = rhs for SPD a; throws NotPositiveDefinite otherwise.
Matrix solve_spd(const SymMatrix& a, const Matrix& rhs);

/// SVD a = u diag(sigma) v^t via one-sided Jacobi rotations. u has
/// min(rows, cols) columns; v is always square cols x cols, with trailing
/// columns spanning the nullspace; sigma has cols entries, descending,
/// zero-padded past min(rows, cols).
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

SvdResult svd(const Matrix& a);

/// Number of singular values above tol * sigma_max (0 for the zero matrix).
int numerical_rank(const Matrix& a, double tol = 1e-8);

/// Minimum-norm least-squares solution of a x = b.
std::vector<double> lstsq_min_norm(const Matrix& a, std::span<const double> b, double rcond = 1e-12);

/// Newton-system solver for barrier steps: diagonal-scaled Cholesky with a
/// ridge escalation, falling back to an eigenvalue-filtered solve. Never
/// throws; intended for nearly positive definite systems.
std::vector<double> solve_pd_robust(const SymMatrix& h, std::span<const double> rhs);

// Scaled symmetric vectorization (off-diagonal entries carry sqrt(2)), so
// <A, B>_F equals the dot product of the packed vectors. Order is
// (0,0), (0,1), (1,1), (0,2), ...
int svec_dim(int d);
std::vector<double> svec_pack(const SymMatrix& s);
SymMatrix svec_unpack(std::span<const double> v, int d);

}  // namespace egr

#endif
