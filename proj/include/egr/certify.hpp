#ifndef EGR_CERTIFY_HPP
#define EGR_CERTIFY_HPP

#include <string>
#include <string_view>
#include <vector>

#include "egr/eopt.hpp"
#include "egr/graph.hpp"
#include "egr/matrix.hpp"

namespace egr {

struct CertCondition {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};

/// Per-condition residual report. overall is the conjunction of the passes.
struct CertificateReport {
  Sense sense = Sense::max_lambda2;
  std::vector<CertCondition> conditions;
  bool overall = false;

  const CertCondition* find(std::string_view name) const;
};

// Optimality certificate for a maximal realization: recomputes everything
// from (g, phi, X, w) alone, so a passing report is solver-independent proof.
// Conditions: X centered, edge lengths within phi, w >= 0 with w'phi = 1,
// column count equal to the lambda_2 eigenspace dimension, and
// ||X||_F^2 = 1 / lambda_2(L_w).
CertificateReport check_max_certificate(const Matrix& x, const WeightVector& w, const Graph& g,
                                        const LengthSpec& phi, double tol = 1e-6,
                                        double group_tol = 1e-6);

/// Mirror certificate for minimal realizations (edge lengths at least phi,
/// variance equal to 1 / lambda_n).
CertificateReport check_min_certificate(const Matrix& x, const WeightVector& w, const Graph& g,
                                        const LengthSpec& phi, double tol = 1e-6,
                                        double group_tol = 1e-6);

/// Residuals of the primal/dual optimality system at a solver result:
/// primal feasibility, dual feasibility of Y, complementary slackness
/// (zero-weight edges excluded), and the duality gap |t - mu|.
CertificateReport check_kkt(const OptResult& result, const Graph& g, const LengthSpec& phi,
                            double tol);

struct RegularityResult {
  bool regular = false;
  std::vector<double> witness;   // unit-norm w with L_w X ~= 0 when not regular
  double witness_residual = 0;   // ||L_w X||_inf for the witness
};

/// A coordinate matrix is regular when no nonzero (sign-unrestricted) edge
/// weight vector w satisfies L_w X = 0; equivalently the (n d) x m matrix
/// with columns vec(b_k b_k' X) has full column rank.
RegularityResult is_regular(const Matrix& x, const Graph& g, double tol = 1e-8);

/// 1/lambda_2(L_w) - ||X||_F^2; nonnegative for any feasible pair.
/// Throws InfeasibleInput if either argument violates feasibility beyond 1e-7.
double weak_duality_gap(const Matrix& x, const WeightVector& w, const Graph& g,
                        const LengthSpec& phi);

}  // namespace egr

#endif
