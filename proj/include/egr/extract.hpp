#ifndef EGR_EXTRACT_HPP
#define EGR_EXTRACT_HPP

#include <vector>

#include "egr/denselin.hpp"
#include "egr/eopt.hpp"
#include "egr/graph.hpp"
#include "egr/matrix.hpp"

namespace egr {

/// Eigenspace of the extremal eigenvalue: column-orthonormal basis, all
/// columns orthogonal to the constant vector.
struct Eigenspace {
  double lambda = 0;
  Matrix basis;  // n x d
  int d = 0;
};

/// Coordinate matrix X = U S^{1/2} together with its Gram factor.
struct Realization {
  Matrix x;                      // n x d
  SymMatrix gram;                // d x d PSD factor S
  std::vector<int> active_edges; // edges whose length constraint is met with equality

  double total_variance() const { return frob_norm(x) * frob_norm(x); }
};

/// Groups the eigenvalues of delta within group_tol * (1 + |lambda_star|) of
/// lambda_star and returns an orthonormal basis of their joint eigenspace,
/// re-orthogonalized against the constant vector.
Eigenspace extract_eigenspace(const SymMatrix& delta, double lambda_star, double group_tol = 1e-6);

// Selects the Gram factor S >= 0 of the realization within span(U): edges
// carrying weight get equality constraints q_k' S q_k = phi_k (q_k = U' b_k),
// the rest inequality constraints in the sense-appropriate direction, and the
// trace is extremized. The consistent linear part is solved by SVD; any
// remaining nullspace freedom is resolved by the same log-det barrier
// machinery as the weight solver (with a phase-I search when the
// minimum-norm point is not interior).
SymMatrix refine_gram(const Eigenspace& space, const Graph& g, const LengthSpec& phi,
                      const WeightVector& w_star, Sense sense, double weight_floor = 1e-7);

/// X = U S^{1/2} with the symmetric PSD square root; eigenvalues of S in
/// [-1e-12, 0) are clamped to zero.
Realization build_realization(const Eigenspace& space, const SymMatrix& s);
Realization build_realization(const Eigenspace& space, const SymMatrix& s, const Graph& g,
                              const LengthSpec& phi);

/// Full pipeline from a solver result. On InfeasibleRefinement retries once
/// with group_tol widened 100x (mis-grouped eigenvalue cluster).
Realization extract_realization(const Graph& g, const LengthSpec& phi, const OptResult& result,
                                double group_tol = 1e-6);

}  // namespace egr

#endif
