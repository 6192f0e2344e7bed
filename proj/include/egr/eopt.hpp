#ifndef EGR_EOPT_HPP
#define EGR_EOPT_HPP

#include <span>
#include <vector>

#include "egr/error.hpp"
#include "egr/graph.hpp"
#include "egr/matrix.hpp"

namespace egr {

enum class Sense { max_lambda2, min_lambdan };

struct SolverOptions {
  double mu0 = 1.0;          // initial barrier parameter
  double mu_shrink = 0.2;    // factor per outer iteration
  double tol_gap = 1e-8;     // duality-gap stop
  double tol_newton = 1e-10; // inner Newton stop (on decrement^2 / 2)
  int max_outer = 60;
  int max_inner = 50;
  double weight_floor = 1e-7;  // weights at or below this report as exactly zero
};

struct TraceEntry {
  double t = 0;
  double mu = 0;
  int newton_steps = 0;
  double eig_margin = 0;  // lambda_2 - t (max sense) or t - lambda_n (min sense)
};

struct OptResult {
  Sense sense = Sense::max_lambda2;
  WeightVector w_star;
  double lambda_star = 0;  // extremal eigenvalue at w_star
  double t_star = 0;       // final value of the auxiliary variable t
  SymMatrix dual_y;        // scaled dual estimate: PSD, <J,Y> = 1, 1'Y1 = 0
  double mu_final = 0;     // final barrier parameter
  std::vector<TraceEntry> trace;
};

/// Thrown when the barrier method fails to meet tol_gap; carries the best iterate.
class SolveFailure : public Error {
 public:
  SolveFailure(const std::string& what, OptResult best)
      : Error(Errc::NoConvergence, what), best_(std::move(best)) {}
  const OptResult& best() const { return best_; }

 private:
  OptResult best_;
};

/// One interior iterate of the barrier subproblem for fixed mu.
struct BarrierState {
  std::vector<double> w;
  double t = 0;
  double objective = 0;         // barrier objective at (w, t) and the mu last used
  double newton_decrement = 0;  // decrement of the step that produced this state
  int halvings = 0;             // line-search halvings in that step
};

// Maximizes lambda_2(L_w) over {w >= 0, w'phi = 1} through the semidefinite
// formulation {max t : L_w >= t J}, J = I - 11'/n, by path-following on the
// log-det barrier
//   t + mu (log det(L_w - t J + 11'/n) + sum_k log w_k).
// The rank-one term 11'/n fills the Laplacian's kernel direction, so the
// barrier matrix is positive definite exactly when t < lambda_2(L_w).
OptResult solve_max_lambda2(const Graph& g, const LengthSpec& phi, const SolverOptions& opts = {});

/// Minimizes lambda_n(L_w) over the same set via {min t : t I >= L_w} with
/// barrier matrix t I - L_w.
OptResult solve_min_lambdan(const Graph& g, const LengthSpec& phi, const SolverOptions& opts = {});

/// Strictly interior start: w uniform with w'phi = 1, t at half margin.
BarrierState initial_state(const Graph& g, const LengthSpec& phi, Sense sense);

/// One damped Newton step on the equality-constrained barrier subproblem.
/// Keeps w'phi exact via a bordered system, holds interiority with a 0.99
/// fraction-to-boundary rule, and halves the step (at most 30 times) until
/// the barrier objective does not decrease.
BarrierState barrier_step(const Graph& g, const LengthSpec& phi, const BarrierState& state,
                          double mu, Sense sense);

/// Dual matrix estimate mu * M^-1, projected by J on both sides and rescaled
/// so that <J, Y>_F = 1. Projection makes 1'Y1 = 0 exact.
SymMatrix dual_from_barrier(const Graph& g, const LengthSpec& phi, const BarrierState& state,
                            double mu, Sense sense);

/// Barrier objective in maximization orientation (negated for the min sense).
/// Throws NotPositiveDefinite off the interior.
double barrier_objective(const Graph& g, const LengthSpec& phi, std::span<const double> w,
                         double t, double mu, Sense sense);

/// Gradient and negated (positive definite) Hessian of the barrier objective,
/// in variable order (w_0..w_{m-1}, t). Exposed for diagnostics and tests.
struct BarrierDerivatives {
  double objective = 0;
  std::vector<double> grad;
  SymMatrix hess_neg;
};

BarrierDerivatives barrier_derivatives(const Graph& g, const LengthSpec& phi,
                                       std::span<const double> w, double t, double mu,
                                       Sense sense);

}  // namespace egr

#endif
