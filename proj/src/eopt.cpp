#include "egr/eopt.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "egr/denselin.hpp"

// Barrier subproblems, in maximization orientation.
//
//   max sense:  t + mu (log det M + sum_k log w_k),  M = L_w - t J + 11'/n
//   min sense: -t + mu (log det M + sum_k log w_k),  M = t I - L_w
//
// both subject to phi' w = 1. With J = I - 11'/n the max-sense M acts as
// L_w - t I on the complement of 1 and has eigenvalue exactly 1 on 1, so
// M > 0 iff t < lambda_2(L_w); the min-sense M > 0 iff t > lambda_n(L_w).
// The gradient and Hessian use the identities (M^-1 1 = 1 in the max sense)
//
//   d/dw_k log det M = b_k' M^-1 b_k            (max) / -b_k' M^-1 b_k (min)
//   d/dt  log det M = -(tr M^-1 - 1)            (max) /  tr M^-1      (min)
//
// and the centered point at parameter mu carries a duality gap of
// mu * (n + m - 1) (max) or mu * (n + m) (min).

namespace egr {

namespace {

Matrix barrier_matrix(const Graph& g, std::span<const double> w, double t, Sense sense) {
  const int n = g.n();
  Matrix m(n, n);
  if (sense == Sense::max_lambda2) {
    const double shift = (t + 1.0) / n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = shift;
      m(i, i) -= t;
    }
    for (int k = 0; k < g.m(); ++k) {
      const auto [a, b] = g.edge(k);
      m(a, a) += w[k];
      m(b, b) += w[k];
      m(a, b) -= w[k];
      m(b, a) -= w[k];
    }
  } else {
    for (int i = 0; i < n; ++i) m(i, i) = t;
    for (int k = 0; k < g.m(); ++k) {
      const auto [a, b] = g.edge(k);
      m(a, a) -= w[k];
      m(b, b) -= w[k];
      m(a, b) += w[k];
      m(b, a) += w[k];
    }
  }
  return m;
}

std::optional<double> try_objective(const Graph& g, const LengthSpec& phi,
                                    std::span<const double> w, double t, double mu, Sense sense) {
  (void)phi;
  double log_w = 0;
  for (double x : w) {
    if (!(x > 0.0)) return std::nullopt;
    log_w += std::log(x);
  }
  Matrix m = barrier_matrix(g, w, t, sense);
  auto chol = try_cholesky(SymMatrix::from_dense(m));
  if (!chol) return std::nullopt;
  const double sign_t = sense == Sense::max_lambda2 ? 1.0 : -1.0;
  return sign_t * t + mu * (chol->log_det() + log_w);
}

void check_phi(const Graph& g, const LengthSpec& phi) {
  if (phi.size() != g.m())
    throw Error(Errc::LengthMismatch, "phi has " + std::to_string(phi.size()) + " entries for " +
                                          std::to_string(g.m()) + " edges");
  double total = 0;
  for (int k = 0; k < phi.size(); ++k) {
    if (!(phi[k] >= 0.0)) throw Error(Errc::NegativePhi, "phi[" + std::to_string(k) + "]");
    total += phi[k];
  }
  if (!(total > 0.0)) throw Error(Errc::Infeasible, "phi' 1 must be positive");
}

}  // namespace

double barrier_objective(const Graph& g, const LengthSpec& phi, std::span<const double> w,
                         double t, double mu, Sense sense) {
  auto v = try_objective(g, phi, w, t, mu, sense);
  if (!v) throw Error(Errc::NotPositiveDefinite, "(w, t) is not strictly interior");
  return *v;
}

BarrierDerivatives barrier_derivatives(const Graph& g, const LengthSpec& phi,
                                       std::span<const double> w, double t, double mu,
                                       Sense sense) {
  (void)phi;  // the equality constraint enters the step, not the derivatives
  const int n = g.n();
  const int m = g.m();
  double log_w = 0;
  for (double x : w) {
    if (!(x > 0.0)) throw Error(Errc::NotPositiveDefinite, "weights must be strictly positive");
    log_w += std::log(x);
  }

  Matrix mat = barrier_matrix(g, w, t, sense);
  auto chol = try_cholesky(SymMatrix::from_dense(mat));
  if (!chol) throw Error(Errc::NotPositiveDefinite, "barrier matrix not positive definite");
  Matrix minv = chol->solve(Matrix::identity(n));

  // Rows of P are M^-1 b_k; G(k,l) = b_k' M^-1 b_l; r_k = b_k' M^-2 b_k.
  Matrix p(m, n);
  for (int k = 0; k < m; ++k) {
    const auto [a, b] = g.edge(k);
    for (int j = 0; j < n; ++j) p(k, j) = minv(b, j) - minv(a, j);
  }
  Matrix gmat(m, m);
  std::vector<double> r(m, 0.0);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const auto [a, b] = g.edge(l);
      gmat(k, l) = p(k, b) - p(k, a);
    }
    for (int j = 0; j < n; ++j) r[k] += p(k, j) * p(k, j);
  }
  double tr_minv = 0, tr_minv2 = 0;
  for (int i = 0; i < n; ++i) {
    tr_minv += minv(i, i);
    for (int j = 0; j < n; ++j) tr_minv2 += minv(i, j) * minv(i, j);
  }

  BarrierDerivatives out;
  out.grad.resize(m + 1);
  out.hess_neg = SymMatrix(m + 1);

  const bool maxing = sense == Sense::max_lambda2;
  for (int k = 0; k < m; ++k) {
    out.grad[k] = maxing ? mu * (gmat(k, k) + 1.0 / w[k]) : mu * (1.0 / w[k] - gmat(k, k));
    for (int l = 0; l <= k; ++l)
      out.hess_neg.at(k, l) = mu * gmat(k, l) * gmat(k, l);
    out.hess_neg.at(k, k) += mu / (w[k] * w[k]);
    out.hess_neg.at(m, k) = -mu * r[k];
  }
  if (maxing) {
    out.grad[m] = 1.0 - mu * (tr_minv - 1.0);
    out.hess_neg.at(m, m) = mu * (tr_minv2 - 1.0);
    out.objective = t + mu * (chol->log_det() + log_w);
  } else {
    out.grad[m] = -1.0 + mu * tr_minv;
    out.hess_neg.at(m, m) = mu * tr_minv2;
    out.objective = -t + mu * (chol->log_det() + log_w);
  }
  return out;
}

BarrierState initial_state(const Graph& g, const LengthSpec& phi, Sense sense) {
  check_phi(g, phi);
  double total = 0;
  for (int k = 0; k < phi.size(); ++k) total += phi[k];

  BarrierState s;
  s.w.assign(g.m(), 1.0 / total);
  EigDecomposition eig = eigh(laplacian(g, s.w));
  s.t = sense == Sense::max_lambda2 ? 0.5 * eig.values[1] : 1.5 * eig.values.back();
  s.newton_decrement = std::numeric_limits<double>::infinity();
  return s;
}

BarrierState barrier_step(const Graph& g, const LengthSpec& phi, const BarrierState& state,
                          double mu, Sense sense) {
  const int m = g.m();
  BarrierDerivatives d = barrier_derivatives(g, phi, state.w, state.t, mu, sense);

  // Bordered system for the equality phi' w = 1, solved by a Schur
  // complement on the single border row: H d = grad - nu * a with a' d = 0.
  std::vector<double> a(m + 1, 0.0);
  for (int k = 0; k < m; ++k) a[k] = phi[k];
  std::vector<double> d0 = solve_pd_robust(d.hess_neg, d.grad);
  std::vector<double> d1 = solve_pd_robust(d.hess_neg, a);
  const double denom = dot(a, d1);
  const double nu = denom != 0.0 ? dot(a, d0) / denom : 0.0;
  std::vector<double> step(m + 1);
  for (int i = 0; i <= m; ++i) step[i] = d0[i] - nu * d1[i];

  const double decrement2 = std::max(0.0, dot(step, d.grad));

  double alpha = 1.0;
  for (int k = 0; k < m; ++k)
    if (step[k] < 0.0) alpha = std::min(alpha, -0.99 * state.w[k] / step[k]);

  BarrierState next = state;
  const double floor_obj = d.objective - 1e-12 * (1.0 + std::abs(d.objective));
  for (int halving = 0; halving <= 30; ++halving) {
    std::vector<double> w_try(m);
    for (int k = 0; k < m; ++k) w_try[k] = state.w[k] + alpha * step[k];
    const double t_try = state.t + alpha * step[m];
    if (auto obj = try_objective(g, phi, w_try, t_try, mu, sense); obj && *obj >= floor_obj) {
      next.w = std::move(w_try);
      next.t = t_try;
      next.objective = *obj;
      next.newton_decrement = std::sqrt(decrement2);
      next.halvings = halving;
      return next;
    }
    alpha *= 0.5;
  }
  throw Error(Errc::NoConvergence, "barrier line search exhausted 30 halvings");
}

SymMatrix dual_from_barrier(const Graph& g, const LengthSpec& phi, const BarrierState& state,
                            double mu, Sense sense) {
  (void)phi;
  const int n = g.n();
  Matrix mat = barrier_matrix(g, state.w, state.t, sense);
  auto chol = try_cholesky(SymMatrix::from_dense(mat));
  if (!chol) throw Error(Errc::NotPositiveDefinite, "barrier matrix not positive definite");
  Matrix y0 = chol->solve(Matrix::identity(n));

  // Project by J on both sides, then normalize <J, Y> = tr(Y) to one.
  std::vector<double> rowsum(n, 0.0);
  double total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rowsum[i] += y0(i, j);
    total += rowsum[i];
  }
  SymMatrix y(n);
  double tr = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j)
      y.at(i, j) = mu * (y0(i, j) - rowsum[i] / n - rowsum[j] / n + total / (n * static_cast<double>(n)));
    tr += y(i, i);
  }
  if (!(tr > 0.0)) throw Error(Errc::NotPositiveDefinite, "degenerate dual estimate");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) y.at(i, j) /= tr;
  return y;
}

namespace {

// The raw barrier dual mu * M^-1 distributes its mass across the extremal
// eigenspace with O(1e-2) imbalance: the cluster eigenvalues of M sit at
// O(mu) and reflect how far the last iterate is off the central path, which
// double precision cannot reduce below ~1e-10. The polish rebuilds Y inside
// the extremal eigenspace of the final Laplacian and applies a least-squares
// correction so the active dual edge constraints hold at the strong-duality
// value. Falls back to the raw estimate if the correction system is
// inconsistent (mis-grouped eigenspace).
SymMatrix polish_dual(const Graph& g, const LengthSpec& phi, const SymMatrix& y_raw,
                      const EigDecomposition& eig, double lambda,
                      const std::vector<double>& w_star, double weight_floor) {
  const int n = g.n();
  std::vector<int> cluster;
  const double group_tol = 1e-6 * (1.0 + std::abs(lambda));
  for (int i = 1; i < n; ++i)
    if (std::abs(eig.values[i] - lambda) <= group_tol) cluster.push_back(i);
  const int d = static_cast<int>(cluster.size());
  if (d == 0) return y_raw;

  Matrix u(n, d);
  for (int c = 0; c < d; ++c)
    for (int i = 0; i < n; ++i) u(i, c) = eig.vectors(i, cluster[c]);

  // theta_raw = U' Y U
  Matrix yu = matmul(y_raw.dense(), u);
  SymMatrix theta = SymMatrix::from_dense(matmul(transpose(u), yu));

  // Rows: active edges pinned at lambda * phi_k, plus unit trace.
  std::vector<int> active;
  for (int k = 0; k < g.m(); ++k)
    if (w_star[k] > weight_floor) active.push_back(k);
  const int sd = svec_dim(d);
  Matrix rows(static_cast<int>(active.size()) + 1, sd);
  std::vector<double> resid(active.size() + 1);
  for (size_t row = 0; row < active.size(); ++row) {
    const auto [a, b] = g.edge(active[row]);
    std::vector<double> q(d);
    for (int c = 0; c < d; ++c) q[c] = u(b, c) - u(a, c);
    SymMatrix qq(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) qq.at(i, j) = q[i] * q[j];
    std::vector<double> packed = svec_pack(qq);
    double quad = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) quad += q[i] * theta(i, j) * q[j];
    for (int c = 0; c < sd; ++c) rows(static_cast<int>(row), c) = packed[c];
    resid[row] = lambda * phi[active[row]] - quad;
  }
  {
    std::vector<double> eye = svec_pack(SymMatrix::identity(d));
    for (int c = 0; c < sd; ++c) rows(static_cast<int>(active.size()), c) = eye[c];
    resid[active.size()] = 1.0 - theta.trace();
  }

  std::vector<double> delta = svec_pack(svec_unpack(lstsq_min_norm(rows, resid, 1e-7), d));
  std::vector<double> check = matvec(rows, delta);
  for (size_t i = 0; i < resid.size(); ++i)
    if (std::abs(check[i] - resid[i]) > 1e-6 * (1.0 + std::abs(lambda))) return y_raw;

  SymMatrix theta_fix = svec_unpack(delta, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) theta_fix.at(i, j) += theta(i, j);
  if (eigh(theta_fix).values.front() < 0) return y_raw;

  Matrix y_new = matmul(u, matmul(theta_fix.dense(), transpose(u)));
  SymMatrix y = SymMatrix::from_dense(y_new);
  const double tr = y.trace();
  if (!(tr > 0)) return y_raw;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) y.at(i, j) /= tr;
  return y;
}

OptResult solve_impl(const Graph& g, const LengthSpec& phi, const SolverOptions& opts,
                     Sense sense) {
  if (!(opts.mu0 > 0) || !(opts.mu_shrink > 0) || !(opts.mu_shrink < 1) || !(opts.tol_gap > 0) ||
      !(opts.tol_newton > 0))
    throw Error(Errc::BadParam, "invalid solver options");

  const int n = g.n();
  const int m = g.m();
  const double theta = sense == Sense::max_lambda2 ? n + m - 1 : n + m;

  BarrierState state = initial_state(g, phi, sense);
  double mu = opts.mu0;
  bool converged = false;
  std::vector<TraceEntry> trace;

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    // On the last centering the dual estimate mu * M^-1 amplifies any
    // off-center error by 1/mu, so run Newton to its quadratic floor there
    // instead of stopping at tol_newton.
    const bool final_center = mu * theta <= opts.tol_gap;
    const double tol_inner = final_center ? 0.0 : opts.tol_newton;

    int steps = 0;
    for (int inner = 0; inner < opts.max_inner; ++inner) {
      const double prev_obj = steps == 0 ? -std::numeric_limits<double>::infinity()
                                         : state.objective;
      state = barrier_step(g, phi, state, mu, sense);
      ++steps;
      if (0.5 * state.newton_decrement * state.newton_decrement <= tol_inner) break;
      if (steps > 1 && state.objective - prev_obj < 1e-13 * (1.0 + std::abs(state.objective)))
        break;  // stagnation at roundoff level
    }

    EigDecomposition eig = eigh(laplacian(g, state.w));
    const double margin = sense == Sense::max_lambda2 ? eig.values[1] - state.t
                                                      : state.t - eig.values.back();
    trace.push_back({state.t, mu, steps, margin});

    if (final_center) {
      converged = true;
      break;
    }
    mu *= opts.mu_shrink;
  }

  OptResult res;
  res.sense = sense;
  res.t_star = state.t;
  res.mu_final = mu;
  res.trace = std::move(trace);

  // Report sub-floor weights as exact zeros, then restore the normalization.
  res.w_star.w = state.w;
  double scale = 0;
  for (int k = 0; k < m; ++k) {
    if (res.w_star.w[k] <= opts.weight_floor) res.w_star.w[k] = 0.0;
    scale += res.w_star.w[k] * phi[k];
  }
  if (!(scale > 0)) throw Error(Errc::NoConvergence, "all weights fell below the floor");
  for (double& x : res.w_star.w) x /= scale;

  EigDecomposition eig = eigh(laplacian(g, res.w_star));
  res.lambda_star = sense == Sense::max_lambda2 ? eig.values[1] : eig.values.back();

  res.dual_y = polish_dual(g, phi, dual_from_barrier(g, phi, state, mu, sense), eig,
                           res.lambda_star, res.w_star.w, opts.weight_floor);

  if (!converged)
    throw SolveFailure("duality gap " + std::to_string(mu * theta) + " above tolerance after " +
                           std::to_string(opts.max_outer) + " outer iterations",
                       std::move(res));
  return res;
}

}  // namespace

OptResult solve_max_lambda2(const Graph& g, const LengthSpec& phi, const SolverOptions& opts) {
  return solve_impl(g, phi, opts, Sense::max_lambda2);
}

OptResult solve_min_lambdan(const Graph& g, const LengthSpec& phi, const SolverOptions& opts) {
  return solve_impl(g, phi, opts, Sense::min_lambdan);
}

}  // namespace egr
