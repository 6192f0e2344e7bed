#include "egr/extract.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "egr/error.hpp"

namespace egr {

namespace {

double quad_form(const SymMatrix& s, std::span<const double> q) {
  double acc = 0;
  const int d = s.order();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += q[i] * s(i, j) * q[j];
  return acc;
}

double min_eigenvalue(const SymMatrix& s) { return eigh(s).values.front(); }

struct RefineProblem {
  int d = 0;
  Sense sense = Sense::max_lambda2;
  SymMatrix s0;                       // particular solution on the equality manifold
  std::vector<SymMatrix> dirs;        // nullspace directions C_j
  std::vector<double> dir_trace;      // tr C_j
  std::vector<std::vector<double>> q_inactive;  // q_k for inactive edges
  std::vector<double> phi_inactive;

  SymMatrix at(std::span<const double> theta) const {
    SymMatrix s = s0;
    for (size_t j = 0; j < dirs.size(); ++j)
      for (int b = 0; b < d; ++b)
        for (int a = 0; a <= b; ++a) s.at(a, b) += theta[j] * dirs[j](a, b);
    return s;
  }

  // Signed slack of inactive edge i at S; interior requires > 0.
  double slack(const SymMatrix& s, size_t i) const {
    const double v = quad_form(s, q_inactive[i]);
    return sense == Sense::max_lambda2 ? phi_inactive[i] - v : v - phi_inactive[i];
  }
};

// Damped Newton maximization of a smooth barrier objective. The callback
// evaluates (objective, grad, -hessian) at theta or reports non-interior.
struct BarrierEval {
  bool interior = false;
  double objective = 0;
  std::vector<double> grad;
  SymMatrix hess_neg;
};

template <typename Eval>
std::vector<double> newton_maximize(std::vector<double> theta, const Eval& eval, double tol_dec,
                                    int max_iter) {
  for (int iter = 0; iter < max_iter; ++iter) {
    BarrierEval e = eval(theta);
    if (!e.interior) throw Error(Errc::InfeasibleRefinement, "refinement iterate left the interior");
    std::vector<double> step = solve_pd_robust(e.hess_neg, e.grad);
    const double dec2 = std::max(0.0, dot(step, e.grad));
    if (0.5 * dec2 <= tol_dec) break;

    double alpha = 1.0;
    bool moved = false;
    const double floor_obj = e.objective - 1e-12 * (1.0 + std::abs(e.objective));
    for (int h = 0; h <= 30; ++h) {
      std::vector<double> trial(theta.size());
      for (size_t i = 0; i < theta.size(); ++i) trial[i] = theta[i] + alpha * step[i];
      BarrierEval t = eval(trial);
      if (t.interior && t.objective >= floor_obj) {
        const double gain = t.objective - e.objective;
        theta = std::move(trial);
        moved = true;
        if (gain < 1e-13 * (1.0 + std::abs(e.objective))) return theta;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) throw Error(Errc::InfeasibleRefinement, "refinement line search stalled");
  }
  return theta;
}

// Searches the equality manifold for a strictly interior point by maximizing
// the least margin s with the same barrier scheme in dimension nu + 1.
std::vector<double> phase_one_interior(const RefineProblem& prob, double margin) {
  const int nu = static_cast<int>(prob.dirs.size());
  const int d = prob.d;
  const size_t n_in = prob.q_inactive.size();

  std::vector<double> x(nu + 1, 0.0);
  {
    SymMatrix s = prob.at(std::span(x).first(nu));
    double least = min_eigenvalue(s);
    for (size_t i = 0; i < n_in; ++i) least = std::min(least, prob.slack(s, i));
    x[nu] = least - 0.1 * (1.0 + std::abs(least));
  }

  double mu = 1.0;
  for (int outer = 0; outer < 40; ++outer) {
    auto eval = [&](std::span<const double> xt) {
      BarrierEval e;
      const double s_val = xt[nu];
      SymMatrix smat = prob.at(xt.first(nu));
      SymMatrix shifted = smat;
      for (int i = 0; i < d; ++i) shifted.at(i, i) -= s_val;
      auto chol = try_cholesky(shifted);
      if (!chol) return e;
      std::vector<double> gaps(n_in);
      for (size_t i = 0; i < n_in; ++i) {
        gaps[i] = prob.slack(smat, i) - s_val;
        if (!(gaps[i] > 0.0)) return e;
      }
      Matrix inv = chol->solve(Matrix::identity(d));

      e.interior = true;
      e.objective = s_val + mu * chol->log_det();
      for (double gap : gaps) e.objective += mu * std::log(gap);
      e.grad.assign(nu + 1, 0.0);
      e.hess_neg = SymMatrix(nu + 1);

      const double sgn = prob.sense == Sense::max_lambda2 ? -1.0 : 1.0;  // d(slack)/dtheta_j = sgn*e_kj
      std::vector<Matrix> w(nu);  // inv * C_j
      std::vector<std::vector<double>> ekj(n_in, std::vector<double>(nu));
      double tr_inv = 0, tr_inv2 = 0;
      for (int i = 0; i < d; ++i) {
        tr_inv += inv(i, i);
        for (int j = 0; j < d; ++j) tr_inv2 += inv(i, j) * inv(i, j);
      }
      for (int j = 0; j < nu; ++j) {
        w[j] = matmul(inv, prob.dirs[j].dense());
        double tr_wj = 0;
        for (int i = 0; i < d; ++i) tr_wj += w[j](i, i);
        e.grad[j] = mu * tr_wj;
        for (size_t i = 0; i < n_in; ++i) {
          ekj[i][j] = quad_form(prob.dirs[j], prob.q_inactive[i]);
          e.grad[j] += mu * sgn * ekj[i][j] / gaps[i];
        }
      }
      e.grad[nu] = 1.0 - mu * tr_inv;
      for (size_t i = 0; i < n_in; ++i) e.grad[nu] -= mu / gaps[i];

      for (int j = 0; j < nu; ++j) {
        for (int l = 0; l <= j; ++l) {
          double tr_jl = 0;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) tr_jl += w[j](a, b) * w[l](b, a);
          double acc = mu * tr_jl;
          for (size_t i = 0; i < n_in; ++i) acc += mu * ekj[i][j] * ekj[i][l] / (gaps[i] * gaps[i]);
          e.hess_neg.at(j, l) = acc;
        }
        double tr_inv2_cj = 0;  // tr(inv^2 C_j) = tr(inv * w_j)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) tr_inv2_cj += inv(a, b) * w[j](b, a);
        double cross = -mu * tr_inv2_cj;
        for (size_t i = 0; i < n_in; ++i) cross -= mu * sgn * ekj[i][j] / (gaps[i] * gaps[i]);
        e.hess_neg.at(nu, j) = cross;
      }
      double ss = mu * tr_inv2;
      for (size_t i = 0; i < n_in; ++i) ss += mu / (gaps[i] * gaps[i]);
      e.hess_neg.at(nu, nu) = ss;
      return e;
    };

    x = newton_maximize(std::move(x), eval, 1e-12, 50);
    if (x[nu] >= margin) return {x.begin(), x.begin() + nu};
    mu *= 0.2;
  }

  // No strictly interior point was reached; hand back the best margin point.
  return {x.begin(), x.begin() + nu};
}

std::vector<double> phase_two_center(const RefineProblem& prob, std::vector<double> theta) {
  const int nu = static_cast<int>(prob.dirs.size());
  const int d = prob.d;
  const size_t n_in = prob.q_inactive.size();
  const double sgn_tr = prob.sense == Sense::max_lambda2 ? 1.0 : -1.0;
  const double sgn_slack = prob.sense == Sense::max_lambda2 ? -1.0 : 1.0;

  double mu = 1.0;
  const double theta_count = d + static_cast<double>(n_in);
  for (int outer = 0; outer < 60; ++outer) {
    auto eval = [&](std::span<const double> xt) {
      BarrierEval e;
      SymMatrix smat = prob.at(xt);
      auto chol = try_cholesky(smat);
      if (!chol) return e;
      std::vector<double> gaps(n_in);
      for (size_t i = 0; i < n_in; ++i) {
        gaps[i] = prob.slack(smat, i);
        if (!(gaps[i] > 0.0)) return e;
      }
      Matrix inv = chol->solve(Matrix::identity(d));

      e.interior = true;
      e.objective = sgn_tr * smat.trace() + mu * chol->log_det();
      for (double gap : gaps) e.objective += mu * std::log(gap);
      e.grad.assign(nu, 0.0);
      e.hess_neg = SymMatrix(nu);

      std::vector<Matrix> w(nu);
      std::vector<std::vector<double>> ekj(n_in, std::vector<double>(nu));
      for (int j = 0; j < nu; ++j) {
        w[j] = matmul(inv, prob.dirs[j].dense());
        double tr_wj = 0;
        for (int i = 0; i < d; ++i) tr_wj += w[j](i, i);
        e.grad[j] = sgn_tr * prob.dir_trace[j] + mu * tr_wj;
        for (size_t i = 0; i < n_in; ++i) {
          ekj[i][j] = quad_form(prob.dirs[j], prob.q_inactive[i]);
          e.grad[j] += mu * sgn_slack * ekj[i][j] / gaps[i];
        }
      }
      for (int j = 0; j < nu; ++j)
        for (int l = 0; l <= j; ++l) {
          double tr_jl = 0;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) tr_jl += w[j](a, b) * w[l](b, a);
          double acc = mu * tr_jl;
          for (size_t i = 0; i < n_in; ++i) acc += mu * ekj[i][j] * ekj[i][l] / (gaps[i] * gaps[i]);
          e.hess_neg.at(j, l) = acc;
        }
      return e;
    };

    theta = newton_maximize(std::move(theta), eval, 1e-12, 50);
    if (mu * theta_count <= 1e-10) break;
    mu *= 0.2;
  }
  return theta;
}

}  // namespace

Eigenspace extract_eigenspace(const SymMatrix& delta, double lambda_star, double group_tol) {
  const int n = delta.order();
  EigDecomposition eig = eigh(delta);
  const double tol_abs = group_tol * (1.0 + std::abs(lambda_star));

  std::vector<int> picked;
  double lambda_sum = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(eig.values[i] - lambda_star) <= tol_abs) {
      picked.push_back(i);
      lambda_sum += eig.values[i];
    }
  }
  if (picked.empty())
    throw Error(Errc::EmptyEigenspace,
                "no eigenvalue within " + std::to_string(tol_abs) + " of target");

  // Deflate the constant direction, then re-orthonormalize (the eigensolver
  // already delivers near-orthogonal columns; this pins U'1 = 0 exactly).
  const int d = static_cast<int>(picked.size());
  Matrix u(n, d);
  for (int c = 0; c < d; ++c) {
    double mean = 0;
    for (int i = 0; i < n; ++i) mean += eig.vectors(i, picked[c]);
    mean /= n;
    for (int i = 0; i < n; ++i) u(i, c) = eig.vectors(i, picked[c]) - mean;
  }
  for (int c = 0; c < d; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      double proj = 0;
      for (int i = 0; i < n; ++i) proj += u(i, c) * u(i, prev);
      for (int i = 0; i < n; ++i) u(i, c) -= proj * u(i, prev);
    }
    double norm = 0;
    for (int i = 0; i < n; ++i) norm += u(i, c) * u(i, c);
    norm = std::sqrt(norm);
    if (!(norm > 1e-8))
      throw Error(Errc::EmptyEigenspace, "eigenspace column collapsed onto the constant vector");
    for (int i = 0; i < n; ++i) u(i, c) /= norm;
  }

  Eigenspace space;
  space.lambda = lambda_sum / d;
  space.basis = std::move(u);
  space.d = d;
  return space;
}

SymMatrix refine_gram(const Eigenspace& space, const Graph& g, const LengthSpec& phi,
                      const WeightVector& w_star, Sense sense, double weight_floor) {
  const int d = space.d;
  const int m = g.m();
  if (w_star.size() != m || phi.size() != m)
    throw Error(Errc::DimensionMismatch, "weights/phi do not match the edge count");

  std::vector<std::vector<double>> q(m, std::vector<double>(d));
  for (int k = 0; k < m; ++k) {
    const auto [a, b] = g.edge(k);
    for (int c = 0; c < d; ++c) q[k][c] = space.basis(b, c) - space.basis(a, c);
  }

  std::vector<int> active, inactive;
  double phi_scale = 1.0;
  for (int k = 0; k < m; ++k) {
    (w_star[k] > weight_floor ? active : inactive).push_back(k);
    phi_scale = std::max(phi_scale, std::abs(phi[k]));
  }
  if (active.empty()) throw Error(Errc::InfeasibleRefinement, "no weighted edge constraints");

  const int sd = svec_dim(d);
  const double root2 = std::sqrt(2.0);
  Matrix r(static_cast<int>(active.size()), sd);
  std::vector<double> rhs(active.size());
  for (size_t row = 0; row < active.size(); ++row) {
    const auto& qk = q[active[row]];
    int idx = 0;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i <= j; ++i, ++idx)
        r(static_cast<int>(row), idx) = (i == j) ? qk[i] * qk[i] : root2 * qk[i] * qk[j];
    rhs[row] = phi[active[row]];
  }

  // The eigenbasis carries noise at the scale of the solver's gap tolerance,
  // which shows up as spurious singular values around 1e-9 * sigma_max. The
  // rank cut has to sit above that floor or the pseudo-inverse amplifies the
  // noise to order one; genuine directions in these systems sit at
  // O(0.1) * sigma_max and are never misclassified.
  constexpr double kRankTol = 1e-7;
  std::vector<double> p = lstsq_min_norm(r, rhs, kRankTol);
  {
    std::vector<double> resid = matvec(r, p);
    double worst = 0;
    for (size_t i = 0; i < rhs.size(); ++i) worst = std::max(worst, std::abs(resid[i] - rhs[i]));
    if (worst > 1e-6 * (1.0 + phi_scale)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", worst);
      throw Error(Errc::InfeasibleRefinement,
                  "equality system inconsistent (residual " + std::string(buf) + ")");
    }
  }

  RefineProblem prob;
  prob.d = d;
  prob.sense = sense;
  prob.s0 = svec_unpack(p, d);
  for (int k : inactive) {
    prob.q_inactive.push_back(q[k]);
    prob.phi_inactive.push_back(phi[k]);
  }

  SvdResult dec = svd(r);
  const double sig_max = dec.sigma.empty() ? 0.0 : dec.sigma[0];
  for (int j = 0; j < sd; ++j) {
    const bool in_null = j >= static_cast<int>(dec.sigma.size()) ||
                         !(dec.sigma[j] > kRankTol * sig_max);
    if (!in_null) continue;
    std::vector<double> col(sd);
    for (int i = 0; i < sd; ++i) col[i] = dec.v(i, j);
    prob.dirs.push_back(svec_unpack(col, d));
    prob.dir_trace.push_back(prob.dirs.back().trace());
  }

  auto verify = [&](const SymMatrix& s) {
    const double scale = 1.0 + std::abs(eigh(s).values.back());
    if (min_eigenvalue(s) < -1e-9 * scale)
      throw Error(Errc::InfeasibleRefinement, "refined factor is not positive semidefinite");
    for (size_t i = 0; i < prob.q_inactive.size(); ++i) {
      const double v = quad_form(s, prob.q_inactive[i]);
      const double viol = sense == Sense::max_lambda2 ? v - prob.phi_inactive[i]
                                                      : prob.phi_inactive[i] - v;
      if (viol > 1e-6 * (1.0 + phi_scale))
        throw Error(Errc::InfeasibleRefinement, "inactive edge constraint violated");
    }
    return s;
  };

  if (prob.dirs.empty()) return verify(prob.s0);

  std::vector<double> theta(prob.dirs.size(), 0.0);
  {
    SymMatrix s = prob.at(theta);
    const double scale = 1.0 + std::abs(eigh(s).values.back());
    bool interior = min_eigenvalue(s) > 1e-8 * scale;
    for (size_t i = 0; interior && i < prob.q_inactive.size(); ++i)
      interior = prob.slack(s, i) > 1e-8 * (1.0 + phi_scale);
    if (!interior) theta = phase_one_interior(prob, 1e-10 * scale);
  }

  {
    SymMatrix s = prob.at(theta);
    bool interior = min_eigenvalue(s) > 0;
    for (size_t i = 0; interior && i < prob.q_inactive.size(); ++i)
      interior = prob.slack(s, i) > 0;
    if (!interior) return verify(s);  // feasible set has empty interior
  }

  theta = phase_two_center(prob, std::move(theta));
  return verify(prob.at(theta));
}

Realization build_realization(const Eigenspace& space, const SymMatrix& s) {
  const int d = space.d;
  EigDecomposition eig = eigh(s);
  Matrix root(d, d);
  for (int k = 0; k < d; ++k) {
    const double lam = eig.values[k] > 0 ? eig.values[k] : 0.0;
    const double sq = std::sqrt(lam);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) root(i, j) += sq * eig.vectors(i, k) * eig.vectors(j, k);
  }

  Realization out;
  out.x = matmul(space.basis, root);
  out.gram = s;
  return out;
}

Realization build_realization(const Eigenspace& space, const SymMatrix& s, const Graph& g,
                              const LengthSpec& phi) {
  Realization out = build_realization(space, s);
  for (int k = 0; k < g.m(); ++k) {
    const auto [a, b] = g.edge(k);
    double len2 = 0;
    for (int c = 0; c < out.x.cols(); ++c) {
      const double diff = out.x(b, c) - out.x(a, c);
      len2 += diff * diff;
    }
    if (std::abs(len2 - phi[k]) <= 1e-7) out.active_edges.push_back(k);
  }
  return out;
}

Realization extract_realization(const Graph& g, const LengthSpec& phi, const OptResult& result,
                                double group_tol) {
  SymMatrix delta = laplacian(g, result.w_star);
  try {
    Eigenspace space = extract_eigenspace(delta, result.lambda_star, group_tol);
    SymMatrix s = refine_gram(space, g, phi, result.w_star, result.sense);
    return build_realization(space, s, g, phi);
  } catch (const Error& e) {
    if (e.code() != Errc::InfeasibleRefinement) throw;
    Eigenspace space = extract_eigenspace(delta, result.lambda_star, group_tol * 100.0);
    SymMatrix s = refine_gram(space, g, phi, result.w_star, result.sense);
    return build_realization(space, s, g, phi);
  }
}

}  // namespace egr
