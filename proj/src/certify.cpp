#include "egr/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egr/denselin.hpp"
#include "egr/error.hpp"

namespace egr {

namespace {

double edge_len2(const Matrix& x, const Edge& e) {
  double acc = 0;
  for (int c = 0; c < x.cols(); ++c) {
    const double diff = x(e.head, c) - x(e.tail, c);
    acc += diff * diff;
  }
  return acc;
}

double centered_residual(const Matrix& x) {
  double worst = 0;
  for (int c = 0; c < x.cols(); ++c) {
    double s = 0;
    for (int i = 0; i < x.rows(); ++i) s += x(i, c);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

int eigenspace_dim(const std::vector<double>& values, double lambda, double group_tol,
                   bool skip_kernel) {
  int d = 0;
  const double tol = group_tol * (1.0 + std::abs(lambda));
  for (size_t i = skip_kernel ? 1 : 0; i < values.size(); ++i)
    if (std::abs(values[i] - lambda) <= tol) ++d;
  return d;
}

CertificateReport check_certificate(const Matrix& x, const WeightVector& w, const Graph& g,
                                    const LengthSpec& phi, double tol, double group_tol,
                                    Sense sense) {
  const int n = g.n();
  const int m = g.m();
  if (x.rows() != n || w.size() != m || phi.size() != m)
    throw Error(Errc::DimensionMismatch, "coordinate/weight sizes do not match the graph");

  CertificateReport rep;
  rep.sense = sense;
  auto add = [&rep](std::string name, double residual, double tolerance) {
    rep.conditions.push_back({std::move(name), residual, tolerance, residual <= tolerance});
  };

  double phi_scale = 0;
  for (int k = 0; k < m; ++k) phi_scale = std::max(phi_scale, std::abs(phi[k]));
  const double xf = frob_norm(x);

  add("centered", centered_residual(x), tol * (1.0 + xf));

  double edge_resid = 0;
  for (int k = 0; k < m; ++k) {
    const double len2 = edge_len2(x, g.edge(k));
    const double viol = sense == Sense::max_lambda2 ? len2 - phi[k] : phi[k] - len2;
    edge_resid = std::max(edge_resid, viol);
  }
  add("edge_feasibility", edge_resid, tol * (1.0 + phi_scale));

  double w_min = 0;
  double w_phi = 0;
  for (int k = 0; k < m; ++k) {
    w_min = std::min(w_min, w[k]);
    w_phi += w[k] * phi[k];
  }
  add("weights_nonnegative", -w_min, tol);
  add("weights_normalized", std::abs(w_phi - 1.0), tol);

  EigDecomposition eig = eigh(laplacian(g, w));
  const double lambda = sense == Sense::max_lambda2 ? eig.values[1] : eig.values.back();
  const int d_measured = eigenspace_dim(eig.values, lambda, group_tol, true);
  add("multiplicity", std::abs(d_measured - x.cols()), 0.5);

  const double inv_lambda = lambda > 0 ? 1.0 / lambda : std::numeric_limits<double>::infinity();
  add("variance_matches_eigenvalue", std::abs(xf * xf - inv_lambda), tol * (1.0 + inv_lambda));

  rep.overall = true;
  for (const auto& c : rep.conditions) rep.overall = rep.overall && c.pass;
  return rep;
}

}  // namespace

const CertCondition* CertificateReport::find(std::string_view name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

CertificateReport check_max_certificate(const Matrix& x, const WeightVector& w, const Graph& g,
                                        const LengthSpec& phi, double tol, double group_tol) {
  return check_certificate(x, w, g, phi, tol, group_tol, Sense::max_lambda2);
}

CertificateReport check_min_certificate(const Matrix& x, const WeightVector& w, const Graph& g,
                                        const LengthSpec& phi, double tol, double group_tol) {
  return check_certificate(x, w, g, phi, tol, group_tol, Sense::min_lambdan);
}

CertificateReport check_kkt(const OptResult& result, const Graph& g, const LengthSpec& phi,
                            double tol) {
  const int n = g.n();
  const int m = g.m();
  const WeightVector& w = result.w_star;
  const SymMatrix& y = result.dual_y;
  if (w.size() != m || phi.size() != m || y.order() != n)
    throw Error(Errc::DimensionMismatch, "result does not match the graph");

  CertificateReport rep;
  rep.sense = result.sense;
  auto add = [&rep](std::string name, double residual, double tolerance) {
    rep.conditions.push_back({std::move(name), residual, tolerance, residual <= tolerance});
  };
  const bool maxing = result.sense == Sense::max_lambda2;

  double w_min = 0, w_phi = 0;
  for (int k = 0; k < m; ++k) {
    w_min = std::min(w_min, w[k]);
    w_phi += w[k] * phi[k];
  }
  add("primal_nonneg", -w_min, tol);
  add("primal_normalized", std::abs(w_phi - 1.0), tol);

  EigDecomposition eig = eigh(laplacian(g, w));
  const double lambda = maxing ? eig.values[1] : eig.values.back();
  add("primal_sdp", maxing ? std::max(0.0, result.t_star - lambda)
                           : std::max(0.0, lambda - result.t_star),
      tol);

  EigDecomposition eig_y = eigh(y);
  add("dual_psd", std::max(0.0, -eig_y.values.front()), tol);

  // <J, Y> = tr(Y) - 1'Y1/n and the gauge condition 1'Y1 = 0.
  double ones_y_ones = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ones_y_ones += y(i, j);
  add("dual_normalization", std::abs(y.trace() - ones_y_ones / n - 1.0), tol);
  add("dual_gauge", std::abs(ones_y_ones), tol);

  // Edge conditions against the strong-duality value lambda, and the best
  // attainable dual objective from Y for the gap.
  double edge_resid = 0;
  double slack_comp = 0;
  double ratio = maxing ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const auto [a, b] = g.edge(k);
    const double quad = y(a, a) + y(b, b) - 2.0 * y(a, b);
    const double slack = maxing ? quad - lambda * phi[k] : lambda * phi[k] - quad;
    edge_resid = std::max(edge_resid, slack);
    if (w[k] > 0) slack_comp = std::max(slack_comp, std::abs(w[k] * slack));
    if (phi[k] > 0) ratio = maxing ? std::max(ratio, quad / phi[k]) : std::min(ratio, quad / phi[k]);
  }
  add("dual_edge_feasibility", edge_resid, tol);
  add("complementary_slackness", slack_comp, tol);
  add("duality_gap", std::isfinite(ratio) ? std::abs(result.t_star - ratio)
                                          : std::abs(result.t_star - lambda),
      tol);

  rep.overall = true;
  for (const auto& c : rep.conditions) rep.overall = rep.overall && c.pass;
  return rep;
}

RegularityResult is_regular(const Matrix& x, const Graph& g, double tol) {
  const int n = g.n();
  const int m = g.m();
  const int d = x.cols();
  if (x.rows() != n) throw Error(Errc::DimensionMismatch, "coordinate rows differ from n");

  // Column k is the flattening of b_k b_k' X; full column rank means no
  // nonzero w annihilates X under L_w.
  Matrix k_mat(n * d, m);
  for (int k = 0; k < m; ++k) {
    const auto [a, b] = g.edge(k);
    for (int c = 0; c < d; ++c) {
      const double y = x(b, c) - x(a, c);
      k_mat(b * d + c, k) = y;
      k_mat(a * d + c, k) = -y;
    }
  }

  RegularityResult out;
  SvdResult dec = svd(k_mat);
  const double sig_max = dec.sigma.empty() ? 0.0 : dec.sigma[0];
  int rank = 0;
  for (double s : dec.sigma)
    if (s > tol * sig_max) ++rank;
  out.regular = (sig_max > 0.0) && rank == m;
  if (out.regular) return out;

  out.witness.resize(m);
  for (int k = 0; k < m; ++k) out.witness[k] = dec.v(k, m - 1);
  std::vector<double> lx((static_cast<size_t>(n)) * d, 0.0);
  for (int k = 0; k < m; ++k) {
    const auto [a, b] = g.edge(k);
    for (int c = 0; c < d; ++c) {
      const double y = x(b, c) - x(a, c);
      lx[static_cast<size_t>(b) * d + c] += out.witness[k] * y;
      lx[static_cast<size_t>(a) * d + c] -= out.witness[k] * y;
    }
  }
  for (double v : lx) out.witness_residual = std::max(out.witness_residual, std::abs(v));
  return out;
}

double weak_duality_gap(const Matrix& x, const WeightVector& w, const Graph& g,
                        const LengthSpec& phi) {
  const int n = g.n();
  const int m = g.m();
  if (x.rows() != n || w.size() != m || phi.size() != m)
    throw Error(Errc::DimensionMismatch, "inputs do not match the graph");

  const double feas_tol = 1e-7;
  if (centered_residual(x) > feas_tol * (1.0 + frob_norm(x)))
    throw Error(Errc::InfeasibleInput, "realization is not centered");
  for (int k = 0; k < m; ++k)
    if (edge_len2(x, g.edge(k)) > phi[k] + feas_tol)
      throw Error(Errc::InfeasibleInput, "edge " + std::to_string(k) + " exceeds its length bound");
  double w_phi = 0;
  for (int k = 0; k < m; ++k) {
    if (w[k] < -feas_tol) throw Error(Errc::InfeasibleInput, "negative weight");
    w_phi += w[k] * phi[k];
  }
  if (std::abs(w_phi - 1.0) > feas_tol)
    throw Error(Errc::InfeasibleInput, "weights are not normalized");

  EigDecomposition eig = eigh(laplacian(g, w));
  const double xf = frob_norm(x);
  return 1.0 / eig.values[1] - xf * xf;
}

}  // namespace egr
