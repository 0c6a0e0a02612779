#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "circlet/cohomology.hpp"
#include "circlet/errors.hpp"
#include "circlet/filtration.hpp"
#include "circlet/integer_lift.hpp"

namespace circlet {

enum class EdgeWeightRule { PaperDefault, Uniform };
enum class SolverKind { Iterative, DenseSvd };

struct WeightScheme {
  std::vector<double> vertex_weights;  // empty = all ones
  EdgeWeightRule rule = EdgeWeightRule::PaperDefault;
};

struct HarmonicPair {
  std::vector<double> tau;    // per landmark vertex
  std::vector<double> theta;  // aligned with filt.edges
  double residual = 0.0;      // achieved weighted objective
  int iterations = 0;
};

/// Edge cochain (d tau)(i,j) = tau(j) - tau(i), aligned with filt.edges.
inline std::vector<double> coboundary_apply(const std::vector<double>& tau,
                                            const RipsFiltration& filt) {
  std::vector<double> out(filt.edges.size());
  for (std::size_t e = 0; e < filt.edges.size(); ++e)
    out[e] = tau[filt.edges[e].j] - tau[filt.edges[e].i];
  return out;
}

// omega_eps(l,l') = |eps - d(l,l')|_+ at eps = 2*alpha; positive on every
// included edge by the strict filtration convention.
inline std::vector<double> edge_weights(const RipsFiltration& filt,
                                        EdgeWeightRule rule, double epsilon) {
  std::vector<double> w(filt.edges.size(), 1.0);
  if (rule == EdgeWeightRule::PaperDefault)
    for (std::size_t e = 0; e < filt.edges.size(); ++e)
      w[e] = std::max(epsilon - filt.edges[e].diameter, 0.0);
  return w;
}

namespace detail {

// Dense eta vector aligned with filt.edges.
inline std::vector<double> densify(const IntegerCochain& eta,
                                   const RipsFiltration& filt) {
  std::unordered_map<std::uint64_t, double> vals;
  vals.reserve(eta.values.size() * 2);
  const int n = filt.n_vertices;
  for (const auto& ev : eta.values)
    vals[static_cast<std::uint64_t>(ev.i) * n + ev.j] = ev.value;
  std::vector<double> out(filt.edges.size(), 0.0);
  for (std::size_t e = 0; e < filt.edges.size(); ++e) {
    const auto it = vals.find(static_cast<std::uint64_t>(filt.edges[e].i) * n +
                              filt.edges[e].j);
    if (it != vals.end()) out[e] = it->second;
  }
  return out;
}

// LSQR (Paige & Saunders) specialized to the weighted coboundary operator
// A = W^{1/2} d, solving min ||A x - b||_2 matrix-free. Returns iterations.
template <typename ApplyA, typename ApplyAt>
int lsqr(ApplyA&& apply_a, ApplyAt&& apply_at, const std::vector<double>& b,
         std::vector<double>& x, std::size_t rows, double tol, int max_iter) {
  const auto nrm2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return std::sqrt(s);
  };
  const auto scal = [](std::vector<double>& v, double a) {
    for (double& t : v) t *= a;
  };

  std::fill(x.begin(), x.end(), 0.0);
  std::vector<double> u = b;
  double beta = nrm2(u);
  if (beta > 0.0) scal(u, 1.0 / beta);
  std::vector<double> v(x.size(), 0.0);
  apply_at(u, v);
  double alpha = nrm2(v);
  if (alpha == 0.0) return 0;  // A^T b = 0: x = 0 is already optimal
  scal(v, 1.0 / alpha);
  std::vector<double> w = v;
  std::vector<double> tmp_u(rows), tmp_v(x.size());

  double phibar = beta, rhobar = alpha;
  double anorm = 0.0;
  const double bnorm = beta;

  for (int it = 1; it <= max_iter; ++it) {
    // bidiagonalization step
    apply_a(v, tmp_u);
    for (std::size_t r = 0; r < rows; ++r) tmp_u[r] -= alpha * u[r];
    beta = nrm2(tmp_u);
    if (beta > 0.0) {
      scal(tmp_u, 1.0 / beta);
      u = tmp_u;
    }
    apply_at(u, tmp_v);
    for (std::size_t c = 0; c < x.size(); ++c) tmp_v[c] -= beta * v[c];
    alpha = nrm2(tmp_v);
    if (alpha > 0.0) {
      scal(tmp_v, 1.0 / alpha);
      v = tmp_v;
    }
    anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta);

    // orthogonal transformation
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    const double t1 = phi / rho;
    const double t2 = -theta / rho;
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] += t1 * w[k];
      w[k] = v[k] + t2 * w[k];
    }

    // stopping tests: residual small relative to b, or normal-equation
    // residual small relative to ||A|| ||r||
    const double rnorm = phibar;
    const double arnorm = phibar * alpha * std::abs(c);
    if (bnorm == 0.0 || rnorm <= tol * bnorm ||
        (anorm > 0.0 && rnorm > 0.0 && arnorm <= tol * anorm * rnorm) ||
        arnorm == 0.0)
      return it;
  }
  throw convergence_error(
      "lsqr did not converge in " + std::to_string(max_iter) +
      " iterations (final relative normal-equation residual above tolerance)");
}

inline std::vector<int> vertex_components(const RipsFiltration& filt) {
  UnionFind uf(filt.n_vertices);
  for (const auto& e : filt.edges) uf.unite(e.i, e.j);
  std::vector<int> comp(filt.n_vertices);
  for (int v = 0; v < filt.n_vertices; ++v) comp[v] = uf.find(v);
  return comp;
}

}  // namespace detail

// Solve min_tau sum_e w_e (eta + d tau)(e)^2 and set theta = eta + d tau.
// Among minimizers tau is fixed to vertex-weighted mean zero per connected
// component, which both solver paths share, so they agree exactly up to
// numerical tolerance. Vertex weights affect only this tie-break, never theta.
inline HarmonicPair harmonic_smooth(const IntegerCochain& eta,
                                    const RipsFiltration& filt,
                                    const WeightScheme& weights,
                                    SolverKind solver, double tol = 1e-10,
                                    int max_iter = 0) {
  const std::size_t n = filt.n_vertices;
  const std::size_t m = filt.edges.size();

  std::vector<double> vw = weights.vertex_weights;
  if (vw.empty()) vw.assign(n, 1.0);
  if (vw.size() != n)
    throw argument_error("harmonic_smooth: vertex weight count mismatch");
  for (double w : vw)
    if (!(w > 0.0)) throw argument_error("harmonic_smooth: nonpositive vertex weight");

  const std::vector<double> ew = edge_weights(filt, weights.rule, filt.threshold);
  for (double w : ew)
    if (!(w > 0.0)) throw argument_error("harmonic_smooth: nonpositive edge weight");
  std::vector<double> sw(m);
  for (std::size_t e = 0; e < m; ++e) sw[e] = std::sqrt(ew[e]);

  const std::vector<double> eta_dense = detail::densify(eta, filt);

  // b = -W^{1/2} eta ; A = W^{1/2} d
  std::vector<double> b(m);
  for (std::size_t e = 0; e < m; ++e) b[e] = -sw[e] * eta_dense[e];

  HarmonicPair out;
  out.tau.assign(n, 0.0);

  if (solver == SolverKind::Iterative) {
    const auto apply_a = [&](const std::vector<double>& x,
                             std::vector<double>& y) {
      for (std::size_t e = 0; e < m; ++e)
        y[e] = sw[e] * (x[filt.edges[e].j] - x[filt.edges[e].i]);
    };
    const auto apply_at = [&](const std::vector<double>& y,
                              std::vector<double>& x) {
      std::fill(x.begin(), x.end(), 0.0);
      for (std::size_t e = 0; e < m; ++e) {
        const double t = sw[e] * y[e];
        x[filt.edges[e].j] += t;
        x[filt.edges[e].i] -= t;
      }
    };
    if (max_iter <= 0) max_iter = 10 * static_cast<int>(n + m);
    out.iterations =
        detail::lsqr(apply_a, apply_at, b, out.tau, m, tol, max_iter);
  } else {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
    for (std::size_t e = 0; e < m; ++e) {
      A(e, filt.edges[e].i) = -sw[e];
      A(e, filt.edges[e].j) = sw[e];
    }
    Eigen::VectorXd rhs(m);
    for (std::size_t e = 0; e < m; ++e) rhs(e) = b[e];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd x = svd.solve(rhs);
    for (std::size_t v = 0; v < n; ++v) out.tau[v] = x(v);
    out.iterations = 0;
  }

  // vertex-weighted mean zero per connected component
  const std::vector<int> comp = detail::vertex_components(filt);
  std::unordered_map<int, std::pair<double, double>> acc;  // comp -> (sum, weight)
  for (std::size_t v = 0; v < n; ++v) {
    auto& a = acc[comp[v]];
    a.first += vw[v] * out.tau[v];
    a.second += vw[v];
  }
  for (std::size_t v = 0; v < n; ++v)
    out.tau[v] -= acc[comp[v]].first / acc[comp[v]].second;

  out.theta.resize(m);
  const std::vector<double> dtau = coboundary_apply(out.tau, filt);
  out.residual = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    out.theta[e] = eta_dense[e] + dtau[e];
    out.residual += ew[e] * out.theta[e] * out.theta[e];
  }
  return out;
}

}  // namespace circlet
