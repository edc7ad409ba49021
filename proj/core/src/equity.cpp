#include "clearnet/equity.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace clearnet {

namespace detail {

Vec equity_bound(const Vec& e, const Mat& pi, const Mat& theta, const Vec& l) {
  const int n = static_cast<int>(e.size());
  if (n == 0) return Vec();
  const Vec z = e + pi.transpose() * l - l;
  const Mat m = Mat::Identity(n, n) - theta.transpose();
  Eigen::PartialPivLU<Mat> lu(m);
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= kSingularPivot)
    throw SolverError("I - Theta' is singular while computing the equity bound K");
  return lu.solve(z.cwiseMax(0.0));
}

namespace {

// Exact solve restricted to the active set S: (I - Theta'_SS) V_S = c_S.
// Returns false if the restricted matrix is singular.
bool solve_active_set(const Mat& theta, const Vec& c, const std::vector<int>& active,
                      Vec* v_out) {
  const int k = static_cast<int>(active.size());
  const int n = static_cast<int>(c.size());
  Vec v = Vec::Zero(n);
  if (k > 0) {
    Mat a(k, k);
    Vec rhs(k);
    for (int r = 0; r < k; ++r) {
      rhs(r) = c(active[r]);
      for (int s = 0; s < k; ++s)
        a(r, s) = (r == s ? 1.0 : 0.0) - theta(active[s], active[r]);
    }
    Eigen::PartialPivLU<Mat> lu(a);
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= kSingularPivot) return false;
    const Vec vs = lu.solve(rhs);
    for (int r = 0; r < k; ++r) v(active[r]) = vs(r);
  }
  *v_out = std::move(v);
  return true;
}

}  // namespace

Vec equity_fixed_point(const Vec& e, const Mat& pi, const Mat& theta, const Vec& l,
                       const Vec& x, double tol, bool from_zero) {
  const int n = static_cast<int>(e.size());
  if (n == 0) return Vec();

  Vec mask(n);
  for (int i = 0; i < n; ++i) mask(i) = std::abs(x(i) - l(i)) <= tol ? 1.0 : 0.0;
  if (mask.sum() == 0.0) return Vec::Zero(n);

  const Vec c = mask.cwiseProduct(e + pi.transpose() * x - l);

  Vec v;
  if (from_zero)
    v = Vec::Zero(n);
  else
    v = equity_bound(e, pi, theta, l).cwiseMax(c.cwiseMax(0.0));
  const int sweep_cap = 10 * n + 100;
  for (int sweep = 0; sweep < sweep_cap; ++sweep) {
    Vec next = (c + mask.cwiseProduct(theta.transpose() * v)).cwiseMax(0.0);
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change <= tol / 10.0) break;
  }

  // Active-set polish: the iteration above pins the sign pattern; solve it
  // exactly and re-derive the pattern until it stabilizes.
  const int polish_cap = n + 8;
  std::vector<int> active;
  active.reserve(n);
  for (int round = 0; round < polish_cap; ++round) {
    active.clear();
    const Vec slack = c + mask.cwiseProduct(theta.transpose() * v);
    for (int i = 0; i < n; ++i)
      if (mask(i) == 1.0 && slack(i) > 0.0) active.push_back(i);

    Vec polished;
    if (!solve_active_set(theta, c, active, &polished))
      throw SolverError("equity fixed point: singular active-set system (unit eigenvalue?)");

    const Vec residual = polished - (c + mask.cwiseProduct(theta.transpose() * polished)).cwiseMax(0.0);
    v = std::move(polished);
    if (residual.cwiseAbs().maxCoeff() <= tol / 10.0) return v;
  }
  throw SolverError("equity fixed point did not converge (spectral radius >= 1?)");
}

}  // namespace detail

EquityProblem make_equity_problem(const FinancialNetwork& net, const Vec& x, double tol) {
  const int n = net.size();
  if (x.size() != n) throw ValidationError("x must have one entry per bank");
  EquityProblem prob;
  prob.mask.resize(n);
  for (int i = 0; i < n; ++i)
    prob.mask(i) = std::abs(x(i) - net.totals()(i)) <= tol ? 1.0 : 0.0;
  const Vec inflow = net.cash() + net.relative_liabilities().transpose() * x;
  prob.affine_signed = prob.mask.cwiseProduct(inflow - x);
  prob.affine_clipped = prob.mask.cwiseProduct(inflow - net.totals());
  prob.coupling = net.holdings() * prob.mask.asDiagonal();
  return prob;
}

Bounds compute_bounds(const FinancialNetwork& net) {
  Bounds b;
  b.K = detail::equity_bound(net.cash(), net.relative_liabilities(), net.holdings(),
                             net.totals());
  b.kappa = b.K.size() > 0 ? b.K.cwiseAbs().maxCoeff() : 0.0;
  const Vec w = net.cash() + net.relative_liabilities().transpose() * net.totals() +
                b.kappa * (net.holdings().transpose() * Vec::Ones(net.size()));
  b.kappa1 = w.cwiseAbs().maxCoeff();
  return b;
}

Vec solve_G(const FinancialNetwork& net, const Vec& x, double tol) {
  const EquityProblem prob = make_equity_problem(net, x, tol);
  const int n = net.size();
  const Mat m = Mat::Identity(n, n) - prob.coupling.transpose();
  Eigen::PartialPivLU<Mat> lu(m);
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= kSingularPivot)
    throw SolverError("I - B' is singular (unit is an eigenvalue of the masked holdings)");
  return lu.solve(prob.affine_signed);
}

Vec solve_Gplus(const FinancialNetwork& net, const Vec& x, double tol) {
  if (x.size() != net.size()) throw ValidationError("x must have one entry per bank");
  return detail::equity_fixed_point(net.cash(), net.relative_liabilities(), net.holdings(),
                                    net.totals(), x, tol, /*from_zero=*/false);
}

Vec solve_Gplus_from_zero(const FinancialNetwork& net, const Vec& x, double tol) {
  if (x.size() != net.size()) throw ValidationError("x must have one entry per bank");
  return detail::equity_fixed_point(net.cash(), net.relative_liabilities(), net.holdings(),
                                    net.totals(), x, tol, /*from_zero=*/true);
}

}  // namespace clearnet
