#include "clearnet/gaussian.hpp"

#include <cmath>
#include <string>

#include "clearnet/equity.hpp"

namespace clearnet {

double ReducedSystem::max_pi_row_sum() const {
  return dimension() == 0 ? 0.0 : pi.rowwise().sum().maxCoeff();
}

double ReducedSystem::theta_inf_norm() const {
  return dimension() == 0 ? 0.0 : theta.rowwise().sum().maxCoeff();
}

ReducedSystem ReducedSystem::from_network(const FinancialNetwork& net) {
  if (net.alpha() != net.beta() || net.alpha() != net.gamma())
    throw PreconditionError("elimination method requires alpha = beta = gamma");
  if (!net.theta_inf_norm_lt_one())
    throw PreconditionError("elimination method requires every holdings row sum < 1");
  ReducedSystem sys;
  sys.e = net.cash();
  sys.l = net.totals();
  sys.pi = net.relative_liabilities();
  sys.theta = net.holdings();
  sys.alpha = net.alpha();
  sys.orig_index.resize(net.size());
  for (int i = 0; i < net.size(); ++i) sys.orig_index[i] = i;
  return sys;
}

SolvencyCheck full_payment_check(const ReducedSystem& sys, double tol) {
  const int m = sys.dimension();
  if (m == 0) return {true, -1};
  const Vec v = detail::equity_fixed_point(sys.e, sys.pi, sys.theta, sys.l, sys.l, tol);
  const Vec assets = sys.e + sys.pi.transpose() * sys.l + sys.theta.transpose() * v;
  for (int i = 0; i < m; ++i)
    if (assets(i) < sys.l(i) - tol) return {false, i};
  return {true, -1};
}

ReducedSystem eliminate(const ReducedSystem& sys, int i, double tol) {
  const int m = sys.dimension();
  if (i < 0 || i >= m)
    throw PreconditionError("eliminate: index " + std::to_string(i) + " out of range");
  {
    const Vec v = detail::equity_fixed_point(sys.e, sys.pi, sys.theta, sys.l, sys.l, tol);
    const Vec assets = sys.e + sys.pi.transpose() * sys.l + sys.theta.transpose() * v;
    if (assets(i) >= sys.l(i) - tol)
      throw PreconditionError("eliminate: bank at position " + std::to_string(i) +
                              " is not violating full payment");
  }

  EliminationRecord rec;
  rec.bank = sys.orig_index[i];
  rec.pivot = sys.pi(i, i);
  rec.e1 = sys.e(i);
  rec.R.resize(m - 1);
  rec.T.resize(m - 1);
  rec.M.resize(m - 1);
  rec.remaining.reserve(m - 1);
  for (int j = 0, k = 0; j < m; ++j) {
    if (j == i) continue;
    rec.remaining.push_back(sys.orig_index[j]);
    rec.R(k) = sys.pi(i, j);
    rec.T(k) = sys.pi(j, i);
    rec.M(k) = sys.theta(j, i);
    ++k;
  }

  ReducedSystem next;
  next.alpha = sys.alpha;
  next.orig_index = rec.remaining;
  next.log = sys.log;
  next.e.resize(m - 1);
  next.l.resize(m - 1);
  next.pi.resize(m - 1, m - 1);
  next.theta.resize(m - 1, m - 1);
  for (int j = 0, r = 0; j < m; ++j) {
    if (j == i) continue;
    next.e(r) = sys.e(j);
    next.l(r) = sys.l(j);
    for (int k = 0, c = 0; k < m; ++k) {
      if (k == i) continue;
      next.pi(r, c) = sys.pi(j, k);
      next.theta(r, c) = sys.theta(j, k);
      ++c;
    }
    ++r;
  }

  const double denom = 1.0 - sys.alpha * rec.pivot;
  if (std::abs(denom) <= 1e-12) {
    // alpha = 1 with a unit diagonal share: the payment is pinned at l.
    rec.degenerate = true;
    rec.fixed_payment = sys.l(i);
    next.e += rec.e1 * rec.R;
  } else {
    rec.scale = sys.alpha / denom;
    next.pi += rec.scale * (rec.T * rec.R.transpose());
    next.theta += rec.scale * (rec.M * rec.R.transpose());
    next.e += (rec.scale * rec.e1) * rec.R;
  }

  if (next.dimension() > 0) {
    if (next.max_pi_row_sum() > 1.0 + 1e-9)
      throw SolverError("elimination broke substochasticity of the debt shares");
    if (next.theta_inf_norm() >= 1.0)
      throw SolverError("elimination pushed a holdings row sum to 1 or above");
  }

  next.log.push_back(std::move(rec));
  return next;
}

ClearingPair gaussian_max_clearing(const FinancialNetwork& net, double tol,
                                   GaussianTrace* trace) {
  ReducedSystem sys = ReducedSystem::from_network(net);
  if (trace) {
    *trace = GaussianTrace{};
    trace->pi_row_sum_max.push_back(sys.max_pi_row_sum());
    trace->theta_norm.push_back(sys.theta_inf_norm());
  }

  while (sys.dimension() > 0) {
    const SolvencyCheck chk = full_payment_check(sys, tol);
    if (chk.holds) break;
    sys = eliminate(sys, chk.violating_index, tol);
    if (trace) {
      ++trace->eliminations;
      trace->degenerate_taken = trace->degenerate_taken || sys.log.back().degenerate;
      trace->pi_row_sum_max.push_back(sys.max_pi_row_sum());
      trace->theta_norm.push_back(sys.theta_inf_norm());
    }
  }

  const int n = net.size();
  Vec p = Vec::Zero(n);
  Vec v = Vec::Zero(n);
  if (sys.dimension() > 0) {
    const Vec v_res =
        detail::equity_fixed_point(sys.e, sys.pi, sys.theta, sys.l, sys.l, tol);
    for (int k = 0; k < sys.dimension(); ++k) {
      p(sys.orig_index[k]) = sys.l(k);
      v(sys.orig_index[k]) = v_res(k);
    }
  }
  for (auto it = sys.log.rbegin(); it != sys.log.rend(); ++it) {
    const EliminationRecord& rec = *it;
    if (rec.degenerate) {
      p(rec.bank) = rec.fixed_payment;
    } else {
      double acc = rec.e1;
      for (std::size_t k = 0; k < rec.remaining.size(); ++k)
        acc += rec.T(k) * p(rec.remaining[k]) + rec.M(k) * v(rec.remaining[k]);
      p(rec.bank) = rec.scale * acc;
    }
    v(rec.bank) = 0.0;
  }

  ClearingPair pair = make_clearing_pair(net, std::move(p), std::move(v), tol);
  if (!verify_clearing_pair(net, pair, std::max(tol, 1e-7)).overall)
    throw SolverError("elimination result failed the clearing axioms");
  return pair;
}

}  // namespace clearnet
