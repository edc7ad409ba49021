#include "clearnet/network.hpp"

#include <cmath>
#include <sstream>

namespace clearnet {

namespace {

std::string at(const char* what, int i) {
  std::ostringstream os;
  os << what << "[" << i << "]";
  return os.str();
}

void require_finite(const Mat& m, const char* name) {
  if (!m.allFinite()) throw ValidationError(std::string(name) + " contains non-finite entries");
}

}  // namespace

FinancialNetwork FinancialNetwork::build(const NetworkData& raw) {
  const int n = raw.n;
  if (n < 1) throw ValidationError("network must contain at least one bank");
  if (raw.cash.size() != n) throw ValidationError("cash must have one entry per bank");
  if (raw.liabilities.rows() != n || raw.liabilities.cols() != n)
    throw ValidationError("liabilities must be an n-by-n matrix");
  if (raw.holdings.rows() != n || raw.holdings.cols() != n)
    throw ValidationError("holdings must be an n-by-n matrix");
  require_finite(raw.liabilities, "liabilities");
  require_finite(raw.holdings, "holdings");
  if (!raw.cash.allFinite()) throw ValidationError("cash contains non-finite entries");

  for (double v : {raw.alpha, raw.beta, raw.gamma}) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("charge parameters alpha, beta, gamma must lie in [0,1]");
  }

  for (int i = 0; i < n; ++i) {
    if (raw.cash(i) < 0.0) throw ValidationError(at("cash", i) + " is negative");
    if (raw.liabilities(i, i) != 0.0) {
      std::ostringstream os;
      os << "liabilities diagonal entry (" << i << "," << i << ") must be zero (self-debt rejected)";
      throw ValidationError(os.str());
    }
    for (int j = 0; j < n; ++j) {
      if (raw.liabilities(i, j) < 0.0) {
        std::ostringstream os;
        os << "liabilities entry (" << i << "," << j << ") is negative";
        throw ValidationError(os.str());
      }
      if (raw.holdings(i, j) < 0.0) {
        std::ostringstream os;
        os << "holdings entry (" << i << "," << j << ") is negative";
        throw ValidationError(os.str());
      }
    }
  }

  double max_row_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = raw.holdings.row(i).sum();
    if (s > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "holdings row " << i << " sums to " << s << " (exceeds 1)";
      throw ValidationError(os.str());
    }
    max_row_sum = std::max(max_row_sum, s);
  }

  // I - Theta' must be invertible (unit must not be an eigenvalue of Theta).
  {
    Mat m = Mat::Identity(n, n) - raw.holdings.transpose();
    Eigen::PartialPivLU<Mat> lu(m);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot <= kSingularPivot) {
      std::ostringstream os;
      os << "I - Theta' is numerically singular (smallest LU pivot " << min_pivot << ")";
      throw ValidationError(os.str());
    }
  }

  FinancialNetwork net;
  net.n_ = n;
  net.cash_ = raw.cash;
  net.liabilities_ = raw.liabilities;
  net.holdings_ = raw.holdings;
  net.alpha_ = raw.alpha;
  net.beta_ = raw.beta;
  net.gamma_ = raw.gamma;
  net.theta_row_sum_max_ = max_row_sum;

  net.totals_ = raw.liabilities.rowwise().sum();
  net.pi_ = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (net.totals_(i) > 0.0) {
      net.pi_.row(i) = raw.liabilities.row(i) / net.totals_(i);
    } else {
      net.pi_(i, i) = 1.0;  // debt-free banks get the unit row
    }
  }
  return net;
}

namespace {

void check_lengths(const FinancialNetwork& net, const Vec& p, const Vec& V) {
  if (p.size() != net.size() || V.size() != net.size())
    throw ValidationError("payment and equity vectors must have one entry per bank");
}

}  // namespace

Vec assets_x(const FinancialNetwork& net, const Vec& p, const Vec& V) {
  check_lengths(net, p, V);
  return net.cash() + net.relative_liabilities().transpose() * p +
         net.holdings().transpose() * V;
}

Vec assets_y(const FinancialNetwork& net, const Vec& p, const Vec& V) {
  check_lengths(net, p, V);
  return net.alpha() * net.cash() +
         net.beta() * (net.relative_liabilities().transpose() * p) +
         net.gamma() * (net.holdings().transpose() * V);
}

ClearingPair make_clearing_pair(const FinancialNetwork& net, Vec p, Vec V, double tol) {
  check_lengths(net, p, V);
  const Vec x = assets_x(net, p, V);
  ClearingPair pair;
  pair.d = Eigen::VectorXi::Zero(net.size());
  for (int i = 0; i < net.size(); ++i)
    pair.d(i) = x(i) < net.totals()(i) - tol ? 1 : 0;
  pair.p = std::move(p);
  pair.V = std::move(V);
  return pair;
}

AxiomReport verify_clearing_pair(const FinancialNetwork& net, const ClearingPair& pair,
                                 double tol) {
  check_lengths(net, pair.p, pair.V);
  const int n = net.size();
  const Vec x = assets_x(net, pair.p, pair.V);
  const Vec y = assets_y(net, pair.p, pair.V);
  const Vec& l = net.totals();

  AxiomReport report;
  report.banks.resize(n);
  report.overall = true;
  for (int i = 0; i < n; ++i) {
    auto& c = report.banks[i];
    const double p_i = pair.p(i);
    const double v_i = pair.V(i);

    c.liability_residual = p_i - x(i);
    c.limited_liability = c.liability_residual <= tol;

    const double dist_full = std::abs(p_i - l(i));
    const double dist_charged = std::abs(p_i - y(i));
    const bool in_range = p_i >= -tol && p_i <= l(i) + tol;
    c.priority_residual = std::min(dist_full, dist_charged);
    if (!in_range) {
      c.absolute_priority = false;
      c.branch = PriorityBranch::None;
    } else if (dist_full <= tol) {
      c.absolute_priority = true;
      c.branch = PriorityBranch::FullPayment;
    } else if (dist_charged <= tol) {
      c.absolute_priority = true;
      c.branch = PriorityBranch::ChargedAssets;
    } else {
      c.absolute_priority = false;
      c.branch = PriorityBranch::None;
    }

    if (dist_full <= tol) {
      c.equity_residual = v_i - (x(i) - p_i);
    } else {
      c.equity_residual = v_i;
    }
    c.equity_ok = std::abs(c.equity_residual) <= tol && v_i >= -tol;

    report.overall = report.overall && c.limited_liability && c.absolute_priority && c.equity_ok;
  }
  return report;
}

}  // namespace clearnet
