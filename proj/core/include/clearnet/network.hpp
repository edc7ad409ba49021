#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "clearnet/errors.hpp"

namespace clearnet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Absolute tolerance on money amounts, applied with one convention
/// everywhere: "p^i = l^i" means |p^i - l^i| <= tol, "x^i < l^i" means
/// x^i < l^i - tol (ties count as solvent).
inline constexpr double kDefaultTol = 1e-9;

/// LU pivot magnitude below which a matrix is treated as singular.
inline constexpr double kSingularPivot = 1e-12;

/// Unvalidated scenario data as read from a file or generator.
struct NetworkData {
  int n = 0;
  Vec cash;         // e, one entry per bank, >= 0
  Mat liabilities;  // L(i,j) = nominal amount bank i owes bank j; zero diagonal
  Mat holdings;     // Theta(i,j) = share of bank i's equity held by bank j
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
};

/// An interbank network with cross-holdings and default charges.
///
/// Derived quantities are computed once at build time: the liability totals
/// l^i = sum_j L(i,j) and the relative liabilities Pi, where row i of Pi is
/// L(i,:)/l^i for indebted banks and the i-th unit vector for debt-free ones,
/// so every row of Pi sums to one. Immutable after construction and safe for
/// concurrent reads.
class FinancialNetwork {
 public:
  /// Validates raw data and derives totals and relative liabilities.
  /// Throws ValidationError on negative entries, nonzero liability diagonal,
  /// holdings row sums above one, numerically singular I - Theta', or charge
  /// parameters outside [0,1].
  static FinancialNetwork build(const NetworkData& raw);

  int size() const { return n_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

  const Vec& cash() const { return cash_; }
  const Mat& liabilities() const { return liabilities_; }
  const Mat& holdings() const { return holdings_; }

  /// Total nominal liabilities l.
  const Vec& totals() const { return totals_; }
  /// Row-stochastic relative liabilities Pi.
  const Mat& relative_liabilities() const { return pi_; }

  /// Largest holdings row sum. The validator only requires row sums <= 1
  /// together with invertibility of I - Theta'; the elimination solver needs
  /// the strict version below.
  double theta_max_row_sum() const { return theta_row_sum_max_; }
  bool theta_inf_norm_lt_one() const { return theta_row_sum_max_ < 1.0; }

 private:
  FinancialNetwork() = default;

  int n_ = 0;
  Vec cash_, totals_;
  Mat liabilities_, holdings_, pi_;
  double alpha_ = 1.0, beta_ = 1.0, gamma_ = 1.0;
  double theta_row_sum_max_ = 0.0;
};

/// Total assets x(p, V) = e + Pi'p + Theta'V.
Vec assets_x(const FinancialNetwork& net, const Vec& p, const Vec& V);

/// Assets after default charges y(p, V) = alpha e + beta Pi'p + gamma Theta'V.
Vec assets_y(const FinancialNetwork& net, const Vec& p, const Vec& V);

/// A candidate clearing pair: payments p, equities V, and the implied default
/// indicator d^i = 1 iff x^i(p,V) < l^i - tol.
struct ClearingPair {
  Vec p;
  Vec V;
  Eigen::VectorXi d;
};

ClearingPair make_clearing_pair(const FinancialNetwork& net, Vec p, Vec V,
                                double tol = kDefaultTol);

/// Which branch of the absolute priority rule a bank's payment matched.
enum class PriorityBranch { FullPayment, ChargedAssets, None };

/// Per-bank audit of the three clearing rules. `overall` is true iff every
/// bank passes all three checks.
struct AxiomReport {
  struct BankCheck {
    bool limited_liability = false;
    double liability_residual = 0.0;  // p - x; positive means violation
    bool absolute_priority = false;
    PriorityBranch branch = PriorityBranch::None;
    double priority_residual = 0.0;  // distance to the nearer branch
    bool equity_ok = false;
    double equity_residual = 0.0;  // V - (x - p) if paying in full, else V
  };
  std::vector<BankCheck> banks;
  bool overall = false;
};

/// Checks the three rules at tolerance tol:
///   1. limited liability: p <= x(p,V);
///   2. absolute priority: per bank, p^i = l^i or p^i = y^i(p,V), with
///      0 <= p <= l enforced as part of the rule;
///   3. equity evaluation: V^i = x^i - p^i when p^i = l^i, else V^i = 0,
///      with V >= 0 enforced.
/// Never throws on rule failures; the report carries them.
AxiomReport verify_clearing_pair(const FinancialNetwork& net,
                                 const ClearingPair& pair,
                                 double tol = kDefaultTol);

}  // namespace clearnet
