#pragma once

#include <vector>

#include "clearnet/network.hpp"

namespace clearnet {

/// One elimination step's bookkeeping, enough to recover the eliminated
/// bank's payment by back-substitution.
struct EliminationRecord {
  int bank = -1;               // original index of the eliminated bank
  std::vector<int> remaining;  // original indices aligned with R, T, M
  double pivot = 0.0;          // diagonal relative-liability entry
  double e1 = 0.0;             // the bank's cash
  double scale = 0.0;          // alpha / (1 - alpha * pivot)
  Vec R;                       // the bank's outgoing debt shares
  Vec T;                       // incoming debt shares owed to the bank
  Vec M;                       // equity shares the bank holds in the others
  bool degenerate = false;     // alpha * pivot = 1 branch: payment fixed at l
  double fixed_payment = 0.0;  // payment recorded in the degenerate branch
};

/// The state of the dimension-reduction solve: current coefficients over the
/// remaining banks plus the log needed to rebuild eliminated payments.
/// Requires equal charge parameters and max holdings row sum < 1; both are
/// preserved by every elimination (the reduced relative liabilities stay
/// substochastic).
struct ReducedSystem {
  Vec e, l;
  Mat pi, theta;
  double alpha = 1.0;
  std::vector<int> orig_index;
  std::vector<EliminationRecord> log;

  int dimension() const { return static_cast<int>(e.size()); }
  double max_pi_row_sum() const;
  double theta_inf_norm() const;

  static ReducedSystem from_network(const FinancialNetwork& net);
};

struct SolvencyCheck {
  bool holds = false;
  int violating_index = -1;  // position in the current system; -1 when holds
};

/// Whether full payment clears the current system: e + Pi'l + Theta'H(l) >= l
/// componentwise (within tol). Returns the smallest violating position
/// otherwise.
SolvencyCheck full_payment_check(const ReducedSystem& sys, double tol = kDefaultTol);

/// Removes a violating bank (position i in the current system), folding its
/// linear payment expression into the remaining coefficients. Throws
/// PreconditionError if i is out of range or the bank is not violating.
ReducedSystem eliminate(const ReducedSystem& sys, int i, double tol = kDefaultTol);

/// Per-step diagnostics of a full run.
struct GaussianTrace {
  int eliminations = 0;
  bool degenerate_taken = false;
  std::vector<double> pi_row_sum_max;  // after each elimination
  std::vector<double> theta_norm;
};

/// The greatest clearing pair by repeated elimination: while full payment
/// fails, eliminate the smallest violating bank; then back-substitute the log
/// in reverse. The result is checked against the clearing axioms before it is
/// returned. Requires alpha = beta = gamma and max holdings row sum < 1.
ClearingPair gaussian_max_clearing(const FinancialNetwork& net, double tol = kDefaultTol,
                                   GaussianTrace* trace = nullptr);

}  // namespace clearnet
