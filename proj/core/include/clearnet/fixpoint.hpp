#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "clearnet/equity.hpp"
#include "clearnet/network.hpp"

namespace clearnet {

/// Binary regime vector b: per bank, selects the min-form branch (b^i = 0,
/// payment = y^i ∧ l^i) or the indicator-form branch (b^i = 1, payment = y^i
/// when x^i < l^i, else l^i).
struct RegimeVector {
  std::vector<std::uint8_t> bits;

  static RegimeVector zeros(int n) { return {std::vector<std::uint8_t>(n, 0)}; }
  static RegimeVector ones(int n) { return {std::vector<std::uint8_t>(n, 1)}; }
  /// Bank i gets bit i of idx.
  static RegimeVector from_index(int n, std::uint64_t idx);

  int size() const { return static_cast<int>(bits.size()); }
  bool operator==(const RegimeVector&) const = default;
};

/// Branch map: component i is y^i ∧ l^i when b^i = 0, and y^i d^i + (1-d^i)l^i
/// with d^i = 1_{x^i < l^i - tol} when b^i = 1.
Vec phi_b(const FinancialNetwork& net, const RegimeVector& b, const Vec& p,
          const Vec& V, double tol = kDefaultTol);

/// One-argument map F_b(p) = phi_b(p, H(p)).
Vec eval_F(const FinancialNetwork& net, const RegimeVector& b, const Vec& p,
           double tol = kDefaultTol);

/// Greatest payment vector with p = F_b(p), together with V = H(p).
///
/// Regime-set descent: starting from full payment (l, H(l)), the default set
/// and the positive-equity set are frozen, the resulting linear system is
/// solved exactly, and newly violated banks are refrozen; sets move
/// monotonically, so at most 2n+2 segments occur. When a frozen system is
/// singular or its solution escapes the frozen regime (possible when the
/// recovery rate on interbank claims is 1), the affine segment is instead
/// fast-forwarded by repeated squaring to the first regime crossing.
ClearingPair max_fixpoint(const FinancialNetwork& net, const RegimeVector& b,
                          double tol = kDefaultTol);

/// Least fixed point, by the symmetric ascent from (0, H(0)).
ClearingPair min_fixpoint(const FinancialNetwork& net, const RegimeVector& b,
                          double tol = kDefaultTol);

/// Extremal fixed points of F_b for one regime vector.
struct RegimeFixpoints {
  RegimeVector b;
  ClearingPair minimal;
  ClearingPair maximal;
  bool exists = true;        // guaranteed by Knaster-Tarski once solved
  bool unique_hint = false;  // p_min = p_max within tol
  bool min_verified = false;
  bool max_verified = false;
};

RegimeFixpoints regime_fixpoints(const FinancialNetwork& net, const RegimeVector& b,
                                 double tol = kDefaultTol);

/// All clearing vectors, organized per regime vector.
struct ClearingSet {
  std::vector<RegimeFixpoints> entries;  // indexed by regime (bank i = bit i)
  std::vector<ClearingPair> distinct;    // deduplicated at sup-norm 10*tol
  ClearingPair global_min;               // minimal fixpoint of the all-zeros regime
  ClearingPair global_max;               // maximal fixpoint of the all-ones regime
};

/// Sweeps every b in {0,1}^n. Throws PreconditionError when n > n_cap.
/// threads = 0 picks hardware concurrency; results are ordered by regime
/// index regardless of the thread count.
ClearingSet enumerate_clearing_set(const FinancialNetwork& net, int n_cap = 16,
                                   double tol = kDefaultTol, int threads = 0);

/// (least pair of the all-zeros regime, greatest pair of the all-ones regime):
/// the global extremes of the clearing set.
std::pair<ClearingPair, ClearingPair> extreme_pairs(const FinancialNetwork& net,
                                                    double tol = kDefaultTol);

}  // namespace clearnet
