#pragma once

#include "clearnet/network.hpp"

namespace clearnet {

/// Pieces of the equity fixed-point equations at a given payment vector x:
/// the equality mask Lambda (1 where x^i = l^i within tol), the affine terms
///   a(x) = Lambda o (e + Pi'x - x)   for the signed equation V = a + B'V,
///   c(x) = Lambda o (e + Pi'x - l)   for the clipped one V = (c + B'V)^+,
/// and the coupling B = Theta diag(Lambda), so B'V = Lambda o (Theta'V).
struct EquityProblem {
  Vec mask;
  Vec affine_signed;   // a(x)
  Vec affine_clipped;  // c(x)
  Mat coupling;        // B
};

EquityProblem make_equity_problem(const FinancialNetwork& net, const Vec& x,
                                  double tol = kDefaultTol);

/// A priori bounds on equities: K dominates every H(x) for x in [0,l];
/// kappa = ||K||_inf and kappa1 = ||e + Pi'l + kappa Theta' 1||_inf serve as
/// big-M constants.
struct Bounds {
  Vec K;
  double kappa = 0.0;
  double kappa1 = 0.0;
};

Bounds compute_bounds(const FinancialNetwork& net);

/// Unique solution of the signed equation V = a(x) + B'V, by one LU solve of
/// (I - B')V = a(x). Components may be negative; banks outside the mask get 0.
/// Throws SolverError if I - B' is singular.
Vec solve_G(const FinancialNetwork& net, const Vec& x, double tol = kDefaultTol);

/// Unique nonnegative solution of V = (c(x) + B'V)^+, i.e. H(x).
///
/// Monotone iteration from V0 (= K by default, giving a decreasing sequence)
/// until the sup-norm change drops below tol/10 or the sweep cap 10n+100 is
/// hit, then an active-set polish: fix the sign pattern, solve that linear
/// system exactly, and re-derive the pattern until stable. Non-convergence of
/// the polish signals a spectral radius >= 1 and raises SolverError.
Vec solve_Gplus(const FinancialNetwork& net, const Vec& x, double tol = kDefaultTol);

/// Same, but iterating upward from V0 = 0. Used to confirm uniqueness.
Vec solve_Gplus_from_zero(const FinancialNetwork& net, const Vec& x,
                          double tol = kDefaultTol);

namespace detail {

/// Raw-coefficient form of H for reduced systems, where Pi may be merely
/// substochastic. Solves V = ((e + Pi'x - l) o mask + mask o Theta'V)^+ with
/// mask = 1_{|x - l| <= tol}.
Vec equity_fixed_point(const Vec& e, const Mat& pi, const Mat& theta, const Vec& l,
                       const Vec& x, double tol, bool from_zero = false);

/// K = (I - Theta')^{-1} (e + Pi'l - l)^+ for raw coefficients.
Vec equity_bound(const Vec& e, const Mat& pi, const Mat& theta, const Vec& l);

}  // namespace detail

}  // namespace clearnet
