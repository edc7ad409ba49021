#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clearnet/equity.hpp"
#include "clearnet/network.hpp"
#include "clearnet/simplex.hpp"

namespace clearnet {

/// Strictly positive per-bank objective coefficients for the binary part,
/// the payments, and the equities.
struct ObjectiveWeights {
  Vec f1, f2, f3;

  static ObjectiveWeights unit(int n) {
    return {Vec::Ones(n), Vec::Ones(n), Vec::Ones(n)};
  }
};

/// A mixed integer-linear program over the stacked variables
/// (a[0..n), p[n..2n), V[2n..3n)), with a binary.
struct MilpInstance {
  lp::Sense sense = lp::Sense::Maximize;
  Vec objective;
  Vec lo, up;
  Mat A;
  std::vector<lp::Rel> rel;
  Vec rhs;
  std::vector<int> binaries;  // indices of the a variables
  std::vector<std::string> col_names, row_names;
  int n_banks = 0;
  double kappa = 0.0, kappa1 = 0.0;
};

/// Maximization program whose optimum is the greatest clearing pair:
/// p <= y + a o l, a o l <= x, V <= x - a o l, V <= kappa a,
/// with p in [0,l] and V in [0,kappa].
MilpInstance build_P1(const FinancialNetwork& net, const ObjectiveWeights& weights);

/// Minimization program whose optimum is the least solution of the strict
/// variant of the clearing system:
/// p >= y - kappa1 a, p >= a o l, (1-a) o l + kappa1 a >= y,
/// V >= x - l - kappa(1-a), with p in [0,l] and V in [0,kappa].
MilpInstance build_P2(const FinancialNetwork& net, const ObjectiveWeights& weights);

enum class MilpStatus { Optimal, Infeasible, Unbounded, NodeLimit };

struct MilpSolution {
  MilpStatus status = MilpStatus::Optimal;
  Vec a, p, V;
  double objective = 0.0;
  long nodes = 0;
  // Structural identities of the optimum, filled by the pair extractors.
  std::optional<bool> lemma_p1_indicator;  // a = 1_{p = l}
  std::optional<bool> lemma_p2_indicator;  // a = 1_{y > l}
  std::optional<bool> lemma_p2_min_form;   // p = y ^ l
};

struct BnbOptions {
  long node_limit = 1'000'000;
  double int_tol = 1e-6;
  lp::Options lp;
};

/// Best-first branch and bound over the binary block; branches on the most
/// fractional binary (ties to the lowest index), each node solved cold by the
/// bounded-variable simplex. Zero optimality gap up to the LP tolerances.
MilpSolution solve_milp(const MilpInstance& instance, const BnbOptions& opts = {});

struct MaximalMilpResult {
  ClearingPair pair;
  MilpSolution solution;
};

/// Solves P1, asserts the indicator identity a = 1_{p=l} and the clearing
/// axioms on the optimum (SolverError if either fails), and returns the pair.
MaximalMilpResult maximal_pair_via_milp(const FinancialNetwork& net,
                                        const ObjectiveWeights& weights,
                                        const BnbOptions& opts = {},
                                        double tol = kDefaultTol);

struct MinimalMilpResult {
  ClearingPair pair;
  MilpSolution solution;
  /// True when no bank sits on the boundary y^i = l^i (within tol), in which
  /// case the optimum coincides with the least fixpoint of the all-zeros
  /// regime.
  bool equality_flag = false;
};

/// Solves P2 and asserts its structural identities (a = 1_{y>l}, p = y ^ l).
MinimalMilpResult minimal_pair_via_milp(const FinancialNetwork& net,
                                        const ObjectiveWeights& weights,
                                        const BnbOptions& opts = {},
                                        double tol = kDefaultTol);

/// Writes the instance in fixed MPS format (ROWS/COLUMNS/RHS/BOUNDS with
/// INTORG/INTEND markers around the binary block). Maximization objectives
/// are negated so that external minimizers solve the same problem; a comment
/// records the flip.
void write_mps(const MilpInstance& instance, std::ostream& os,
               const std::string& name = "CLEARNET");

}  // namespace clearnet
