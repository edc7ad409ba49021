#pragma once

#include <string>
#include <vector>

#include "clearnet/milp.hpp"
#include "clearnet/network.hpp"

namespace clearnet {

/// One solver's answer within a comparison run.
struct MethodResult {
  std::string method;
  bool applicable = true;
  std::string note;  // reason when not applicable
  ClearingPair pair;
  double wall_ms = 0.0;
  long nodes = -1;         // MILP methods
  int eliminations = -1;   // elimination method
};

struct PairwiseDelta {
  std::string first, second;
  double sup = 0.0;  // over payments and equities
};

/// Cross-method comparison: the maximal-pair methods (fixpoint descent, P1,
/// elimination, enumeration) and the minimal-pair methods (fixpoint ascent,
/// P2, enumeration). `agreement` is true iff every pairwise delta between
/// applicable methods is within `agree_tol`.
struct ComparisonReport {
  std::vector<MethodResult> maximal;
  std::vector<MethodResult> minimal;
  std::vector<PairwiseDelta> deltas_max;
  std::vector<PairwiseDelta> deltas_min;
  double agree_tol = 1e-6;
  bool agreement = false;
  bool p2_equality_flag = false;
};

ComparisonReport compare_methods(const FinancialNetwork& net,
                                 const ObjectiveWeights& weights,
                                 double tol = kDefaultTol, double agree_tol = 1e-6,
                                 int enumerate_cap = 16);

}  // namespace clearnet
