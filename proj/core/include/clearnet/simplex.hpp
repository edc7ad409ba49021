#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace clearnet::lp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Rel { LE, EQ, GE };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

/// A linear program over bounded variables: optimize c'x subject to
/// A x {<=,=,>=} rhs and lo <= x <= up (entries of lo/up may be infinite).
struct Problem {
  Sense sense = Sense::Minimize;
  Vec c;
  Mat A;
  std::vector<Rel> rel;
  Vec rhs;
  Vec lo;
  Vec up;
};

struct Options {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  int max_iters = 50000;
  int refactor_every = 50;
};

struct Result {
  Status status = Status::Optimal;
  Vec x;
  double objective = 0.0;
  int iterations = 0;
};

/// Two-phase bounded-variable primal simplex with a dense basis inverse,
/// refactorized every Options::refactor_every pivots. Pricing is Dantzig by
/// default and falls back to Bland's rule after a run of degenerate pivots,
/// which guarantees termination.
Result solve(const Problem& prob, const Options& opts = {});

}  // namespace clearnet::lp
