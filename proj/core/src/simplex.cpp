#include "clearnet/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "clearnet/errors.hpp"

// Bounded-variable primal simplex.
//
// Rows are normalized to equalities A x + s = rhs with one slack per row
// whose bounds encode the relation (<=: [0,inf), =: [0,0], >=: (-inf,0]).
// Nonbasic variables sit at a recorded bound value; basic values follow from
// an explicitly maintained basis inverse, rebuilt from scratch periodically
// and after every phase. Phase 1 adds one artificial column per infeasible
// row and minimizes their sum; afterwards the artificials are frozen at zero
// by collapsing their bounds.

namespace clearnet::lp {

namespace {

enum class VarState { AtBound, Basic };

constexpr double kPivotEps = 1e-11;   // smallest acceptable ratio-test pivot
constexpr double kDegenStep = 1e-10;  // step sizes below this count as degenerate

struct Tableau {
  int m = 0;      // rows
  int total = 0;  // structural + slack + artificial columns
  Mat A;          // m x total
  Vec rhs;
  Vec lo, up;
  Vec cost;           // current phase objective (minimization)
  std::vector<VarState> state;
  Vec nbval;          // value of each nonbasic variable
  std::vector<int> basis;  // variable index basic in each row
  Mat binv;
  Vec xb;             // basic variable values
  int pivots_since_refactor = 0;

  Vec nonbasic_values() const {
    Vec x = nbval;
    for (int r = 0; r < m; ++r) x(basis[r]) = 0.0;
    return x;
  }

  void refactor() {
    Mat b(m, m);
    for (int r = 0; r < m; ++r) b.col(r) = A.col(basis[r]);
    Eigen::PartialPivLU<Mat> lu(b);
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-13)
      throw SolverError("simplex: singular basis during refactorization");
    binv = lu.inverse();
    xb = binv * (rhs - A * nonbasic_values());
    pivots_since_refactor = 0;
  }
};

struct PhaseOutcome {
  Status status = Status::Optimal;
  int iterations = 0;
};

PhaseOutcome run_phase(Tableau& t, const Options& opts, bool phase_one, int iter_budget) {
  int iters = 0;
  int degen_streak = 0;
  const int bland_trigger = 3 * t.m + 50;

  while (iters < iter_budget) {
    ++iters;
    const bool bland = degen_streak > bland_trigger;

    // Pricing.
    Vec cb(t.m);
    for (int r = 0; r < t.m; ++r) cb(r) = t.cost(t.basis[r]);
    const Vec y = t.binv.transpose() * cb;

    int enter = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < t.total; ++j) {
      if (t.state[j] == VarState::Basic) continue;
      if (t.lo(j) == t.up(j)) continue;  // fixed (includes frozen artificials)
      const double d = t.cost(j) - t.A.col(j).dot(y);
      int cand_dir = 0;
      if (d < -opts.opt_tol && t.nbval(j) < t.up(j) - 1e-12) {
        cand_dir = +1;  // room above: increase
      } else if (d > opts.opt_tol && t.nbval(j) > t.lo(j) + 1e-12) {
        cand_dir = -1;  // room below: decrease
      }
      if (cand_dir == 0) continue;
      if (bland) {
        enter = j;
        dir = cand_dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        dir = cand_dir;
      }
    }
    if (enter < 0) return {Status::Optimal, iters};

    // Ratio test.
    const Vec w = t.binv * t.A.col(enter);
    double t_max = kInf;
    int leave_row = -1;
    double leave_pivot = 0.0;
    for (int r = 0; r < t.m; ++r) {
      const double delta = dir * w(r);  // basic r moves by -delta per unit step
      const int k = t.basis[r];
      double ratio = kInf;
      if (delta > kPivotEps) {
        if (t.lo(k) > -kInf) ratio = (t.xb(r) - t.lo(k)) / delta;
      } else if (delta < -kPivotEps) {
        if (t.up(k) < kInf) ratio = (t.xb(r) - t.up(k)) / delta;
      }
      if (ratio == kInf) continue;
      ratio = std::max(ratio, 0.0);
      const bool better =
          ratio < t_max - 1e-12 ||
          (ratio < t_max + 1e-12 &&
           (leave_row < 0 ||
            (bland ? t.basis[r] < t.basis[leave_row]
                   : std::abs(w(r)) > std::abs(leave_pivot) + 1e-15)));
      if (better) {
        t_max = ratio;
        leave_row = r;
        leave_pivot = w(r);
      }
    }

    double t_own = kInf;
    if (t.lo(enter) > -kInf && t.up(enter) < kInf) t_own = t.up(enter) - t.lo(enter);

    if (leave_row < 0 && t_own == kInf)
      return {phase_one ? Status::Infeasible : Status::Unbounded, iters};

    if (t_own <= t_max) {
      // Bound flip: the entering variable crosses to its other bound.
      t.xb -= t_own * dir * w;
      t.nbval(enter) = dir > 0 ? t.up(enter) : t.lo(enter);
      degen_streak = t_own <= kDegenStep ? degen_streak + 1 : 0;
      continue;
    }

    // Pivot.
    const double step = t_max;
    const double entering_value = t.nbval(enter) + dir * step;
    t.xb -= step * dir * w;
    const int leaving = t.basis[leave_row];
    t.state[leaving] = VarState::AtBound;
    t.nbval(leaving) = dir * w(leave_row) > 0 ? t.lo(leaving) : t.up(leaving);
    t.basis[leave_row] = enter;
    t.state[enter] = VarState::Basic;
    t.xb(leave_row) = entering_value;

    const double piv = w(leave_row);
    t.binv.row(leave_row) /= piv;
    for (int r = 0; r < t.m; ++r) {
      if (r == leave_row) continue;
      if (w(r) != 0.0) t.binv.row(r) -= w(r) * t.binv.row(leave_row);
    }

    degen_streak = step <= kDegenStep ? degen_streak + 1 : 0;
    if (++t.pivots_since_refactor >= opts.refactor_every) t.refactor();
  }
  return {Status::IterationLimit, iters};
}

}  // namespace

Result solve(const Problem& prob, const Options& opts) {
  const int n = static_cast<int>(prob.c.size());
  const int m = static_cast<int>(prob.A.rows());
  if (prob.A.cols() != n || prob.rhs.size() != m ||
      static_cast<int>(prob.rel.size()) != m || prob.lo.size() != n || prob.up.size() != n)
    throw SolverError("simplex: inconsistent problem dimensions");

  Tableau t;
  t.m = m;
  t.total = n + m;
  t.A = Mat::Zero(m, t.total);
  t.A.leftCols(n) = prob.A;
  t.rhs = prob.rhs;
  t.lo = Vec::Constant(t.total, 0.0);
  t.up = Vec::Constant(t.total, 0.0);
  t.lo.head(n) = prob.lo;
  t.up.head(n) = prob.up;
  for (int r = 0; r < m; ++r) {
    t.A(r, n + r) = 1.0;
    switch (prob.rel[r]) {
      case Rel::LE: t.lo(n + r) = 0.0;  t.up(n + r) = kInf; break;
      case Rel::EQ: t.lo(n + r) = 0.0;  t.up(n + r) = 0.0;  break;
      case Rel::GE: t.lo(n + r) = -kInf; t.up(n + r) = 0.0; break;
    }
  }

  t.state.assign(t.total, VarState::AtBound);
  t.nbval = Vec::Zero(t.total);
  for (int j = 0; j < n; ++j) {
    if (prob.lo(j) > -kInf) t.nbval(j) = prob.lo(j);
    else if (prob.up(j) < kInf) t.nbval(j) = prob.up(j);
    else t.nbval(j) = 0.0;
  }

  // Slack basis; rows whose required slack value violates its bounds get an
  // artificial column carrying the violation.
  t.basis.resize(m);
  Vec slack_need = prob.rhs - prob.A * t.nbval.head(n);
  std::vector<int> art_rows;
  std::vector<double> art_signs;
  for (int r = 0; r < m; ++r) {
    const int s = n + r;
    t.basis[r] = s;
    t.state[s] = VarState::Basic;
    const double v = slack_need(r);
    if (v > t.up(s)) {
      art_rows.push_back(r);
      art_signs.push_back(1.0);
      t.nbval(s) = t.up(s);
    } else if (v < t.lo(s)) {
      art_rows.push_back(r);
      art_signs.push_back(-1.0);
      t.nbval(s) = t.lo(s);
    }
  }

  const int n_art = static_cast<int>(art_rows.size());
  if (n_art > 0) {
    Mat a2 = Mat::Zero(m, t.total + n_art);
    a2.leftCols(t.total) = t.A;
    Vec lo2 = Vec::Constant(t.total + n_art, 0.0);
    Vec up2 = Vec::Constant(t.total + n_art, kInf);
    lo2.head(t.total) = t.lo;
    up2.head(t.total) = t.up;
    Vec nb2 = Vec::Zero(t.total + n_art);
    nb2.head(t.total) = t.nbval;
    for (int k = 0; k < n_art; ++k) {
      const int col = t.total + k;
      const int r = art_rows[k];
      a2(r, col) = art_signs[k];
      // the artificial replaces the slack in the basis
      t.state[t.basis[r]] = VarState::AtBound;
      t.basis[r] = col;
      t.state.push_back(VarState::Basic);
    }
    t.A = std::move(a2);
    t.lo = std::move(lo2);
    t.up = std::move(up2);
    t.nbval = std::move(nb2);
    t.total += n_art;
  }

  t.binv = Mat::Identity(m, m);
  t.refactor();

  Result res;
  int used_iters = 0;

  if (n_art > 0) {
    t.cost = Vec::Zero(t.total);
    t.cost.tail(n_art).setOnes();
    const PhaseOutcome p1 = run_phase(t, opts, /*phase_one=*/true, opts.max_iters);
    used_iters += p1.iterations;
    if (p1.status == Status::IterationLimit) {
      res.status = Status::IterationLimit;
      res.iterations = used_iters;
      return res;
    }
    t.refactor();
    double infeas = 0.0;
    for (int r = 0; r < t.m; ++r)
      if (t.basis[r] >= t.total - n_art) infeas += std::abs(t.xb(r));
    if (p1.status == Status::Infeasible || infeas > opts.feas_tol) {
      res.status = Status::Infeasible;
      res.iterations = used_iters;
      return res;
    }
    // Freeze artificials at zero for phase 2.
    for (int k = t.total - n_art; k < t.total; ++k) {
      t.lo(k) = 0.0;
      t.up(k) = 0.0;
      if (t.state[k] == VarState::AtBound) t.nbval(k) = 0.0;
    }
  }

  t.cost = Vec::Zero(t.total);
  if (prob.sense == Sense::Maximize)
    t.cost.head(n) = -prob.c;
  else
    t.cost.head(n) = prob.c;
  const PhaseOutcome p2 = run_phase(t, opts, /*phase_one=*/false, opts.max_iters - used_iters);
  used_iters += p2.iterations;

  t.refactor();
  Vec x = t.nbval.head(t.total);
  for (int r = 0; r < t.m; ++r) x(t.basis[r]) = t.xb(r);

  res.iterations = used_iters;
  res.x = x.head(n);
  res.objective = prob.c.dot(res.x);
  res.status = p2.status;
  return res;
}

}  // namespace clearnet::lp
