#include "clearnet/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace clearnet {

namespace {

void check_weights(const FinancialNetwork& net, const ObjectiveWeights& w) {
  const int n = net.size();
  if (w.f1.size() != n || w.f2.size() != n || w.f3.size() != n)
    throw ValidationError("objective weights must have one entry per bank");
  for (int i = 0; i < n; ++i)
    if (w.f1(i) <= 0.0 || w.f2(i) <= 0.0 || w.f3(i) <= 0.0)
      throw ValidationError("objective weights must be strictly positive");
}

MilpInstance common_shell(const FinancialNetwork& net, const ObjectiveWeights& weights) {
  const int n = net.size();
  const Bounds bounds = compute_bounds(net);

  MilpInstance inst;
  inst.n_banks = n;
  inst.kappa = bounds.kappa;
  inst.kappa1 = bounds.kappa1;
  inst.objective.resize(3 * n);
  inst.objective << weights.f1, weights.f2, weights.f3;
  inst.lo = Vec::Zero(3 * n);
  inst.up.resize(3 * n);
  inst.up << Vec::Ones(n), net.totals(), Vec::Constant(n, bounds.kappa);
  inst.binaries.resize(n);
  for (int i = 0; i < n; ++i) {
    inst.binaries[i] = i;
    inst.col_names.push_back("A" + std::to_string(i));
  }
  for (int i = 0; i < n; ++i) inst.col_names.push_back("P" + std::to_string(i));
  for (int i = 0; i < n; ++i) inst.col_names.push_back("V" + std::to_string(i));
  return inst;
}

}  // namespace

MilpInstance build_P1(const FinancialNetwork& net, const ObjectiveWeights& weights) {
  check_weights(net, weights);
  const int n = net.size();
  MilpInstance inst = common_shell(net, weights);
  inst.sense = lp::Sense::Maximize;

  const Mat pt = net.relative_liabilities().transpose();
  const Mat tt = net.holdings().transpose();
  const Vec& e = net.cash();
  const Vec& l = net.totals();

  inst.A = Mat::Zero(4 * n, 3 * n);
  inst.rhs.resize(4 * n);
  inst.rel.assign(4 * n, lp::Rel::LE);
  for (int i = 0; i < n; ++i) {
    // p <= y + a o l
    int r = i;
    inst.A(r, i) = -l(i);
    inst.A.block(r, n, 1, n) = -net.beta() * pt.row(i);
    inst.A(r, n + i) += 1.0;
    inst.A.block(r, 2 * n, 1, n) = -net.gamma() * tt.row(i);
    inst.rhs(r) = net.alpha() * e(i);
    inst.row_names.push_back("CAP" + std::to_string(i));

    // a o l <= x
    r = n + i;
    inst.A(r, i) = l(i);
    inst.A.block(r, n, 1, n) = -pt.row(i);
    inst.A.block(r, 2 * n, 1, n) = -tt.row(i);
    inst.rhs(r) = e(i);

    // V <= x - a o l
    r = 2 * n + i;
    inst.A(r, i) = l(i);
    inst.A.block(r, n, 1, n) = -pt.row(i);
    inst.A.block(r, 2 * n, 1, n) = -tt.row(i);
    inst.A(r, 2 * n + i) += 1.0;
    inst.rhs(r) = e(i);

    // V <= kappa a
    r = 3 * n + i;
    inst.A(r, i) = -inst.kappa;
    inst.A(r, 2 * n + i) = 1.0;
    inst.rhs(r) = 0.0;
  }
  for (int i = 0; i < n; ++i) inst.row_names.push_back("FULL" + std::to_string(i));
  for (int i = 0; i < n; ++i) inst.row_names.push_back("EQU" + std::to_string(i));
  for (int i = 0; i < n; ++i) inst.row_names.push_back("BIGM" + std::to_string(i));
  return inst;
}

MilpInstance build_P2(const FinancialNetwork& net, const ObjectiveWeights& weights) {
  check_weights(net, weights);
  const int n = net.size();
  MilpInstance inst = common_shell(net, weights);
  inst.sense = lp::Sense::Minimize;

  const Mat pt = net.relative_liabilities().transpose();
  const Mat tt = net.holdings().transpose();
  const Vec& e = net.cash();
  const Vec& l = net.totals();

  inst.A = Mat::Zero(4 * n, 3 * n);
  inst.rhs.resize(4 * n);
  inst.rel.assign(4 * n, lp::Rel::GE);
  for (int i = 0; i < n; ++i) {
    // p >= y - kappa1 a
    int r = i;
    inst.A(r, i) = inst.kappa1;
    inst.A.block(r, n, 1, n) = -net.beta() * pt.row(i);
    inst.A(r, n + i) += 1.0;
    inst.A.block(r, 2 * n, 1, n) = -net.gamma() * tt.row(i);
    inst.rhs(r) = net.alpha() * e(i);
    inst.row_names.push_back("YLB" + std::to_string(i));

    // p >= a o l
    r = n + i;
    inst.A(r, i) = -l(i);
    inst.A(r, n + i) = 1.0;
    inst.rhs(r) = 0.0;

    // (1 - a) o l + kappa1 a >= y, written as a LE row
    r = 2 * n + i;
    inst.rel[r] = lp::Rel::LE;
    inst.A(r, i) = l(i) - inst.kappa1;
    inst.A.block(r, n, 1, n) = net.beta() * pt.row(i);
    inst.A.block(r, 2 * n, 1, n) = net.gamma() * tt.row(i);
    inst.rhs(r) = l(i) - net.alpha() * e(i);

    // V >= x - l - kappa(1 - a)
    r = 3 * n + i;
    inst.A(r, i) = -inst.kappa;
    inst.A.block(r, n, 1, n) = -pt.row(i);
    inst.A.block(r, 2 * n, 1, n) = -tt.row(i);
    inst.A(r, 2 * n + i) += 1.0;
    inst.rhs(r) = e(i) - l(i) - inst.kappa;
  }
  for (int i = 0; i < n; ++i) inst.row_names.push_back("PAL" + std::to_string(i));
  for (int i = 0; i < n; ++i) inst.row_names.push_back("YUB" + std::to_string(i));
  for (int i = 0; i < n; ++i) inst.row_names.push_back("EQL" + std::to_string(i));
  return inst;
}

namespace {

struct Node {
  double bound;
  long id;
  std::vector<std::int8_t> fixed;  // -1 unfixed, 0/1 fixed
};

struct NodeOrder {
  bool maximize;
  bool operator()(const Node& a, const Node& b) const {
    // priority_queue pops the "largest": best bound first, then oldest id.
    if (a.bound != b.bound) return maximize ? a.bound < b.bound : a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

MilpSolution solve_milp(const MilpInstance& inst, const BnbOptions& opts) {
  const int n = inst.n_banks;
  const int nvars = static_cast<int>(inst.objective.size());
  const bool maximize = inst.sense == lp::Sense::Maximize;
  const double inf = lp::kInf;

  MilpSolution out;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open{NodeOrder{maximize}};
  long next_id = 0;
  open.push(Node{maximize ? inf : -inf, next_id++,
                 std::vector<std::int8_t>(inst.binaries.size(), -1)});

  bool have_incumbent = false;
  Vec best_x;
  double best_obj = 0.0;
  long nodes = 0;
  const double gap = 1e-9;
  const auto better = [&](double cand, double ref) {
    return maximize ? cand > ref + gap : cand < ref - gap;
  };

  while (!open.empty()) {
    if (nodes >= opts.node_limit) {
      out.status = MilpStatus::NodeLimit;
      break;
    }
    Node node = open.top();
    open.pop();
    if (have_incumbent && !better(node.bound, best_obj)) continue;

    lp::Problem rel;
    rel.sense = inst.sense;
    rel.c = inst.objective;
    rel.A = inst.A;
    rel.rel = inst.rel;
    rel.rhs = inst.rhs;
    rel.lo = inst.lo;
    rel.up = inst.up;
    for (std::size_t k = 0; k < inst.binaries.size(); ++k) {
      const int j = inst.binaries[k];
      if (node.fixed[k] >= 0) {
        rel.lo(j) = node.fixed[k];
        rel.up(j) = node.fixed[k];
      } else {
        rel.lo(j) = 0.0;
        rel.up(j) = 1.0;
      }
    }

    ++nodes;
    const lp::Result res = lp::solve(rel, opts.lp);
    if (res.status == lp::Status::Infeasible) continue;
    if (res.status == lp::Status::Unbounded) {
      out.status = MilpStatus::Unbounded;
      out.nodes = nodes;
      return out;
    }
    if (res.status == lp::Status::IterationLimit)
      throw SolverError("branch and bound: node LP hit its iteration limit");
    if (have_incumbent && !better(res.objective, best_obj)) continue;

    // Most fractional unfixed binary, ties to the lowest index.
    int branch_k = -1;
    double worst_frac = opts.int_tol;
    for (std::size_t k = 0; k < inst.binaries.size(); ++k) {
      const double v = res.x(inst.binaries[k]);
      const double frac = std::abs(v - std::round(v));
      if (frac > worst_frac + 1e-15) {
        worst_frac = frac;
        branch_k = static_cast<int>(k);
      }
    }

    if (branch_k < 0) {
      if (!have_incumbent || better(res.objective, best_obj)) {
        have_incumbent = true;
        best_obj = res.objective;
        best_x = res.x;
      }
      continue;
    }

    for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
      Node child{res.objective, next_id++, node.fixed};
      child.fixed[branch_k] = v;
      open.push(std::move(child));
    }
  }

  out.nodes = nodes;
  if (!have_incumbent) {
    if (out.status != MilpStatus::NodeLimit) out.status = MilpStatus::Infeasible;
    return out;
  }
  if (out.status != MilpStatus::NodeLimit) out.status = MilpStatus::Optimal;
  out.objective = best_obj;
  out.a.resize(n);
  for (int i = 0; i < n; ++i) out.a(i) = std::round(best_x(inst.binaries[i]));
  out.p = best_x.segment(n, n);
  out.V = best_x.segment(2 * n, n);
  (void)nvars;
  return out;
}

namespace {

// Value identities of MILP optima are checked at the LP feasibility scale,
// not at the (tighter) money tolerance.
constexpr double kLemmaTol = 1e-7;

bool indicator_matches(const Vec& a, const Vec& lhs, const Vec& rhs, double tie_tol) {
  for (int i = 0; i < a.size(); ++i) {
    if (std::abs(lhs(i) - rhs(i)) <= tie_tol) continue;  // boundary: either value is consistent
    const bool want_one = lhs(i) > rhs(i);
    if (want_one != (a(i) > 0.5)) return false;
  }
  return true;
}

}  // namespace

MaximalMilpResult maximal_pair_via_milp(const FinancialNetwork& net,
                                        const ObjectiveWeights& weights,
                                        const BnbOptions& opts, double tol) {
  MilpSolution sol = solve_milp(build_P1(net, weights), opts);
  if (sol.status != MilpStatus::Optimal)
    throw SolverError("P1 did not solve to optimality");

  const Vec& l = net.totals();
  bool lemma = true;
  for (int i = 0; i < net.size(); ++i) {
    const bool full = std::abs(sol.p(i) - l(i)) <= kLemmaTol;
    if (full != (sol.a(i) > 0.5)) lemma = false;
  }
  sol.lemma_p1_indicator = lemma;
  if (!lemma)
    throw SolverError("P1 optimum violates the indicator identity a = 1_{p=l}");

  ClearingPair pair = make_clearing_pair(net, sol.p, sol.V, tol);
  if (!verify_clearing_pair(net, pair, std::max(tol, kLemmaTol)).overall)
    throw SolverError("P1 optimum failed the clearing axioms");
  return {std::move(pair), std::move(sol)};
}

MinimalMilpResult minimal_pair_via_milp(const FinancialNetwork& net,
                                        const ObjectiveWeights& weights,
                                        const BnbOptions& opts, double tol) {
  MilpSolution sol = solve_milp(build_P2(net, weights), opts);
  if (sol.status != MilpStatus::Optimal)
    throw SolverError("P2 did not solve to optimality");

  const Vec y = assets_y(net, sol.p, sol.V);
  const Vec& l = net.totals();

  sol.lemma_p2_indicator = indicator_matches(sol.a, y, l, kLemmaTol);
  bool min_form = true;
  for (int i = 0; i < net.size(); ++i)
    if (std::abs(sol.p(i) - std::min(y(i), l(i))) > kLemmaTol) min_form = false;
  sol.lemma_p2_min_form = min_form;
  if (!*sol.lemma_p2_indicator)
    throw SolverError("P2 optimum violates the indicator identity a = 1_{y>l}");
  if (!min_form)
    throw SolverError("P2 optimum violates the payment identity p = y ^ l");

  MinimalMilpResult out;
  out.equality_flag = true;
  for (int i = 0; i < net.size(); ++i)
    if (std::abs(y(i) - l(i)) <= tol) out.equality_flag = false;

  out.pair = make_clearing_pair(net, sol.p, sol.V, tol);
  out.solution = std::move(sol);
  return out;
}

}  // namespace clearnet
