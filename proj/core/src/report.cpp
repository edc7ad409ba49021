#include "clearnet/report.hpp"

#include <chrono>

#include "clearnet/fixpoint.hpp"
#include "clearnet/gaussian.hpp"

namespace clearnet {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double pair_delta(const ClearingPair& a, const ClearingPair& b) {
  const double dp = (a.p - b.p).cwiseAbs().maxCoeff();
  const double dv = (a.V - b.V).cwiseAbs().maxCoeff();
  return std::max(dp, dv);
}

void add_deltas(const std::vector<MethodResult>& group, std::vector<PairwiseDelta>* out) {
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (!group[i].applicable) continue;
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      if (!group[j].applicable) continue;
      out->push_back({group[i].method, group[j].method,
                      pair_delta(group[i].pair, group[j].pair)});
    }
  }
}

}  // namespace

ComparisonReport compare_methods(const FinancialNetwork& net,
                                 const ObjectiveWeights& weights, double tol,
                                 double agree_tol, int enumerate_cap) {
  ComparisonReport report;
  report.agree_tol = agree_tol;
  const int n = net.size();

  {
    const auto t0 = Clock::now();
    MethodResult r;
    r.method = "fixpoint-max";
    r.pair = max_fixpoint(net, RegimeVector::ones(n), tol);
    r.wall_ms = ms_since(t0);
    report.maximal.push_back(std::move(r));
  }
  {
    const auto t0 = Clock::now();
    MethodResult r;
    r.method = "milp-p1";
    MaximalMilpResult m = maximal_pair_via_milp(net, weights, {}, tol);
    r.pair = std::move(m.pair);
    r.nodes = m.solution.nodes;
    r.wall_ms = ms_since(t0);
    report.maximal.push_back(std::move(r));
  }
  {
    MethodResult r;
    r.method = "gaussian";
    const auto t0 = Clock::now();
    try {
      GaussianTrace trace;
      r.pair = gaussian_max_clearing(net, tol, &trace);
      r.eliminations = trace.eliminations;
      r.wall_ms = ms_since(t0);
    } catch (const PreconditionError& err) {
      r.applicable = false;
      r.note = err.what();
    }
    report.maximal.push_back(std::move(r));
  }
  {
    const auto t0 = Clock::now();
    MethodResult r;
    r.method = "fixpoint-min";
    r.pair = min_fixpoint(net, RegimeVector::zeros(n), tol);
    r.wall_ms = ms_since(t0);
    report.minimal.push_back(std::move(r));
  }
  {
    const auto t0 = Clock::now();
    MethodResult r;
    r.method = "milp-p2";
    MinimalMilpResult m = minimal_pair_via_milp(net, weights, {}, tol);
    r.pair = std::move(m.pair);
    r.nodes = m.solution.nodes;
    r.wall_ms = ms_since(t0);
    report.p2_equality_flag = m.equality_flag;
    report.minimal.push_back(std::move(r));
  }
  if (n <= enumerate_cap) {
    const auto t0 = Clock::now();
    const ClearingSet set = enumerate_clearing_set(net, enumerate_cap, tol);
    const double ms = ms_since(t0);
    MethodResult rmax;
    rmax.method = "enumeration-max";
    rmax.pair = set.global_max;
    rmax.wall_ms = ms;
    report.maximal.push_back(std::move(rmax));
    MethodResult rmin;
    rmin.method = "enumeration-min";
    rmin.pair = set.global_min;
    rmin.wall_ms = ms;
    report.minimal.push_back(std::move(rmin));
  } else {
    MethodResult r;
    r.method = "enumeration-max";
    r.applicable = false;
    r.note = "n exceeds the enumeration cap";
    report.maximal.push_back(r);
    r.method = "enumeration-min";
    report.minimal.push_back(std::move(r));
  }

  add_deltas(report.maximal, &report.deltas_max);
  add_deltas(report.minimal, &report.deltas_min);
  report.agreement = true;
  for (const auto& d : report.deltas_max)
    report.agreement = report.agreement && d.sup <= agree_tol;
  for (const auto& d : report.deltas_min)
    report.agreement = report.agreement && d.sup <= agree_tol;
  return report;
}

}  // namespace clearnet
