#pragma once

#include <clearnet/network.hpp>
#include <clearnet/simplex.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

// Independent reference implementations used only by tests. Everything here
// is deliberately written against the raw model equations, not against the
// library's solver paths.
namespace testsupport {

using clearnet::Mat;
using clearnet::Vec;

/// Deterministic uniforms decoupled from std distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

/// Classical fictitious-default clearing vector for a network without
/// cross-holdings and without default charges: the greatest p = (e + Pi'p) ^ l.
/// Grows the default set from empty, solving the restricted linear system
/// each round.
Vec eisenberg_noe_clearing(const Vec& e, const Mat& pi, const Vec& l,
                           double tol = 1e-12);

/// Every clearing pair of a small network, found by scanning all 2^n
/// full-payment patterns and, per pattern, all subsets of full payers with
/// positive equity; each pattern induces a linear system whose solution is
/// kept iff it satisfies the three clearing rules. Deduplicated at sup-norm
/// 1e-7.
std::vector<clearnet::ClearingPair> scan_clearing_pairs(
    const clearnet::FinancialNetwork& net, double tol = 1e-7);

/// Optimal objective of a bounded LP with <= rows by brute-force vertex
/// enumeration. std::nullopt when infeasible. All bounds must be finite.
std::optional<double> lp_vertex_optimum(const clearnet::lp::Problem& prob,
                                        double feas_tol = 1e-9);

/// Random validated network with independently drawn alpha, beta, gamma.
clearnet::FinancialNetwork random_network(Rng& rng, int n, bool with_holdings,
                                          double density = 0.6, double shock = 0.3);

}  // namespace testsupport
