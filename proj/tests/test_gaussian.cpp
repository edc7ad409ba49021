#include <doctest.h>

#include <clearnet/fixpoint.hpp>
#include <clearnet/gaussian.hpp>

#include "support/oracles.hpp"

using namespace clearnet;
using testsupport::Rng;

namespace {

FinancialNetwork two_bank_chain() {
  NetworkData d;
  d.n = 2;
  d.cash = Vec(2);
  d.cash << 0.5, 0.0;
  d.liabilities = Mat(2, 2);
  d.liabilities << 0, 2, 3, 0;
  d.holdings = Mat::Zero(2, 2);
  d.alpha = d.beta = d.gamma = 0.5;
  return FinancialNetwork::build(d);
}

FinancialNetwork three_bank_cycle() {
  // one cash-rich bank, two that must be eliminated
  NetworkData d;
  d.n = 3;
  d.cash = Vec(3);
  d.cash << 10.0, 0.0, 0.0;
  d.liabilities = Mat::Zero(3, 3);
  d.liabilities(0, 1) = 1.0;
  d.liabilities(1, 2) = 2.0;
  d.liabilities(2, 0) = 2.0;
  d.holdings = Mat::Zero(3, 3);
  d.alpha = d.beta = d.gamma = 0.5;
  return FinancialNetwork::build(d);
}

}  // namespace

TEST_CASE("preconditions") {
  NetworkData d;
  d.n = 2;
  d.cash = Vec::Ones(2);
  d.liabilities = Mat(2, 2);
  d.liabilities << 0, 1, 1, 0;
  d.holdings = Mat::Zero(2, 2);

  SUBCASE("unequal charge parameters") {
    d.alpha = 0.5;
    d.beta = 0.6;
    d.gamma = 0.5;
    const auto net = FinancialNetwork::build(d);
    CHECK_THROWS_AS(gaussian_max_clearing(net), PreconditionError);
  }
  SUBCASE("holdings row sum at one") {
    d.alpha = d.beta = d.gamma = 0.5;
    d.holdings(0, 1) = 1.0;  // valid network, but not strictly substochastic
    const auto net = FinancialNetwork::build(d);
    CHECK_FALSE(net.theta_inf_norm_lt_one());
    CHECK_THROWS_AS(gaussian_max_clearing(net), PreconditionError);
  }
}

TEST_CASE("full_payment_check") {
  SUBCASE("holds with adequate cash") {
    NetworkData d;
    d.n = 2;
    d.cash = Vec::Constant(2, 10.0);
    d.liabilities = Mat(2, 2);
    d.liabilities << 0, 2, 3, 0;
    d.holdings = Mat::Zero(2, 2);
    d.alpha = d.beta = d.gamma = 0.5;
    const auto sys = ReducedSystem::from_network(FinancialNetwork::build(d));
    CHECK(full_payment_check(sys).holds);
  }
  SUBCASE("smallest violating index") {
    const auto sys = ReducedSystem::from_network(two_bank_chain());
    const auto chk = full_payment_check(sys);
    CHECK_FALSE(chk.holds);
    CHECK(chk.violating_index == 1);  // assets (3.5, 2) against l = (2, 3)
  }
}

TEST_CASE("eliminate: worked two-bank example") {
  const auto sys = ReducedSystem::from_network(two_bank_chain());
  const auto next = eliminate(sys, 1);
  REQUIRE(next.dimension() == 1);
  CHECK(next.orig_index[0] == 0);
  CHECK(next.pi(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(next.e(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(next.l(0) == 2.0);
  REQUIRE(next.log.size() == 1);
  const auto& rec = next.log[0];
  CHECK(rec.bank == 1);
  CHECK(rec.pivot == 0.0);
  CHECK(rec.scale == doctest::Approx(0.5));
  CHECK(rec.R(0) == 1.0);
  CHECK(rec.T(0) == 1.0);
  CHECK(rec.M(0) == 0.0);
  CHECK_FALSE(rec.degenerate);

  // the reduced single bank still cannot pay: 0.5 + 0.5*2 = 1.5 < 2
  const auto chk = full_payment_check(next);
  CHECK_FALSE(chk.holds);
  CHECK(chk.violating_index == 0);
}

TEST_CASE("eliminate rejects bad pivots") {
  const auto sys = ReducedSystem::from_network(two_bank_chain());
  CHECK_THROWS_AS(eliminate(sys, 7), PreconditionError);
  CHECK_THROWS_AS(eliminate(sys, 0), PreconditionError);  // bank 0 is not violating
}

TEST_CASE("zero holdings column leaves theta untouched") {
  const auto sys = ReducedSystem::from_network(three_bank_cycle());
  const auto chk = full_payment_check(sys);
  REQUIRE_FALSE(chk.holds);
  const auto next = eliminate(sys, chk.violating_index);
  CHECK(next.theta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gaussian_max_clearing on worked examples") {
  SUBCASE("adequate cash terminates with zero eliminations") {
    NetworkData d;
    d.n = 2;
    d.cash = Vec::Constant(2, 10.0);
    d.liabilities = Mat(2, 2);
    d.liabilities << 0, 2, 3, 0;
    d.holdings = Mat::Zero(2, 2);
    d.alpha = d.beta = d.gamma = 0.5;
    const auto net = FinancialNetwork::build(d);
    GaussianTrace trace;
    const auto pair = gaussian_max_clearing(net, kDefaultTol, &trace);
    CHECK(trace.eliminations == 0);
    CHECK((pair.p - net.totals()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("two-bank cascade eliminates both banks") {
    const auto net = two_bank_chain();
    GaussianTrace trace;
    const auto pair = gaussian_max_clearing(net, kDefaultTol, &trace);
    CHECK(trace.eliminations == 2);
    CHECK_FALSE(trace.degenerate_taken);
    CHECK(pair.p(0) == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(pair.p(1) == doctest::Approx(1.0 / 6).epsilon(1e-10));
    CHECK(pair.V.cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("three-bank cycle keeps the solvent bank's equity") {
    const auto net = three_bank_cycle();
    GaussianTrace trace;
    const auto pair = gaussian_max_clearing(net, kDefaultTol, &trace);
    CHECK(trace.eliminations == 2);
    const auto fix = max_fixpoint(net, RegimeVector::ones(3));
    CHECK((pair.p - fix.p).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((pair.V - fix.V).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(pair.V(0) > 0.0);
    CHECK(pair.V(1) == 0.0);
    CHECK(pair.V(2) == 0.0);
  }
}

TEST_CASE("class conservation and equivalence on random networks") {
  Rng rng(8080);
  for (int t = 0; t < 60; ++t) {
    const int n = rng.uniform_int(2, 9);
    NetworkData d;
    d.n = n;
    d.cash = Vec::Zero(n);
    d.liabilities = Mat::Zero(n, n);
    d.holdings = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      d.cash(i) = rng.uniform(0, 4);
      for (int j = 0; j < n; ++j) {
        if (i != j && rng.bernoulli(0.6)) d.liabilities(i, j) = rng.uniform(0, 10);
        if (i != j && rng.bernoulli(0.4)) d.holdings(i, j) = rng.uniform(0, 0.5);
      }
      const double s = d.holdings.row(i).sum();
      if (s > 0.9) d.holdings.row(i) *= 0.9 / s;
    }
    d.alpha = d.beta = d.gamma = 1.0 - rng.uniform() * 0.999;  // (0.001, 1]
    const auto net = FinancialNetwork::build(d);

    GaussianTrace trace;
    const auto pair = gaussian_max_clearing(net, kDefaultTol, &trace);
    CHECK(trace.eliminations <= n);
    CHECK_FALSE(trace.degenerate_taken);
    for (double rs : trace.pi_row_sum_max) CHECK(rs <= 1.0 + 1e-9);
    for (double tn : trace.theta_norm) CHECK(tn < 1.0);

    const auto fix = max_fixpoint(net, RegimeVector::ones(n));
    CHECK((pair.p - fix.p).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((pair.V - fix.V).cwiseAbs().maxCoeff() <= 1e-7);

    // eliminated banks are exactly the defaulting set of the maximal pair
    CHECK(trace.eliminations == fix.d.sum());
  }
}
