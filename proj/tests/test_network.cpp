#include <doctest.h>

#include <clearnet/network.hpp>

#include "support/oracles.hpp"

using namespace clearnet;
using testsupport::Rng;

namespace {

NetworkData two_bank_chain() {
  // e = (0.5, 0), l = (2, 3), bank 0 owes bank 1 and vice versa, no holdings
  NetworkData d;
  d.n = 2;
  d.cash = Vec(2);
  d.cash << 0.5, 0.0;
  d.liabilities = Mat(2, 2);
  d.liabilities << 0, 2, 3, 0;
  d.holdings = Mat::Zero(2, 2);
  d.alpha = d.beta = 0.5;
  d.gamma = 0.5;
  return d;
}

}  // namespace

TEST_CASE("relative liabilities follow the zero-debt convention") {
  NetworkData d;
  d.n = 2;
  d.cash = Vec::Zero(2);
  d.liabilities = Mat(2, 2);
  d.liabilities << 0, 2, 0, 0;
  d.holdings = Mat::Zero(2, 2);
  const auto net = FinancialNetwork::build(d);
  Mat expected(2, 2);
  expected << 0, 1, 0, 1;  // row 1 is the unit vector since bank 1 has no debt
  CHECK((net.relative_liabilities() - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(net.totals()(0) == 2.0);
  CHECK(net.totals()(1) == 0.0);
}

TEST_CASE("zero liabilities give the identity") {
  NetworkData d;
  d.n = 3;
  d.cash = Vec::Ones(3);
  d.liabilities = Mat::Zero(3, 3);
  d.holdings = Mat::Zero(3, 3);
  const auto net = FinancialNetwork::build(d);
  CHECK((net.relative_liabilities() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("three-bank relative liabilities") {
  NetworkData d;
  d.n = 3;
  d.cash = Vec::Zero(3);
  d.liabilities = Mat(3, 3);
  d.liabilities << 0, 1, 1, 2, 0, 0, 0, 0, 0;
  d.holdings = Mat::Zero(3, 3);
  const auto net = FinancialNetwork::build(d);
  Mat expected(3, 3);
  expected << 0, 0.5, 0.5, 1, 0, 0, 0, 0, 1;
  CHECK((net.relative_liabilities() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("validation rejects bad inputs") {
  NetworkData d = two_bank_chain();

  SUBCASE("negative cash") {
    d.cash(1) = -0.1;
    CHECK_THROWS_AS(FinancialNetwork::build(d), ValidationError);
  }
  SUBCASE("negative liability") {
    d.liabilities(0, 1) = -1.0;
    CHECK_THROWS_AS(FinancialNetwork::build(d), ValidationError);
  }
  SUBCASE("self-debt") {
    d.liabilities(0, 0) = 1.0;
    CHECK_THROWS_AS(FinancialNetwork::build(d), ValidationError);
  }
  SUBCASE("holdings row sum above one") {
    d.holdings(0, 1) = 1.2;
    CHECK_THROWS_MESSAGE(FinancialNetwork::build(d), doctest::Contains("row 0"));
  }
  SUBCASE("unit eigenvalue of holdings") {
    // row sums equal 1, so I - Theta' is singular even though rows pass
    d.holdings << 0, 1, 1, 0;
    CHECK_THROWS_AS(FinancialNetwork::build(d), ValidationError);
  }
  SUBCASE("charge parameter out of range") {
    d.alpha = 1.5;
    CHECK_THROWS_AS(FinancialNetwork::build(d), ValidationError);
  }
}

TEST_CASE("assets evaluators") {
  auto d = two_bank_chain();
  const auto net = FinancialNetwork::build(d);

  SUBCASE("zero payments give cash") {
    const Vec x = assets_x(net, Vec::Zero(2), Vec::Zero(2));
    CHECK(x(0) == 0.5);
    CHECK(x(1) == 0.0);
  }
  SUBCASE("matrix-vector product") {
    Vec p(2);
    p << 2, 3;
    const Vec x = assets_x(net, p, Vec::Zero(2));
    CHECK(x(0) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(x(1) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("holdings contribute through Theta'") {
    NetworkData h = two_bank_chain();
    h.holdings = 0.5 * Mat::Identity(2, 2);
    const auto net2 = FinancialNetwork::build(h);
    Vec v(2);
    v << 2, 2;
    const Vec x = assets_x(net2, Vec::Zero(2), v);
    CHECK(x(0) == doctest::Approx(0.5 + 1.0));
    CHECK(x(1) == doctest::Approx(1.0));
  }
  SUBCASE("charged assets") {
    Vec p(2);
    p << 2, 3;
    const Vec y = assets_y(net, p, Vec::Zero(2));
    CHECK(y(0) == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(y(1) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("full charges wipe everything") {
    NetworkData z = two_bank_chain();
    z.alpha = z.beta = z.gamma = 0.0;
    const auto net2 = FinancialNetwork::build(z);
    Vec p(2);
    p << 1, 1;
    CHECK(assets_y(net2, p, p).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("no charges make y equal x") {
    NetworkData z = two_bank_chain();
    z.alpha = z.beta = z.gamma = 1.0;
    const auto net2 = FinancialNetwork::build(z);
    Rng rng(7);
    for (int k = 0; k < 20; ++k) {
      Vec p(2), v(2);
      p << rng.uniform(0, 2), rng.uniform(0, 3);
      v << rng.uniform(0, 2), rng.uniform(0, 2);
      CHECK((assets_x(net2, p, v) - assets_y(net2, p, v)).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(assets_x(net, Vec::Zero(3), Vec::Zero(2)), ValidationError);
  }
}

TEST_CASE("verify_clearing_pair") {
  const auto net = FinancialNetwork::build(two_bank_chain());

  SUBCASE("full payment passes when cash is adequate") {
    NetworkData d = two_bank_chain();
    d.cash << 10.0, 10.0;
    const auto rich = FinancialNetwork::build(d);
    Vec l = rich.totals();
    // V = x - l solves the equity equation with Theta = 0
    const Vec v = (rich.cash() + rich.relative_liabilities().transpose() * l - l).cwiseMax(0.0);
    const auto report = verify_clearing_pair(rich, make_clearing_pair(rich, l, v));
    CHECK(report.overall);
    for (const auto& bank : report.banks) {
      CHECK(bank.branch == PriorityBranch::FullPayment);
    }
  }

  SUBCASE("the all-default pair matches the scan oracle") {
    const auto pairs = testsupport::scan_clearing_pairs(net);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].p(0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(pairs[0].p(1) == doctest::Approx(1.0 / 6).epsilon(1e-12));

    Vec p(2);
    p << 1.0 / 3, 1.0 / 6;
    const auto report = verify_clearing_pair(net, make_clearing_pair(net, p, Vec::Zero(2)));
    CHECK(report.overall);
    CHECK(report.banks[0].branch == PriorityBranch::ChargedAssets);
  }

  SUBCASE("zero payments violate absolute priority at bank 0") {
    const auto report =
        verify_clearing_pair(net, make_clearing_pair(net, Vec::Zero(2), Vec::Zero(2)));
    CHECK_FALSE(report.overall);
    CHECK_FALSE(report.banks[0].absolute_priority);  // 0 is neither l nor y = 0.25
    CHECK(report.banks[1].absolute_priority);        // y = 0 matches
  }
}

TEST_CASE("row stochasticity and affinity properties") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 8);
    const auto net = testsupport::random_network(rng, n, trial % 2 == 0);
    const Vec row_sums = net.relative_liabilities().rowwise().sum();
    CHECK((row_sums - Vec::Ones(n)).cwiseAbs().maxCoeff() <= 1e-12);

    // affinity of x and y in (p, V)
    Vec p1(n), v1(n), p2(n), v2(n);
    for (int i = 0; i < n; ++i) {
      p1(i) = rng.uniform(0, 5);
      v1(i) = rng.uniform(0, 5);
      p2(i) = rng.uniform(0, 5);
      v2(i) = rng.uniform(0, 5);
    }
    const double lam = rng.uniform();
    const Vec xa = assets_x(net, lam * p1 + (1 - lam) * p2, lam * v1 + (1 - lam) * v2);
    const Vec xb = lam * assets_x(net, p1, v1) + (1 - lam) * assets_x(net, p2, v2);
    CHECK((xa - xb).cwiseAbs().maxCoeff() <= 1e-10);
    const Vec ya = assets_y(net, lam * p1 + (1 - lam) * p2, lam * v1 + (1 - lam) * v2);
    const Vec yb = lam * assets_y(net, p1, v1) + (1 - lam) * assets_y(net, p2, v2);
    CHECK((ya - yb).cwiseAbs().maxCoeff() <= 1e-10);

    // monotonicity
    const Vec xs = assets_x(net, p1, v1);
    const Vec xl = assets_x(net, p1 + Vec::Constant(n, 0.5), v1 + Vec::Constant(n, 0.5));
    CHECK(((xl - xs).array() >= -1e-12).all());
  }
}
