#include <doctest.h>

#include <clearnet/simplex.hpp>

#include "support/oracles.hpp"

using namespace clearnet::lp;
using testsupport::Rng;
using clearnet::Mat;
using clearnet::Vec;

namespace {

Problem make(Sense sense, const Vec& c, const Mat& a, const std::vector<Rel>& rel,
             const Vec& rhs, const Vec& lo, const Vec& up) {
  return Problem{sense, c, a, rel, rhs, lo, up};
}

}  // namespace

TEST_CASE("textbook maximization") {
  // max x + y s.t. x + 2y <= 4, x <= 3, x,y >= 0 -> (3, 0.5), value 3.5
  Vec c(2);
  c << 1, 1;
  Mat a(2, 2);
  a << 1, 2, 1, 0;
  Vec rhs(2);
  rhs << 4, 3;
  const auto res = solve(make(Sense::Maximize, c, a, {Rel::LE, Rel::LE}, rhs,
                              Vec::Zero(2), Vec::Constant(2, kInf)));
  REQUIRE(res.status == Status::Optimal);
  CHECK(res.objective == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(res.x(0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(res.x(1) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("equality and ge rows") {
  SUBCASE("equality") {
    // max x s.t. x + y = 2, x,y in [0, 1.5] -> x = 1.5
    Vec c(2);
    c << 1, 0;
    Mat a(1, 2);
    a << 1, 1;
    Vec rhs(1);
    rhs << 2;
    const auto res = solve(make(Sense::Maximize, c, a, {Rel::EQ}, rhs, Vec::Zero(2),
                                Vec::Constant(2, 1.5)));
    REQUIRE(res.status == Status::Optimal);
    CHECK(res.x(0) == doctest::Approx(1.5));
    CHECK(res.x(1) == doctest::Approx(0.5));
  }
  SUBCASE("ge row needs phase one") {
    // min x + y s.t. x + 2y >= 4, x,y in [0,3] -> (0,2), value 2
    Vec c(2);
    c << 1, 1;
    Mat a(1, 2);
    a << 1, 2;
    Vec rhs(1);
    rhs << 4;
    const auto res = solve(make(Sense::Minimize, c, a, {Rel::GE}, rhs, Vec::Zero(2),
                                Vec::Constant(2, 3.0)));
    REQUIRE(res.status == Status::Optimal);
    CHECK(res.objective == doctest::Approx(2.0));
    CHECK(res.x(1) == doctest::Approx(2.0));
  }
}

TEST_CASE("infeasible and unbounded detection") {
  SUBCASE("infeasible") {
    Vec c(2);
    c << 1, 1;
    Mat a(1, 2);
    a << 1, 1;
    Vec rhs(1);
    rhs << -1;  // x + y <= -1 with x, y >= 0
    const auto res = solve(make(Sense::Maximize, c, a, {Rel::LE}, rhs, Vec::Zero(2),
                                Vec::Constant(2, kInf)));
    CHECK(res.status == Status::Infeasible);
  }
  SUBCASE("unbounded") {
    Vec c(1);
    c << 1;
    Mat a(1, 1);
    a << -1;
    Vec rhs(1);
    rhs << 0;  // -x <= 0
    const auto res = solve(make(Sense::Maximize, c, a, {Rel::LE}, rhs, Vec::Zero(1),
                                Vec::Constant(1, kInf)));
    CHECK(res.status == Status::Unbounded);
  }
}

TEST_CASE("upper-bounded variables flip instead of pivoting") {
  // max 2x + y s.t. x + y <= 10, x in [0,2], y in [0,3]: x=2, y=3
  Vec c(2);
  c << 2, 1;
  Mat a(1, 2);
  a << 1, 1;
  Vec rhs(1);
  rhs << 10;
  Vec up(2);
  up << 2, 3;
  const auto res = solve(make(Sense::Maximize, c, a, {Rel::LE}, rhs, Vec::Zero(2), up));
  REQUIRE(res.status == Status::Optimal);
  CHECK(res.objective == doctest::Approx(7.0));
}

TEST_CASE("random bounded problems match the vertex oracle") {
  Rng rng(9001);
  int solved = 0;
  while (solved < 120) {
    const int n = rng.uniform_int(2, 4);
    const int m = rng.uniform_int(1, 4);
    Problem prob;
    prob.sense = rng.bernoulli(0.5) ? Sense::Maximize : Sense::Minimize;
    prob.c = Vec(n);
    prob.A = Mat(m, n);
    prob.rhs = Vec(m);
    prob.lo = Vec::Zero(n);
    prob.up = Vec(n);
    for (int i = 0; i < n; ++i) {
      prob.c(i) = rng.uniform(-3, 3);
      prob.up(i) = rng.uniform(0.5, 4.0);
    }
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) prob.A(r, j) = rng.uniform(-2, 3);
      prob.rhs(r) = rng.uniform(0.5, 6.0);  // x = 0 stays feasible
    }
    prob.rel.assign(m, Rel::LE);

    const auto oracle = testsupport::lp_vertex_optimum(prob);
    REQUIRE(oracle.has_value());
    const auto res = solve(prob);
    REQUIRE(res.status == Status::Optimal);
    CHECK(res.objective == doctest::Approx(*oracle).epsilon(1e-8));
    ++solved;
  }
}
