#include <doctest.h>

#include <clearnet/scenario.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace clearnet;

namespace {

std::filesystem::path temp_file(const std::string& stem) {
  return std::filesystem::temp_directory_path() / ("clearnet_test_" + stem + ".json");
}

}  // namespace

TEST_CASE("canonical rendering is idempotent and round-trips") {
  GenOptions opts;
  opts.seed = 99;
  opts.n = 5;
  opts.density = 0.7;
  opts.shock = 0.2;
  const Scenario sc = gen_random_network(opts);
  const std::string once = scenario_to_text(sc);
  const Scenario back = parse_scenario_text(once);
  CHECK(scenario_to_text(back) == once);
  CHECK(back.data.n == sc.data.n);
  CHECK((back.data.cash - sc.data.cash).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.data.liabilities - sc.data.liabilities).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.data.holdings - sc.data.holdings).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.data.alpha == sc.data.alpha);
  CHECK(back.seed.has_value());
}

TEST_CASE("triplet and dense encodings build the same network") {
  const std::string dense = R"({
    "n": 3, "alpha": 0.5, "beta": 0.5, "gamma": 1.0,
    "cash": [1, 0, 2],
    "liabilities": [[0, 2, 0], [1, 0, 3], [0, 0, 0]],
    "holdings": [[0, 0.2, 0], [0, 0, 0.3], [0, 0, 0]]
  })";
  const std::string triplets = R"({
    "n": 3, "alpha": 0.5, "beta": 0.5, "gamma": 1.0,
    "cash": [1, 0, 2],
    "liabilities": [
      {"from": 0, "to": 1, "amount": 2},
      {"from": 1, "to": 0, "amount": 1},
      {"from": 1, "to": 2, "amount": 1.5},
      {"from": 1, "to": 2, "amount": 1.5}
    ],
    "holdings": [
      {"from": 0, "to": 1, "amount": 0.2},
      {"from": 1, "to": 2, "amount": 0.3}
    ]
  })";
  const Scenario a = parse_scenario_text(dense);
  const Scenario b = parse_scenario_text(triplets);
  CHECK((a.data.liabilities - b.data.liabilities).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.data.holdings - b.data.holdings).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parse and validation failures carry the field") {
  SUBCASE("syntax error") {
    CHECK_THROWS_WITH_AS(parse_scenario_text("{ not json"),
                         doctest::Contains("parse error"), ValidationError);
  }
  SUBCASE("missing field") {
    CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"n": 1})"),
                         doctest::Contains("alpha"), ValidationError);
  }
  SUBCASE("holdings row sum") {
    const std::string text = R"({
      "n": 2, "alpha": 1, "beta": 1, "gamma": 1,
      "cash": [1, 1],
      "liabilities": [[0, 1], [0, 0]],
      "holdings": [[0, 1.2], [0, 0]]
    })";
    CHECK_THROWS_WITH_AS(parse_scenario_text(text), doctest::Contains("row 0"),
                         ValidationError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(ingest("/nonexistent/path/to/scenario.json"), ValidationError);
  }
}

TEST_CASE("ingest reads what write_scenario wrote") {
  GenOptions opts;
  opts.seed = 3;
  opts.n = 3;
  const Scenario sc = gen_random_network(opts);
  const auto path = temp_file("roundtrip");
  write_scenario(path, sc);
  const Scenario back = ingest(path);
  CHECK(back.name == sc.name);
  CHECK((back.data.liabilities - sc.data.liabilities).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("generator determinism and parameter handling") {
  SUBCASE("same seed, same bytes") {
    GenOptions opts;
    opts.seed = 123456;
    opts.n = 6;
    opts.density = 0.4;
    opts.shock = 0.5;
    CHECK(scenario_to_text(gen_random_network(opts)) ==
          scenario_to_text(gen_random_network(opts)));
  }
  SUBCASE("different seeds differ") {
    GenOptions a, b;
    a.seed = 1;
    b.seed = 2;
    a.n = b.n = 4;
    CHECK(scenario_to_text(gen_random_network(a)) !=
          scenario_to_text(gen_random_network(b)));
  }
  SUBCASE("full shock removes all cash") {
    GenOptions opts;
    opts.seed = 5;
    opts.n = 4;
    opts.shock = 1.0;
    CHECK(gen_random_network(opts).data.cash.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("zero density is rejected") {
    GenOptions opts;
    opts.density = 0.0;
    CHECK_THROWS_AS(gen_random_network(opts), ValidationError);
  }
  SUBCASE("low density yields mostly debt-free banks") {
    GenOptions opts;
    opts.seed = 8;
    opts.n = 12;
    opts.density = 0.02;
    const Scenario sc = gen_random_network(opts);
    const auto net = FinancialNetwork::build(sc.data);
    int unit_rows = 0;
    for (int i = 0; i < net.size(); ++i)
      if (net.totals()(i) == 0.0) {
        ++unit_rows;
        CHECK(net.relative_liabilities()(i, i) == 1.0);
      }
    CHECK(unit_rows >= 6);
  }
  SUBCASE("holdings rows respect the 0.9 cap and abg is honored") {
    GenOptions opts;
    opts.seed = 77;
    opts.n = 8;
    opts.density = 1.0;
    opts.abg = 0.25;
    const Scenario sc = gen_random_network(opts);
    CHECK(sc.data.alpha == 0.25);
    CHECK(sc.data.beta == 0.25);
    CHECK(sc.data.gamma == 0.25);
    for (int i = 0; i < opts.n; ++i)
      CHECK(sc.data.holdings.row(i).sum() <= 0.9 + 1e-12);
  }
}
