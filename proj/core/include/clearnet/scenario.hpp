#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "clearnet/network.hpp"

namespace clearnet {

/// A network description plus file metadata. The JSON schema has keys
/// n, alpha, beta, gamma, cash, liabilities, holdings and optional
/// name/description/seed. Matrices may be dense arrays-of-arrays or triplet
/// lists [{"from": i, "to": j, "amount": v}, ...] with 0-based indices,
/// where "from" is the row of the respective matrix (debtor for liabilities,
/// issuer for holdings).
struct Scenario {
  std::string name;
  std::string description;
  std::optional<std::uint64_t> seed;
  NetworkData data;
};

/// Parses and validates a scenario file (the network is built once to run the
/// full validation; errors carry the offending field or row).
Scenario ingest(const std::filesystem::path& path);

/// Same, from an in-memory JSON document.
Scenario parse_scenario_text(const std::string& text);

/// Canonical JSON rendering (dense matrices, fixed key order). Parsing the
/// output reproduces the scenario; rendering is byte-for-byte idempotent.
std::string scenario_to_text(const Scenario& scenario);

void write_scenario(const std::filesystem::path& path, const Scenario& scenario);

struct GenOptions {
  std::uint64_t seed = 0;
  int n = 4;
  double density = 0.5;          // Bernoulli sparsity of liabilities and holdings
  double shock = 0.0;            // scales cash by (1 - shock)
  std::optional<double> abg;     // fixes alpha = beta = gamma; drawn in (0,1] otherwise
  bool with_holdings = true;     // false gives Theta = 0
};

/// Deterministic random scenario: liabilities uniform on [0,10] with
/// Bernoulli(density) sparsity and zero diagonal; holdings rows rescaled to
/// sum <= 0.9; cash uniform on [0,5]*(1-shock); alpha = beta = gamma.
Scenario gen_random_network(const GenOptions& opts);

}  // namespace clearnet
