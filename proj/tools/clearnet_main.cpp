#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <clearnet/equity.hpp>
#include <clearnet/fixpoint.hpp>
#include <clearnet/gaussian.hpp>
#include <clearnet/milp.hpp>
#include <clearnet/network.hpp>
#include <clearnet/report.hpp>
#include <clearnet/scenario.hpp>

using namespace clearnet;
using Json = nlohmann::ordered_json;

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

Json vec_json(const Vec& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json ivec_json(const Eigen::VectorXi& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json pair_json(const ClearingPair& pair) {
  Json j;
  j["p"] = vec_json(pair.p);
  j["V"] = vec_json(pair.V);
  j["d"] = ivec_json(pair.d);
  return j;
}

std::string pair_table(const ClearingPair& pair) {
  std::ostringstream os;
  os << "bank                p                V  default\n";
  for (int i = 0; i < pair.p.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof(line), "%4d %16s %16s %8d\n", i, fmt9(pair.p(i)).c_str(),
                  fmt9(pair.V(i)).c_str(), pair.d(i));
    os << line;
  }
  return os.str();
}

struct CommonOpts {
  std::string input;
  std::string format = "table";
  std::string output;
  double tol = kDefaultTol;
  std::vector<double> weights;
  int max_n = 16;
};

void emit(const std::string& text, const CommonOpts& opts) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output);
  if (!out) throw ValidationError("cannot write output file: " + opts.output);
  out << text;
}

void emit_result(const CommonOpts& opts, const Json& as_json, const std::string& as_table) {
  if (opts.format == "json")
    emit(as_json.dump(2) + "\n", opts);
  else
    emit(as_table, opts);
}

ObjectiveWeights weights_for(const CommonOpts& opts, int n) {
  if (opts.weights.empty()) return ObjectiveWeights::unit(n);
  if (opts.weights.size() != 3)
    throw ValidationError("--weights expects three comma-separated positive values f1,f2,f3");
  ObjectiveWeights w = ObjectiveWeights::unit(n);
  w.f1 *= opts.weights[0];
  w.f2 *= opts.weights[1];
  w.f3 *= opts.weights[2];
  return w;
}

void add_common(CLI::App* cmd, CommonOpts* opts, bool needs_input = true) {
  auto* in = cmd->add_option("--input", opts->input, "scenario JSON file");
  if (needs_input) in->required();
  cmd->add_option("--format", opts->format, "output format: table or json")
      ->check(CLI::IsMember({"table", "json"}));
  cmd->add_option("--output", opts->output, "write the report to a file instead of stdout");
  cmd->add_option("--tol", opts->tol, "absolute money-comparison tolerance");
  cmd->add_option("--weights", opts->weights,
                  "objective weights f1,f2,f3 for the integer programs")
      ->delimiter(',');
  cmd->add_option("--max-n", opts->max_n, "largest n the regime enumeration accepts");
}

struct Timed {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void emit_pair(const CommonOpts& opts, const std::string& command, const Scenario& sc,
               const ClearingPair& pair, double wall_ms,
               const std::vector<std::pair<std::string, Json>>& extras = {}) {
  Json j;
  j["command"] = command;
  if (!sc.name.empty()) j["scenario"] = sc.name;
  j["n"] = sc.data.n;
  j.update(pair_json(pair));
  j["wall_ms"] = wall_ms;
  for (const auto& [key, value] : extras) j[key] = value;

  std::ostringstream table;
  table << command;
  if (!sc.name.empty()) table << " on " << sc.name;
  table << "\n" << pair_table(pair);
  for (const auto& [key, value] : extras) table << key << ": " << value.dump() << "\n";
  table << "wall_ms: " << fmt9(wall_ms) << "\n";
  emit_result(opts, j, table.str());
}

std::string regime_string(const RegimeVector& b) {
  std::string s(b.size(), '0');
  for (int i = 0; i < b.size(); ++i) s[i] = b.bits[i] ? '1' : '0';
  return s;
}

int run_app(int argc, char** argv) {
  CLI::App app{
      "clearnet: clearing vectors and equities for interbank networks with "
      "cross-holdings and default charges"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* c_validate = app.add_subcommand("validate", "parse and validate a scenario");
  add_common(c_validate, &opts);
  c_validate->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    const Bounds bounds = compute_bounds(net);
    Json j;
    j["command"] = "validate";
    if (!sc.name.empty()) j["scenario"] = sc.name;
    j["valid"] = true;
    j["n"] = net.size();
    j["theta_max_row_sum"] = net.theta_max_row_sum();
    j["theta_inf_norm_lt_one"] = net.theta_inf_norm_lt_one();
    j["kappa"] = bounds.kappa;
    j["kappa1"] = bounds.kappa1;
    std::ostringstream table;
    table << "valid scenario";
    if (!sc.name.empty()) table << " '" << sc.name << "'";
    table << ": n=" << net.size()
          << " theta_max_row_sum=" << fmt9(net.theta_max_row_sum())
          << " strict=" << (net.theta_inf_norm_lt_one() ? "yes" : "no")
          << " kappa=" << fmt9(bounds.kappa) << " kappa1=" << fmt9(bounds.kappa1) << "\n";
    emit_result(opts, j, table.str());
  });

  auto* c_max = app.add_subcommand("max", "greatest clearing pair (regime-set descent)");
  add_common(c_max, &opts);
  c_max->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    Timed timer;
    const auto pair = max_fixpoint(net, RegimeVector::ones(net.size()), opts.tol);
    emit_pair(opts, "max", sc, pair, timer.ms());
  });

  auto* c_min = app.add_subcommand("min", "least clearing pair (regime-set ascent)");
  add_common(c_min, &opts);
  c_min->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    Timed timer;
    const auto pair = min_fixpoint(net, RegimeVector::zeros(net.size()), opts.tol);
    emit_pair(opts, "min", sc, pair, timer.ms());
  });

  auto* c_enum = app.add_subcommand("enumerate", "all clearing vectors over every regime");
  add_common(c_enum, &opts);
  c_enum->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    Timed timer;
    const auto set = enumerate_clearing_set(net, opts.max_n, opts.tol);
    const double ms = timer.ms();

    Json j;
    j["command"] = "enumerate";
    if (!sc.name.empty()) j["scenario"] = sc.name;
    j["n"] = net.size();
    j["regimes"] = set.entries.size();
    Json entries = Json::array();
    for (const auto& entry : set.entries) {
      Json e;
      e["b"] = regime_string(entry.b);
      e["p_min"] = vec_json(entry.minimal.p);
      e["p_max"] = vec_json(entry.maximal.p);
      e["unique"] = entry.unique_hint;
      e["verified"] = entry.min_verified && entry.max_verified;
      entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    Json distinct = Json::array();
    for (const auto& pair : set.distinct) distinct.push_back(vec_json(pair.p));
    j["distinct"] = std::move(distinct);
    j["global_min"] = pair_json(set.global_min);
    j["global_max"] = pair_json(set.global_max);
    j["wall_ms"] = ms;

    std::ostringstream table;
    table << "enumerate: " << set.entries.size() << " regimes, " << set.distinct.size()
          << " distinct clearing vectors\n";
    for (const auto& entry : set.entries) {
      table << "b=" << regime_string(entry.b) << "  p_min=[";
      for (int i = 0; i < entry.minimal.p.size(); ++i)
        table << (i ? ", " : "") << fmt9(entry.minimal.p(i));
      table << "]  p_max=[";
      for (int i = 0; i < entry.maximal.p.size(); ++i)
        table << (i ? ", " : "") << fmt9(entry.maximal.p(i));
      table << "]" << (entry.unique_hint ? "" : "  (multiplicity)") << "\n";
    }
    table << "global_min:\n" << pair_table(set.global_min);
    table << "global_max:\n" << pair_table(set.global_max);
    table << "wall_ms: " << fmt9(ms) << "\n";
    emit_result(opts, j, table.str());
  });

  std::string mps_path;
  auto* c_milpmax = app.add_subcommand("milp-max", "greatest clearing pair via P1");
  add_common(c_milpmax, &opts);
  c_milpmax->add_option("--export-mps", mps_path, "also write the instance in MPS format");
  c_milpmax->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    const auto weights = weights_for(opts, net.size());
    if (!mps_path.empty()) {
      std::ofstream mps(mps_path);
      if (!mps) throw ValidationError("cannot write MPS file: " + mps_path);
      write_mps(build_P1(net, weights), mps);
    }
    Timed timer;
    const auto result = maximal_pair_via_milp(net, weights, {}, opts.tol);
    emit_pair(opts, "milp-max", sc, result.pair, timer.ms(),
              {{"nodes", Json(result.solution.nodes)},
               {"objective", Json(result.solution.objective)},
               {"lemma_indicator", Json(*result.solution.lemma_p1_indicator)}});
  });

  auto* c_milpmin = app.add_subcommand("milp-min", "least clearing pair via P2");
  add_common(c_milpmin, &opts);
  c_milpmin->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    const auto weights = weights_for(opts, net.size());
    Timed timer;
    const auto result = minimal_pair_via_milp(net, weights, {}, opts.tol);
    emit_pair(opts, "milp-min", sc, result.pair, timer.ms(),
              {{"nodes", Json(result.solution.nodes)},
               {"objective", Json(result.solution.objective)},
               {"equality_flag", Json(result.equality_flag)}});
  });

  auto* c_gauss =
      app.add_subcommand("gauss", "greatest clearing pair via Gaussian-type elimination");
  add_common(c_gauss, &opts);
  c_gauss->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    Timed timer;
    GaussianTrace trace;
    const auto pair = gaussian_max_clearing(net, opts.tol, &trace);
    emit_pair(opts, "gauss", sc, pair, timer.ms(),
              {{"eliminations", Json(trace.eliminations)},
               {"degenerate_branch", Json(trace.degenerate_taken)}});
  });

  auto* c_compare = app.add_subcommand("compare", "run all applicable methods and diff them");
  add_common(c_compare, &opts);
  c_compare->callback([&] {
    const Scenario sc = ingest(opts.input);
    const auto net = FinancialNetwork::build(sc.data);
    const auto weights = weights_for(opts, net.size());
    const auto report = compare_methods(net, weights, opts.tol, 1e-6, opts.max_n);

    Json j;
    j["command"] = "compare";
    if (!sc.name.empty()) j["scenario"] = sc.name;
    j["n"] = net.size();
    const auto methods_json = [](const std::vector<MethodResult>& group) {
      Json arr = Json::array();
      for (const auto& r : group) {
        Json m;
        m["method"] = r.method;
        m["applicable"] = r.applicable;
        if (!r.applicable) {
          m["note"] = r.note;
        } else {
          m.update(pair_json(r.pair));
          m["wall_ms"] = r.wall_ms;
          if (r.nodes >= 0) m["nodes"] = r.nodes;
          if (r.eliminations >= 0) m["eliminations"] = r.eliminations;
        }
        arr.push_back(std::move(m));
      }
      return arr;
    };
    j["maximal"] = methods_json(report.maximal);
    j["minimal"] = methods_json(report.minimal);
    const auto deltas_json = [](const std::vector<PairwiseDelta>& deltas) {
      Json arr = Json::array();
      for (const auto& d : deltas)
        arr.push_back(Json{{"first", d.first}, {"second", d.second}, {"sup", d.sup}});
      return arr;
    };
    j["deltas_max"] = deltas_json(report.deltas_max);
    j["deltas_min"] = deltas_json(report.deltas_min);
    j["agree_tol"] = report.agree_tol;
    j["agreement"] = report.agreement;
    j["p2_equality_flag"] = report.p2_equality_flag;

    std::ostringstream table;
    table << "compare";
    if (!sc.name.empty()) table << " on " << sc.name;
    table << "\n";
    const auto table_group = [&](const char* label, const std::vector<MethodResult>& group) {
      table << label << ":\n";
      for (const auto& r : group) {
        table << "  " << r.method << ": ";
        if (!r.applicable) {
          table << "skipped (" << r.note << ")\n";
          continue;
        }
        table << "p=[";
        for (int i = 0; i < r.pair.p.size(); ++i)
          table << (i ? ", " : "") << fmt9(r.pair.p(i));
        table << "] wall_ms=" << fmt9(r.wall_ms);
        if (r.nodes >= 0) table << " nodes=" << r.nodes;
        if (r.eliminations >= 0) table << " eliminations=" << r.eliminations;
        table << "\n";
      }
    };
    table_group("maximal", report.maximal);
    table_group("minimal", report.minimal);
    for (const auto& d : report.deltas_max)
      table << "delta " << d.first << " vs " << d.second << ": " << fmt9(d.sup) << "\n";
    for (const auto& d : report.deltas_min)
      table << "delta " << d.first << " vs " << d.second << ": " << fmt9(d.sup) << "\n";
    table << "p2_equality_flag: " << (report.p2_equality_flag ? "true" : "false") << "\n";
    table << "agreement at " << fmt9(report.agree_tol) << ": "
          << (report.agreement ? "yes" : "NO") << "\n";
    emit_result(opts, j, table.str());
  });

  GenOptions gen;
  bool no_holdings = false;
  double abg_flag = -1.0;
  auto* c_gen = app.add_subcommand("gen", "write a seeded random scenario");
  add_common(c_gen, &opts, /*needs_input=*/false);
  c_gen->add_option("--seed", gen.seed, "generator seed")->required();
  c_gen->add_option("--n", gen.n, "bank count")->required();
  c_gen->add_option("--density", gen.density, "liability/holdings sparsity in (0,1]");
  c_gen->add_option("--shock", gen.shock, "cash haircut in [0,1]");
  c_gen->add_option("--abg", abg_flag, "fix alpha=beta=gamma instead of drawing");
  c_gen->add_flag("--no-holdings", no_holdings, "generate without cross-holdings");
  c_gen->callback([&] {
    if (abg_flag >= 0.0) gen.abg = abg_flag;
    gen.with_holdings = !no_holdings;
    const Scenario sc = gen_random_network(gen);
    const std::string text = scenario_to_text(sc);
    if (opts.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(opts.output);
      if (!out) throw ValidationError("cannot write output file: " + opts.output);
      out << text;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
