#include "clearnet/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace clearnet {

namespace {

using Json = nlohmann::ordered_json;

double require_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ValidationError(std::string("field '") + key + "': expected a number");
  return j[key].get<double>();
}

Vec parse_vector(const Json& j, const char* key, int n) {
  if (!j.contains(key) || !j[key].is_array() || static_cast<int>(j[key].size()) != n)
    throw ValidationError(std::string("field '") + key + "': expected an array of " +
                          std::to_string(n) + " numbers");
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[key][i].is_number())
      throw ValidationError(std::string("field '") + key + "[" + std::to_string(i) +
                            "]': expected a number");
    v(i) = j[key][i].get<double>();
  }
  return v;
}

Mat parse_matrix(const Json& j, const char* key, int n) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError(std::string("field '") + key + "': expected an array");
  const Json& arr = j[key];
  Mat m = Mat::Zero(n, n);
  if (!arr.empty() && arr[0].is_object()) {
    // triplet encoding: accumulate duplicates
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const Json& t = arr[k];
      if (!t.contains("from") || !t.contains("to") || !t.contains("amount"))
        throw ValidationError(std::string("field '") + key + "[" + std::to_string(k) +
                              "]': triplet needs from, to, amount");
      const int from = t["from"].get<int>();
      const int to = t["to"].get<int>();
      if (from < 0 || from >= n || to < 0 || to >= n)
        throw ValidationError(std::string("field '") + key + "[" + std::to_string(k) +
                              "]': index out of range");
      m(from, to) += t["amount"].get<double>();
    }
    return m;
  }
  if (static_cast<int>(arr.size()) != n)
    throw ValidationError(std::string("field '") + key + "': expected " +
                          std::to_string(n) + " rows");
  for (int i = 0; i < n; ++i) {
    if (!arr[i].is_array() || static_cast<int>(arr[i].size()) != n)
      throw ValidationError(std::string("field '") + key + "' row " + std::to_string(i) +
                            ": expected " + std::to_string(n) + " numbers");
    for (int c = 0; c < n; ++c) m(i, c) = arr[i][c].get<double>();
  }
  return m;
}

Scenario from_json(const Json& j) {
  Scenario s;
  if (j.contains("name")) s.name = j["name"].get<std::string>();
  if (j.contains("description")) s.description = j["description"].get<std::string>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();

  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ValidationError("field 'n': expected an integer bank count");
  s.data.n = j["n"].get<int>();
  if (s.data.n < 1) throw ValidationError("field 'n': must be at least 1");

  s.data.alpha = require_number(j, "alpha");
  s.data.beta = require_number(j, "beta");
  s.data.gamma = require_number(j, "gamma");
  s.data.cash = parse_vector(j, "cash", s.data.n);
  s.data.liabilities = parse_matrix(j, "liabilities", s.data.n);
  s.data.holdings = parse_matrix(j, "holdings", s.data.n);

  FinancialNetwork::build(s.data);  // full validation; throws ValidationError
  return s;
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ValidationError(std::string("scenario parse error: ") + err.what());
  }
  return from_json(j);
}

Scenario ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string scenario_to_text(const Scenario& s) {
  Json j;
  if (!s.name.empty()) j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  if (s.seed) j["seed"] = *s.seed;
  j["n"] = s.data.n;
  j["alpha"] = s.data.alpha;
  j["beta"] = s.data.beta;
  j["gamma"] = s.data.gamma;
  Json cash = Json::array();
  for (int i = 0; i < s.data.n; ++i) cash.push_back(s.data.cash(i));
  j["cash"] = std::move(cash);
  j["liabilities"] = matrix_to_json(s.data.liabilities);
  j["holdings"] = matrix_to_json(s.data.holdings);
  return j.dump(2) + "\n";
}

void write_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write scenario file: " + path.string());
  out << scenario_to_text(s);
}

namespace {

// Engine-independent uniform in [0,1): identical streams for identical seeds
// on every platform.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : eng_(seed) {}
  double next() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace

Scenario gen_random_network(const GenOptions& opts) {
  if (opts.n < 1) throw ValidationError("generator: n must be at least 1");
  if (!(opts.density > 0.0 && opts.density <= 1.0))
    throw ValidationError("generator: density must lie in (0,1]");
  if (!(opts.shock >= 0.0 && opts.shock <= 1.0))
    throw ValidationError("generator: shock must lie in [0,1]");
  if (opts.abg && !(*opts.abg >= 0.0 && *opts.abg <= 1.0))
    throw ValidationError("generator: abg must lie in [0,1]");

  Uniform rng(opts.seed);
  const int n = opts.n;
  NetworkData data;
  data.n = n;
  data.liabilities = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool present = rng.next() < opts.density;
      const double amount = 10.0 * rng.next();
      if (present) data.liabilities(i, j) = amount;
    }

  data.holdings = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool present = rng.next() < opts.density;
      const double share = rng.next();
      if (present && opts.with_holdings) data.holdings(i, j) = share;
    }
    const double row_sum = data.holdings.row(i).sum();
    if (row_sum > 0.9) data.holdings.row(i) *= 0.9 / row_sum;
  }

  data.cash = Vec::Zero(n);
  for (int i = 0; i < n; ++i) data.cash(i) = 5.0 * rng.next() * (1.0 - opts.shock);

  const double abg = opts.abg ? *opts.abg : 1.0 - rng.next();  // (0,1]
  data.alpha = data.beta = data.gamma = abg;

  Scenario s;
  s.seed = opts.seed;
  std::ostringstream name;
  name << "rand-s" << opts.seed << "-n" << n;
  s.name = name.str();
  s.data = std::move(data);

  FinancialNetwork::build(s.data);  // the generated data always validates
  return s;
}

}  // namespace clearnet
