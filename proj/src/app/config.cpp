#include "app/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace bettitest::app {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out = "invalid config:";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

/// Reads fields, recording problems instead of stopping at the first one.
class Reader {
 public:
  explicit Reader(const nlohmann::json& j) : j_(j) {}

  template <typename T, typename F>
  void get(const char* key, F&& assign) {
    if (!j_.contains(key)) return;
    try {
      assign(j_.at(key).get<T>());
    } catch (const nlohmann::json::exception&) {
      problems.push_back(std::string(key) + ": wrong type");
    } catch (const std::exception& e) {
      problems.push_back(std::string(key) + ": " + e.what());
    }
  }

  template <typename F>
  void spec(const char* key, F&& assign) {
    if (!j_.contains(key)) return;
    try {
      auto s = j_.at(key).get<DistributionSpec>();
      s.validate();
      assign(std::move(s));
    } catch (const std::exception& e) {
      problems.push_back(std::string(key) + ": " + e.what());
    }
  }

  std::vector<std::string> problems;

 private:
  const nlohmann::json& j_;
};

const std::set<std::string> kKeys{"schema", "scenario", "test",   "null",    "alt",      "hypothesis",
                                  "regime", "alpha",    "r",      "n_list",  "seed",     "scaling",
                                  "quantile", "methods", "baseline", "reps", "output"};
const std::set<std::string> kBaselineKeys{"n_permutations", "max_threshold", "dim", "p", "q", "grid_points", "r"};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(join_lines(problems)), problems_(std::move(problems)) {}

Method parse_method(const std::string& name) {
  if (name == "betti") return Method::betti;
  if (name == "robinson") return Method::robinson;
  if (name == "landscape") return Method::landscape;
  if (name == "permutation") return Method::permutation;
  throw InvalidSpec("unknown method '" + name + "'");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::betti:
      return "betti";
    case Method::robinson:
      return "robinson";
    case Method::landscape:
      return "landscape";
    case Method::permutation:
      return "permutation";
  }
  return "?";
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError({"config must be a JSON object"});
  ExperimentConfig c;
  Reader rd(j);

  for (const auto& [key, _] : j.items())
    if (!kKeys.contains(key)) rd.problems.push_back(key + ": unknown key");

  if (!j.contains("schema"))
    rd.problems.push_back("schema: missing (expected 1)");
  else
    rd.get<int>("schema", [&](int v) {
      if (v != 1) throw InvalidSpec("unsupported version " + std::to_string(v) + " (expected 1)");
    });

  rd.get<std::string>("scenario", [&](std::string v) {
    if (v.empty() || v.find_first_of(",\"\n") != std::string::npos)
      throw InvalidSpec("must be nonempty without commas, quotes or newlines");
    c.scenario = std::move(v);
  });
  rd.get<std::string>("test", [&](const std::string& v) {
    if (v == "one_sample")
      c.test = TestKind::one_sample;
    else if (v == "two_sample")
      c.test = TestKind::two_sample;
    else
      throw InvalidSpec("must be one_sample or two_sample");
  });

  bool have_null = false;
  if (!j.contains("null")) rd.problems.push_back("null: missing distribution");
  rd.spec("null", [&](DistributionSpec s) {
    c.null_spec = std::move(s);
    have_null = true;
  });
  rd.spec("alt", [&](DistributionSpec s) { c.alt_spec = std::move(s); });
  if (have_null && c.alt_spec && c.alt_spec->ambient_dim() != c.null_spec.ambient_dim())
    rd.problems.push_back("alt: ambient dimension " + std::to_string(c.alt_spec->ambient_dim()) +
                          " differs from null dimension " + std::to_string(c.null_spec.ambient_dim()));

  rd.get<BettiVector>("hypothesis", [&](BettiVector v) {
    for (auto b : v)
      if (b < 0) throw InvalidSpec("Betti numbers must be >= 0");
    c.hypothesis = std::move(v);
  });
  if (c.test == TestKind::one_sample && have_null) {
    if (!j.contains("hypothesis"))
      rd.problems.push_back("hypothesis: required for one_sample tests");
    else if (c.hypothesis.size() != c.dim())
      rd.problems.push_back("hypothesis: length must equal the data dimension " + std::to_string(c.dim()));
  }

  rd.get<std::string>("regime", [&](const std::string& v) { c.regime = parse_regime(v); });
  rd.get<double>("alpha", [&](double v) {
    if (!(v > 0.0 && v < 1.0)) throw InvalidSpec("must lie in (0, 1)");
    c.alpha = v;
  });
  rd.get<long long>("r", [&](long long v) {
    if (v < 1) throw InvalidSpec("must be >= 1");
    c.r = static_cast<std::size_t>(v);
  });
  rd.get<std::vector<long long>>("n_list", [&](const std::vector<long long>& v) {
    if (v.empty()) throw InvalidSpec("must be nonempty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 2) throw InvalidSpec("sample sizes must be >= 2");
      if (i > 0 && v[i] <= v[i - 1]) throw InvalidSpec("must be strictly increasing");
    }
    c.n_list.assign(v.begin(), v.end());
  });
  rd.get<std::uint64_t>("seed", [&](std::uint64_t v) { c.seed = v; });
  rd.get<std::string>("scaling", [&](const std::string& v) { c.scaling = parse_scaling_mode(v); });
  rd.get<std::string>("quantile", [&](const std::string& v) { c.quantile = parse_quantile_mode(v); });
  rd.get<std::vector<std::string>>("methods", [&](const std::vector<std::string>& v) {
    if (v.empty()) throw InvalidSpec("must be nonempty");
    c.methods.clear();
    for (const auto& m : v) c.methods.push_back(parse_method(m));
  });
  rd.get<long long>("reps", [&](long long v) {
    if (v < 1) throw InvalidSpec("must be >= 1");
    c.reps = static_cast<std::size_t>(v);
  });

  if (j.contains("baseline")) {
    const auto& b = j.at("baseline");
    if (!b.is_object()) {
      rd.problems.push_back("baseline: must be an object");
    } else {
      for (const auto& [key, _] : b.items())
        if (!kBaselineKeys.contains(key)) rd.problems.push_back("baseline." + key + ": unknown key");
      Reader br(b);
      auto positive_count = [](long long v) {
        if (v < 1) throw InvalidSpec("must be >= 1");
        return static_cast<std::size_t>(v);
      };
      br.get<long long>("n_permutations", [&](long long v) { c.baseline.n_permutations = positive_count(v); });
      br.get<long long>("r", [&](long long v) { c.baseline.r = positive_count(v); });
      br.get<long long>("grid_points", [&](long long v) { c.baseline.grid_points = positive_count(v); });
      br.get<long long>("dim", [&](long long v) {
        if (v < 0) throw InvalidSpec("must be >= 0");
        c.baseline.dim = static_cast<std::size_t>(v);
      });
      br.get<double>("max_threshold", [&](double v) {
        if (!(v > 0.0)) throw InvalidSpec("must be > 0");
        c.baseline.max_threshold = v;
      });
      br.get<double>("p", [&](double v) {
        if (!(v >= 1.0)) throw InvalidSpec("must be >= 1");
        c.baseline.p = v;
      });
      br.get<double>("q", [&](double v) {
        if (!(v >= 1.0)) throw InvalidSpec("must be >= 1");
        c.baseline.q = v;
      });
      for (auto& p : br.problems) rd.problems.push_back("baseline." + p);
    }
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) {
      rd.problems.push_back("output: must be an object");
    } else {
      Reader orr(o);
      for (const auto& [key, _] : o.items())
        if (key != "csv" && key != "svg") rd.problems.push_back("output." + key + ": unknown key");
      orr.get<std::string>("csv", [&](std::string v) { c.csv_path = std::move(v); });
      orr.get<std::string>("svg", [&](std::string v) { c.svg_path = std::move(v); });
      for (auto& p : orr.problems) rd.problems.push_back("output." + p);
    }
  }

  if (!rd.problems.empty()) throw ConfigError(std::move(rd.problems));
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path});
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
  return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"schema", 1},
                   {"scenario", c.scenario},
                   {"test", c.test == TestKind::one_sample ? "one_sample" : "two_sample"},
                   {"null", c.null_spec},
                   {"regime", to_string(c.regime)},
                   {"alpha", c.alpha},
                   {"r", c.r},
                   {"n_list", c.n_list},
                   {"seed", c.seed},
                   {"scaling", to_string(c.scaling)},
                   {"quantile", to_string(c.quantile)},
                   {"reps", c.reps}};
  if (c.alt_spec) j["alt"] = *c.alt_spec;
  if (!c.hypothesis.empty()) j["hypothesis"] = c.hypothesis;
  std::vector<std::string> methods;
  for (auto m : c.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["baseline"] = {{"n_permutations", c.baseline.n_permutations},
                   {"max_threshold", c.baseline.max_threshold},
                   {"dim", c.baseline.dim},
                   {"p", c.baseline.p},
                   {"q", c.baseline.q},
                   {"grid_points", c.baseline.grid_points},
                   {"r", c.baseline.r}};
  if (!c.csv_path.empty() || !c.svg_path.empty()) {
    j["output"] = nlohmann::json::object();
    if (!c.csv_path.empty()) j["output"]["csv"] = c.csv_path;
    if (!c.svg_path.empty()) j["output"]["svg"] = c.svg_path;
  }
  return j;
}

}  // namespace bettitest::app
