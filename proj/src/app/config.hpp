#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bettitest/baselines.hpp"
#include "bettitest/error.hpp"
#include "bettitest/samplers.hpp"
#include "bettitest/stats.hpp"
#include "json.hpp"

namespace bettitest::app {

/// Carries every problem found in a config, one per line of what().
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class TestKind { one_sample, two_sample };

enum class Method { betti, robinson, landscape, permutation };
Method parse_method(const std::string& name);
std::string to_string(Method method);

struct BaselineSettings {
  std::size_t n_permutations = 30;
  double max_threshold = 4.0;
  std::size_t dim = 1;
  double p = 1.0;
  double q = 1.0;
  std::size_t grid_points = 1000;
  std::size_t r = 10;
};

struct ExperimentConfig {
  std::string scenario = "experiment";
  TestKind test = TestKind::two_sample;
  DistributionSpec null_spec;
  std::optional<DistributionSpec> alt_spec;
  BettiVector hypothesis;
  Regime regime = Regime::critical;
  double alpha = 0.05;
  std::size_t r = 100;
  std::vector<std::size_t> n_list{20, 50, 100, 150, 200};
  std::uint64_t seed = 1;
  ScalingMode scaling = ScalingMode::per_point_norm;
  QuantileMode quantile = QuantileMode::one_minus_half_alpha;
  std::vector<Method> methods{Method::betti};
  BaselineSettings baseline;
  std::size_t reps = 50;
  std::string csv_path;
  std::string svg_path;

  std::size_t dim() const { return null_spec.ambient_dim(); }
};

/// Reads a config with `schema: 1`. Throws ConfigError listing every
/// violated invariant.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace bettitest::app
