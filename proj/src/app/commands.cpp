#include "app/commands.hpp"

namespace bettitest::app {

Sampler sampler_for(const DistributionSpec& spec) {
  return [spec](std::size_t n, std::uint64_t seed) { return sample(spec, n, seed); };
}

namespace {

PermutationLoss loss_for(Method m) {
  switch (m) {
    case Method::robinson:
      return PermutationLoss::wasserstein_joint;
    case Method::landscape:
      return PermutationLoss::mean_landscape_diff;
    default:
      return PermutationLoss::wasserstein_plain;
  }
}

}  // namespace

std::vector<PowerRow> run_power(const ExperimentConfig& config, std::span<const Method> methods,
                                std::size_t threads) {
  if (!config.alt_spec) throw ConfigError({"alt: required for power estimation"});
  const auto null = sampler_for(config.null_spec);
  const auto alt = sampler_for(*config.alt_spec);
  const ThresholdRule rule{config.regime, config.dim()};
  TestOptions options;
  options.scaling = config.scaling;
  options.quantile = config.quantile;
  options.threads = threads;

  std::vector<PowerRow> rows;
  for (const Method method : methods) {
    for (const std::size_t n : config.n_list) {
      PowerRow row;
      row.scenario = config.scenario;
      row.method = to_string(method);
      row.regime = config.regime;
      row.n = n;
      row.alpha = config.alpha;
      row.seed = config.seed;
      if (method == Method::betti) {
        const auto est = config.test == TestKind::one_sample
                             ? one_sample_power(null, alt, config.hypothesis, rule, config.alpha, config.r, n,
                                                config.seed, options)
                             : two_sample_power(null, alt, rule, config.alpha, config.r, n, config.seed, options);
        row.r = est.r;
        row.power = est.power;
      } else {
        PermutationConfig pc;
        pc.loss = loss_for(method);
        pc.n_permutations = config.baseline.n_permutations;
        pc.max_threshold = config.baseline.max_threshold;
        pc.dim = config.baseline.dim;
        pc.p = config.baseline.p;
        pc.q = config.baseline.q;
        pc.grid_points = config.baseline.grid_points;
        pc.threads = threads;
        const auto est =
            permutation_power(null, alt, pc, config.alpha, config.baseline.r, n, config.seed, config.scaling);
        row.r = est.r;
        row.power = est.power;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<DisconnectionRow> run_check_a2(const ExperimentConfig& config, std::size_t threads) {
  const ThresholdRule rule{config.regime, config.dim()};
  return check_disconnection(sampler_for(config.null_spec), rule, config.n_list, config.reps, config.seed, threads);
}

}  // namespace bettitest::app
