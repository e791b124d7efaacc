#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bettitest/geometry.hpp"
#include "bettitest/homology.hpp"
#include "json.hpp"

namespace bettitest {

enum class Regime { critical, supercritical };
Regime parse_regime(std::string_view name);
std::string to_string(Regime regime);

/// ε(n) = n^{-1/d}; n·ε^d stays at 1.
double epsilon_critical(double n, std::size_t d);
/// ε(n) = (ln n / n)^{1/d}; n·ε^d = ln n diverges. Throws DomainError for n < 2.
double epsilon_supercritical(double n, std::size_t d);

/// Ball radius as a function of the sample size, for data in R^d.
struct ThresholdRule {
  Regime regime = Regime::critical;
  std::size_t dim = 2;

  double epsilon(std::size_t n) const;
};

/// Σ |est_i - hyp_i|. Throws LengthMismatch.
std::int64_t one_sample_statistic(const BettiVector& est, const BettiVector& hyp);
/// Σ |a_i - b_i|. Throws LengthMismatch.
std::int64_t two_sample_statistic(const BettiVector& a, const BettiVector& b);

enum class QuantileMode { one_minus_half_alpha, one_minus_alpha };
QuantileMode parse_quantile_mode(std::string_view name);
std::string to_string(QuantileMode mode);
double quantile_level(double alpha, QuantileMode mode);

/// Order statistic of rank ceil(r * q) (1-based, no interpolation) with
/// q = quantile_level(alpha, mode). Throws EmptyInput for r = 0 and
/// DomainError unless 0 < alpha < 1.
double estimate_critical_value(std::span<const double> null_statistics, double alpha,
                               QuantileMode mode = QuantileMode::one_minus_half_alpha);

/// Draws a cloud of n points from a fixed distribution, deterministically in seed.
using Sampler = std::function<PointCloud(std::size_t n, std::uint64_t seed)>;

struct TestOptions {
  ScalingMode scaling = ScalingMode::per_point_norm;
  QuantileMode quantile = QuantileMode::one_minus_half_alpha;
  std::size_t threads = 1;
};

/// Betti numbers β_0..β_{d-1} of the Rips complex of the (scaled) cloud at
/// ball radius rule.epsilon(n), built up to dimension d.
BettiVector estimate_betti(const PointCloud& pc, const ThresholdRule& rule, ScalingMode scaling);

struct TestReport {
  std::int64_t statistic = 0;
  double critical_value = 0.0;
  bool reject = false;
  double alpha = 0.05;
  Regime regime = Regime::critical;
  std::size_t n = 0;
  std::size_t n2 = 0;  // two-sample only
  double epsilon = 0.0;
  BettiVector betti;
  BettiVector betti2;  // two-sample only
  std::vector<double> null_statistics;
};

void to_json(nlohmann::json& j, const TestReport& report);

/// Rejects when T_n exceeds the quantile of r null statistics computed on
/// samples of the same size from null_sampler.
TestReport one_sample_test(const PointCloud& pc, const BettiVector& hypothesis, const ThresholdRule& rule,
                           double alpha, std::size_t r, std::uint64_t seed, const Sampler& null_sampler,
                           const TestOptions& options = {});

/// Two-sample analogue; null statistics compare two independent null_sampler
/// draws of sizes n1 and n2.
TestReport two_sample_test(const PointCloud& x, const PointCloud& y, const ThresholdRule& rule, double alpha,
                           std::size_t r, std::uint64_t seed, const Sampler& null_sampler,
                           const TestOptions& options = {});

struct PowerEstimate {
  double power = 0.0;
  std::size_t rejections = 0;
  std::size_t r = 0;
  double alpha = 0.05;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double critical_value = 0.0;
  std::vector<double> null_statistics;
  std::vector<double> alternative_statistics;
};

/// Monte Carlo power of the one-sample test: r replications each draw a null
/// and an alternative sample of size n.
PowerEstimate one_sample_power(const Sampler& null_sampler, const Sampler& alt_sampler, const BettiVector& hypothesis,
                               const ThresholdRule& rule, double alpha, std::size_t r, std::size_t n,
                               std::uint64_t seed, const TestOptions& options = {});

/// Monte Carlo power of the two-sample test. Under the null both samples come
/// from sampler1; under the alternative one from each sampler.
PowerEstimate two_sample_power(const Sampler& sampler1, const Sampler& sampler2, const ThresholdRule& rule,
                               double alpha, std::size_t r, std::size_t n, std::uint64_t seed,
                               const TestOptions& options = {});

struct DisconnectionRow {
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t disconnected = 0;
  double fraction = 0.0;
};

/// For each n, the fraction of reps whose Rips complex at rule.epsilon(n) is
/// not connected. Points are used as sampled.
std::vector<DisconnectionRow> check_disconnection(const Sampler& sampler, const ThresholdRule& rule,
                                                  std::span<const std::size_t> n_list, std::size_t reps,
                                                  std::uint64_t seed, std::size_t threads = 1);

/// Seed of replication `rep`, stream `stream`.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep, std::uint64_t stream);

}  // namespace bettitest
