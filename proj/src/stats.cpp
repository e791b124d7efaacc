#include "bettitest/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bettitest/complex.hpp"
#include "bettitest/error.hpp"
#include "bettitest/parallel.hpp"
#include "bettitest/rng.hpp"

namespace bettitest {

Regime parse_regime(std::string_view name) {
  if (name == "critical") return Regime::critical;
  if (name == "supercritical") return Regime::supercritical;
  throw DomainError("unknown regime '" + std::string(name) + "'");
}

std::string to_string(Regime regime) { return regime == Regime::critical ? "critical" : "supercritical"; }

double epsilon_critical(double n, std::size_t d) {
  if (!(n >= 1.0) || d == 0) throw DomainError("epsilon_critical requires n >= 1 and d >= 1");
  return std::pow(n, -1.0 / static_cast<double>(d));
}

double epsilon_supercritical(double n, std::size_t d) {
  if (!(n >= 2.0) || d == 0) throw DomainError("epsilon_supercritical requires n >= 2 and d >= 1");
  return std::pow(std::log(n) / n, 1.0 / static_cast<double>(d));
}

double ThresholdRule::epsilon(std::size_t n) const {
  const auto nn = static_cast<double>(n);
  return regime == Regime::critical ? epsilon_critical(nn, dim) : epsilon_supercritical(nn, dim);
}

namespace {

std::int64_t l1(const BettiVector& a, const BettiVector& b) {
  if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

}  // namespace

std::int64_t one_sample_statistic(const BettiVector& est, const BettiVector& hyp) { return l1(est, hyp); }
std::int64_t two_sample_statistic(const BettiVector& a, const BettiVector& b) { return l1(a, b); }

QuantileMode parse_quantile_mode(std::string_view name) {
  if (name == "one_minus_half_alpha") return QuantileMode::one_minus_half_alpha;
  if (name == "one_minus_alpha") return QuantileMode::one_minus_alpha;
  throw DomainError("unknown quantile mode '" + std::string(name) + "'");
}

std::string to_string(QuantileMode mode) {
  return mode == QuantileMode::one_minus_half_alpha ? "one_minus_half_alpha" : "one_minus_alpha";
}

double quantile_level(double alpha, QuantileMode mode) {
  return mode == QuantileMode::one_minus_half_alpha ? 1.0 - alpha / 2.0 : 1.0 - alpha;
}

double estimate_critical_value(std::span<const double> null_statistics, double alpha, QuantileMode mode) {
  if (null_statistics.empty()) throw EmptyInput("critical value needs at least one null statistic");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  std::vector<double> sorted(null_statistics.begin(), null_statistics.end());
  std::sort(sorted.begin(), sorted.end());
  const double r = static_cast<double>(sorted.size());
  // The small slack keeps exact products such as 10 * 0.9 from rounding up a rank.
  auto rank = static_cast<std::size_t>(std::ceil(r * quantile_level(alpha, mode) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

BettiVector estimate_betti(const PointCloud& pc, const ThresholdRule& rule, ScalingMode scaling) {
  if (rule.dim != pc.dim())
    throw DomainError("threshold rule dimension " + std::to_string(rule.dim) + " does not match data dimension " +
                      std::to_string(pc.dim()));
  const auto scaled = apply_scaling(pc, scaling);
  const std::size_t d = pc.dim();
  const auto complex = build_rips(pairwise_distances(scaled), rule.epsilon(pc.size()), d);
  return betti_numbers(complex, d);
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep, std::uint64_t stream) {
  return derive_seed(seed + rep, stream);
}

namespace {

void check_test_inputs(double alpha, std::size_t r) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (r == 0) throw DomainError("r must be >= 1");
}

}  // namespace

void to_json(nlohmann::json& j, const TestReport& report) {
  j = nlohmann::json{{"statistic", report.statistic},
                     {"critical_value", report.critical_value},
                     {"reject", report.reject},
                     {"alpha", report.alpha},
                     {"regime", to_string(report.regime)},
                     {"n", report.n},
                     {"epsilon", report.epsilon},
                     {"betti", report.betti},
                     {"null_statistics", report.null_statistics}};
  if (report.n2 != 0) {
    j["n2"] = report.n2;
    j["betti2"] = report.betti2;
  }
}

TestReport one_sample_test(const PointCloud& pc, const BettiVector& hypothesis, const ThresholdRule& rule,
                           double alpha, std::size_t r, std::uint64_t seed, const Sampler& null_sampler,
                           const TestOptions& options) {
  check_test_inputs(alpha, r);
  TestReport report;
  report.alpha = alpha;
  report.regime = rule.regime;
  report.n = pc.size();
  report.epsilon = rule.epsilon(pc.size());
  report.betti = estimate_betti(pc, rule, options.scaling);
  report.statistic = one_sample_statistic(report.betti, hypothesis);
  report.null_statistics.resize(r);
  parallel_for(r, options.threads, [&](std::size_t i) {
    const auto null_pc = null_sampler(pc.size(), replication_seed(seed, i, 0));
    report.null_statistics[i] =
        static_cast<double>(one_sample_statistic(estimate_betti(null_pc, rule, options.scaling), hypothesis));
  });
  report.critical_value = estimate_critical_value(report.null_statistics, alpha, options.quantile);
  report.reject = static_cast<double>(report.statistic) > report.critical_value;
  return report;
}

TestReport two_sample_test(const PointCloud& x, const PointCloud& y, const ThresholdRule& rule, double alpha,
                           std::size_t r, std::uint64_t seed, const Sampler& null_sampler,
                           const TestOptions& options) {
  check_test_inputs(alpha, r);
  TestReport report;
  report.alpha = alpha;
  report.regime = rule.regime;
  report.n = x.size();
  report.n2 = y.size();
  report.epsilon = rule.epsilon(x.size());
  // Each sample uses the radius for its own size.
  report.betti = estimate_betti(x, rule, options.scaling);
  report.betti2 = estimate_betti(y, rule, options.scaling);
  report.statistic = two_sample_statistic(report.betti, report.betti2);
  report.null_statistics.resize(r);
  parallel_for(r, options.threads, [&](std::size_t i) {
    const auto a = null_sampler(x.size(), replication_seed(seed, i, 0));
    const auto b = null_sampler(y.size(), replication_seed(seed, i, 1));
    report.null_statistics[i] = static_cast<double>(
        two_sample_statistic(estimate_betti(a, rule, options.scaling), estimate_betti(b, rule, options.scaling)));
  });
  report.critical_value = estimate_critical_value(report.null_statistics, alpha, options.quantile);
  report.reject = static_cast<double>(report.statistic) > report.critical_value;
  return report;
}

namespace {

PowerEstimate finish_power(std::vector<double> null_stats, std::vector<double> alt_stats, double alpha,
                           std::size_t n, std::uint64_t seed, QuantileMode mode) {
  PowerEstimate est;
  est.r = null_stats.size();
  est.alpha = alpha;
  est.n = n;
  est.seed = seed;
  est.critical_value = estimate_critical_value(null_stats, alpha, mode);
  est.rejections = static_cast<std::size_t>(
      std::count_if(alt_stats.begin(), alt_stats.end(), [&](double t) { return t > est.critical_value; }));
  est.power = static_cast<double>(est.rejections) / static_cast<double>(est.r);
  est.null_statistics = std::move(null_stats);
  est.alternative_statistics = std::move(alt_stats);
  return est;
}

}  // namespace

PowerEstimate one_sample_power(const Sampler& null_sampler, const Sampler& alt_sampler, const BettiVector& hypothesis,
                               const ThresholdRule& rule, double alpha, std::size_t r, std::size_t n,
                               std::uint64_t seed, const TestOptions& options) {
  check_test_inputs(alpha, r);
  std::vector<double> null_stats(r), alt_stats(r);
  parallel_for(r, options.threads, [&](std::size_t i) {
    const auto null_pc = null_sampler(n, replication_seed(seed, i, 0));
    const auto alt_pc = alt_sampler(n, replication_seed(seed, i, 1));
    null_stats[i] = static_cast<double>(one_sample_statistic(estimate_betti(null_pc, rule, options.scaling), hypothesis));
    alt_stats[i] = static_cast<double>(one_sample_statistic(estimate_betti(alt_pc, rule, options.scaling), hypothesis));
  });
  return finish_power(std::move(null_stats), std::move(alt_stats), alpha, n, seed, options.quantile);
}

PowerEstimate two_sample_power(const Sampler& sampler1, const Sampler& sampler2, const ThresholdRule& rule,
                               double alpha, std::size_t r, std::size_t n, std::uint64_t seed,
                               const TestOptions& options) {
  check_test_inputs(alpha, r);
  std::vector<double> null_stats(r), alt_stats(r);
  parallel_for(r, options.threads, [&](std::size_t i) {
    auto betti = [&](const Sampler& s, std::uint64_t stream) {
      return estimate_betti(s(n, replication_seed(seed, i, stream)), rule, options.scaling);
    };
    null_stats[i] = static_cast<double>(two_sample_statistic(betti(sampler1, 0), betti(sampler1, 1)));
    alt_stats[i] = static_cast<double>(two_sample_statistic(betti(sampler1, 2), betti(sampler2, 3)));
  });
  return finish_power(std::move(null_stats), std::move(alt_stats), alpha, n, seed, options.quantile);
}

std::vector<DisconnectionRow> check_disconnection(const Sampler& sampler, const ThresholdRule& rule,
                                                  std::span<const std::size_t> n_list, std::size_t reps,
                                                  std::uint64_t seed, std::size_t threads) {
  if (reps == 0) throw DomainError("reps must be >= 1");
  std::vector<DisconnectionRow> rows;
  for (std::size_t n : n_list) {
    std::vector<char> disconnected(reps, 0);
    const double eps = rule.epsilon(n);
    parallel_for(reps, threads, [&](std::size_t i) {
      const auto pc = sampler(n, replication_seed(seed, i, n));
      disconnected[i] = !is_connected(build_rips(pairwise_distances(pc), eps, 1));
    });
    DisconnectionRow row;
    row.n = n;
    row.reps = reps;
    row.disconnected = static_cast<std::size_t>(std::count(disconnected.begin(), disconnected.end(), 1));
    row.fraction = static_cast<double>(row.disconnected) / static_cast<double>(reps);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bettitest
