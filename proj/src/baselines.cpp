#include "bettitest/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "bettitest/error.hpp"
#include "bettitest/parallel.hpp"
#include "bettitest/rng.hpp"

namespace bettitest {

std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
  // Shortest augmenting paths with row/column potentials, 1-based internally.
  const std::size_t n = cost.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, double p, double q,
                            std::size_t dim) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("Wasserstein exponents must be >= 1");
  // Pairs on the diagonal match it at no cost.
  const auto pa = a.in_dimension(dim).finite().off_diagonal().pairs();
  const auto pb = b.in_dimension(dim).finite().off_diagonal().pairs();
  const std::size_t m = pa.size(), k = pb.size(), size = m + k;
  if (size == 0) return 0.0;

  auto to_diagonal = [](const PersistencePair& x) { return (x.death - x.birth) / 2.0; };
  // Rows: points of a, then diagonal slots for b. Columns: points of b, then
  // diagonal slots for a. Diagonal-to-diagonal is free.
  std::vector<std::vector<double>> cost(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      double c = 0.0;
      if (i < m && j < k)
        c = std::max(std::abs(pa[i].birth - pb[j].birth), std::abs(pa[i].death - pb[j].death));
      else if (i < m)
        c = to_diagonal(pa[i]);
      else if (j < k)
        c = to_diagonal(pb[j]);
      cost[i][j] = std::pow(c, p);
    }
  }
  const auto assignment = solve_assignment(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i) total += cost[i][assignment[i]];
  return std::pow(total, q / p);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return grid;
}

LandscapeFunction landscape(const PersistenceDiagram& diag, std::size_t k, std::span<const double> grid) {
  if (k == 0) throw DomainError("landscape index must be >= 1");
  LandscapeFunction f;
  f.k = k;
  f.grid.assign(grid.begin(), grid.end());
  f.values.assign(grid.size(), 0.0);
  const auto pairs = diag.finite().off_diagonal().pairs();
  if (pairs.size() < k) return f;
  std::vector<double> tents(pairs.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    for (std::size_t i = 0; i < pairs.size(); ++i)
      tents[i] = std::max(0.0, std::min(t - pairs[i].birth, pairs[i].death - t));
    std::nth_element(tents.begin(), tents.begin() + static_cast<std::ptrdiff_t>(k - 1), tents.end(),
                     std::greater<>());
    f.values[g] = tents[k - 1];
  }
  return f;
}

PermutationLoss parse_permutation_loss(std::string_view name) {
  if (name == "wasserstein_joint") return PermutationLoss::wasserstein_joint;
  if (name == "mean_landscape_diff") return PermutationLoss::mean_landscape_diff;
  if (name == "wasserstein_plain") return PermutationLoss::wasserstein_plain;
  throw InvalidSpec("unknown permutation loss '" + std::string(name) + "'");
}

std::string to_string(PermutationLoss loss) {
  switch (loss) {
    case PermutationLoss::wasserstein_joint:
      return "wasserstein_joint";
    case PermutationLoss::mean_landscape_diff:
      return "mean_landscape_diff";
    case PermutationLoss::wasserstein_plain:
      return "wasserstein_plain";
  }
  return "?";
}

namespace {

double mean_first_landscape(const PersistenceDiagram& diag, const PermutationConfig& config) {
  const auto grid = linear_grid(0.0, config.max_threshold, config.grid_points);
  const auto f = landscape(diag.in_dimension(config.dim), 1, grid);
  return std::accumulate(f.values.begin(), f.values.end(), 0.0) / static_cast<double>(f.values.size());
}

}  // namespace

double permutation_loss(const PointCloud& x, const PointCloud& y, const PermutationConfig& config) {
  const auto dx = rips_persistence(pairwise_distances(x), config.max_threshold, config.dim);
  const auto dy = rips_persistence(pairwise_distances(y), config.max_threshold, config.dim);
  switch (config.loss) {
    case PermutationLoss::wasserstein_plain:
      return wasserstein_distance(dx, dy, config.p, config.q, config.dim);
    case PermutationLoss::wasserstein_joint: {
      double total = wasserstein_distance(dx, dy, config.p, config.q, 0);
      if (config.dim != 0) total += wasserstein_distance(dx, dy, config.p, config.q, config.dim);
      return total;
    }
    case PermutationLoss::mean_landscape_diff:
      return std::abs(mean_first_landscape(dx, config) - mean_first_landscape(dy, config));
  }
  return 0.0;
}

PermutationTestResult permutation_two_sample_test(const PointCloud& x, const PointCloud& y,
                                                  const PermutationConfig& config, std::uint64_t seed) {
  if (config.n_permutations == 0) throw DomainError("n_permutations must be >= 1");
  if (x.dim() != y.dim()) throw LengthMismatch(x.dim(), y.dim());
  if (x.size() == 0 || y.size() == 0) throw EmptyInput("permutation test needs two nonempty samples");

  const auto pooled = concatenate(x, y);
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = pooled.point(a), pb = pooled.point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });

  PermutationTestResult result;
  result.n_permutations = config.n_permutations;
  result.observed_loss = permutation_loss(x, y, config);
  result.permutation_losses.resize(config.n_permutations);
  const std::size_t n1 = x.size();
  parallel_for(config.n_permutations, config.threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    auto perm = order;
    for (std::size_t j = perm.size() - 1; j > 0; --j) std::swap(perm[j], perm[rng.below(j + 1)]);
    const std::vector<std::size_t> first(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n1));
    const std::vector<std::size_t> second(perm.begin() + static_cast<std::ptrdiff_t>(n1), perm.end());
    result.permutation_losses[i] = permutation_loss(pooled.select(first), pooled.select(second), config);
  });
  const auto extreme = std::count_if(result.permutation_losses.begin(), result.permutation_losses.end(),
                                     [&](double l) { return l >= result.observed_loss; });
  result.p_value = static_cast<double>(1 + extreme) / static_cast<double>(1 + config.n_permutations);
  return result;
}

PowerEstimate permutation_power(const Sampler& sampler1, const Sampler& sampler2, const PermutationConfig& config,
                                double alpha, std::size_t r, std::size_t n, std::uint64_t seed,
                                ScalingMode scaling) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (r == 0) throw DomainError("r must be >= 1");
  // Replications run in parallel; permutations within one run serially.
  auto inner = config;
  inner.threads = 1;
  std::vector<double> p_values(r);
  parallel_for(r, config.threads, [&](std::size_t i) {
    const auto x = apply_scaling(sampler1(n, replication_seed(seed, i, 2)), scaling);
    const auto y = apply_scaling(sampler2(n, replication_seed(seed, i, 3)), scaling);
    p_values[i] = permutation_two_sample_test(x, y, inner, replication_seed(seed, i, 4)).p_value;
  });
  PowerEstimate est;
  est.r = r;
  est.alpha = alpha;
  est.n = n;
  est.seed = seed;
  est.critical_value = alpha;
  est.rejections =
      static_cast<std::size_t>(std::count_if(p_values.begin(), p_values.end(), [&](double pv) { return pv <= alpha; }));
  est.power = static_cast<double>(est.rejections) / static_cast<double>(r);
  est.alternative_statistics = std::move(p_values);
  return est;
}

}  // namespace bettitest
