#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bettitest/geometry.hpp"
#include "bettitest/homology.hpp"
#include "bettitest/stats.hpp"

namespace bettitest {

/// Minimum-cost assignment for a square cost matrix (Hungarian method).
/// Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

/// q-th power of the p-th Wasserstein distance between the finite pairs of
/// dimension `dim`, with L∞ ground metric and diagonal projections.
double wasserstein_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, double p, double q,
                            std::size_t dim);

struct LandscapeFunction {
  std::size_t k = 1;
  std::vector<double> grid;
  std::vector<double> values;
};

/// λ_k on the grid. Essential pairs are ignored.
LandscapeFunction landscape(const PersistenceDiagram& diag, std::size_t k, std::span<const double> grid);

/// `count` equally spaced points on [lo, hi], endpoints included.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

enum class PermutationLoss { wasserstein_joint, mean_landscape_diff, wasserstein_plain };
PermutationLoss parse_permutation_loss(std::string_view name);
std::string to_string(PermutationLoss loss);

struct PermutationConfig {
  PermutationLoss loss = PermutationLoss::wasserstein_joint;
  std::size_t n_permutations = 30;
  double max_threshold = 4.0;
  std::size_t dim = 1;
  double p = 1.0;
  double q = 1.0;
  std::size_t grid_points = 1000;
  std::size_t threads = 1;
};

struct PermutationTestResult {
  double observed_loss = 0.0;
  std::vector<double> permutation_losses;
  double p_value = 1.0;
  std::size_t n_permutations = 0;
};

/// Loss between the groups' Rips persistence diagrams.
double permutation_loss(const PointCloud& x, const PointCloud& y, const PermutationConfig& config);

/// Relabels the pooled points n_permutations times keeping group sizes.
/// The pool is put in a canonical order first, so the result does not depend
/// on row order, nor on which sample is x when the sizes are equal.
PermutationTestResult permutation_two_sample_test(const PointCloud& x, const PointCloud& y,
                                                  const PermutationConfig& config, std::uint64_t seed);

/// Fraction of r replications (x from sampler1, y from sampler2, both scaled
/// per `scaling`) whose permutation p-value is <= alpha.
PowerEstimate permutation_power(const Sampler& sampler1, const Sampler& sampler2, const PermutationConfig& config,
                                double alpha, std::size_t r, std::size_t n, std::uint64_t seed,
                                ScalingMode scaling = ScalingMode::per_point_norm);

}  // namespace bettitest
