#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bettitest/geometry.hpp"
#include "json.hpp"

namespace bettitest {

enum class DistributionKind {
  vonmises_mixture_circle,
  vmf_mixture_sphere,
  mvn,
  uniform_disk,
  uniform_square,
  uniform_cube,
  uniform_sphere_surface,
  torus,
  swiss_roll,
  spiral,
};

DistributionKind parse_distribution_kind(std::string_view name);
std::string to_string(DistributionKind kind);

/// A distribution to draw point clouds from. Only the fields relevant to
/// `kind` are read.
struct DistributionSpec {
  DistributionKind kind = DistributionKind::uniform_square;
  // mixtures
  std::vector<double> weights;
  std::vector<std::vector<double>> mean_directions;
  std::vector<double> concentrations;
  // mvn
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
  // torus: distance from the tube center to the torus center, and tube radius
  double major_radius = 2.0;
  double minor_radius = 1.0;
  // spiral / swiss roll: standard deviation of additive Gaussian noise
  double noise = 0.0;
  // uniform_sphere_surface: ambient dimension (2 is the circle, 3 is S²)
  std::size_t dim = 3;

  /// Throws InvalidSpec naming the first violated invariant.
  void validate() const;
  std::size_t ambient_dim() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// Draws n points. Deterministic in (spec, n, seed).
PointCloud sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

/// Named distributions from the simulation study:
///   circle_vm_mixture   two von Mises on S¹, weights 1/3 2/3, directions (1,0) (0,1), κ 3 4
///   sphere_vmf_mixture  three vMF on S², equal weights, coordinate axes, κ 3 4 5
///   bivariate_normal    N(0, [[1,.5],[.5,1]])
///   trivariate_normal   N(0, unit diagonal, .5 off-diagonal)
///   circle, sphere      uniform on S¹ / S²
///   unit_disk, unit_square, unit_cube, torus, swiss_roll, spiral
DistributionSpec preset(std::string_view name);
std::vector<std::string> preset_names();

void to_json(nlohmann::json& j, const DistributionSpec& spec);
/// Accepts either {"preset": name, ...overrides} or {"kind": ..., ...}.
void from_json(const nlohmann::json& j, DistributionSpec& spec);

}  // namespace bettitest
