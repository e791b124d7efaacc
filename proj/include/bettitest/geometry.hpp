#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bettitest {

/// n points in R^d stored row-major. Optional integer labels, one per point.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws DomainError unless coords.size() is a positive multiple of dim.
  PointCloud(std::size_t dim, std::vector<double> coords, std::vector<int> labels = {});
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Multiplies every coordinate by `factor`.
  PointCloud scaled(double factor) const;
  /// Rows of `indices`, in the order given.
  PointCloud select(std::span<const std::size_t> indices) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<int> labels_;
};

/// Stacks b under a. Labels are 0 for rows of a and 1 for rows of b.
PointCloud concatenate(const PointCloud& a, const PointCloud& b);

/// Dense symmetric n x n matrix of Euclidean distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

enum class ScalingMode { per_point_norm, none, max_norm };

ScalingMode parse_scaling_mode(std::string_view name);
std::string to_string(ScalingMode mode);

double euclidean_norm(std::span<const double> x);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Divides each point by its own Euclidean norm. Throws ZeroNormPoint when a
/// norm is below 1e-12.
PointCloud normalize_by_norm(const PointCloud& pc);

/// Dispatches on the scaling mode. max_norm divides all points by the largest
/// norm in the cloud, which preserves shape.
PointCloud apply_scaling(const PointCloud& pc, ScalingMode mode);

DistanceMatrix pairwise_distances(const PointCloud& pc);

struct CsvOptions {
  bool header = false;
};

PointCloud parse_point_cloud(std::istream& in, const CsvOptions& options = {},
                             const std::string& source = "<stream>");
PointCloud load_point_cloud(const std::string& path, const CsvOptions& options = {});
/// Writes one row per point with 17 significant digits, so parsing it back is lossless.
void write_point_cloud(std::ostream& out, const PointCloud& pc);

}  // namespace bettitest
