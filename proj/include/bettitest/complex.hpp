#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bettitest/geometry.hpp"

namespace bettitest {

using Vertex = std::uint32_t;

/// A simplex as its strictly increasing vertex list.
class Simplex {
 public:
  Simplex() = default;
  /// Sorts the vertices. Throws DomainError on duplicates or an empty list.
  explicit Simplex(std::vector<Vertex> vertices);
  Simplex(std::initializer_list<Vertex> vertices) : Simplex(std::vector<Vertex>(vertices)) {}

  std::size_t dimension() const noexcept { return vertices_.size() - 1; }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }

  /// The dimension()+1 faces of codimension one, each omitting one vertex, in
  /// order of the omitted position.
  std::vector<Simplex> facets() const;

  friend auto operator<=>(const Simplex&, const Simplex&) = default;

 private:
  std::vector<Vertex> vertices_;
};

/// Simplices grouped by dimension. Each dimension is stored flat and sorted
/// lexicographically, so lookups are binary searches.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  /// Builds from an arbitrary collection; duplicates are dropped. Closure under
  /// faces is not enforced here (see is_closed_under_faces).
  explicit SimplicialComplex(std::span<const Simplex> simplices);

  std::size_t vertex_count() const noexcept { return count(0); }
  /// Highest populated dimension; 0 for a complex of isolated vertices.
  std::size_t max_dim() const noexcept { return by_dim_.empty() ? 0 : by_dim_.size() - 1; }
  std::size_t count(std::size_t p) const noexcept {
    return p < by_dim_.size() ? by_dim_[p].size() / (p + 1) : 0;
  }
  std::size_t total_count() const noexcept;

  std::span<const Vertex> simplex(std::size_t p, std::size_t i) const {
    return {by_dim_[p].data() + i * (p + 1), p + 1};
  }
  std::optional<std::size_t> index_of(std::span<const Vertex> vertices) const;
  bool contains(std::span<const Vertex> vertices) const { return index_of(vertices).has_value(); }
  bool contains(const Simplex& s) const { return contains(s.vertices()); }

  std::vector<Simplex> simplices(std::size_t p) const;
  bool is_closed_under_faces() const;

  /// Appends a simplex of dimension p. Callers must append in lexicographic
  /// order within each dimension.
  void append_sorted(std::size_t p, std::span<const Vertex> vertices);

  friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

 private:
  std::vector<std::vector<Vertex>> by_dim_;
};

struct FilteredSimplex {
  Simplex simplex;
  double value = 0.0;
};

/// Simplices with filtration values, ordered by (value, dimension, vertices).
class FilteredComplex {
 public:
  FilteredComplex() = default;
  /// Sorts into canonical order. Does not validate the face condition.
  explicit FilteredComplex(std::vector<FilteredSimplex> simplices);

  std::size_t size() const noexcept { return simplices_.size(); }
  const FilteredSimplex& operator[](std::size_t i) const { return simplices_[i]; }
  const std::vector<FilteredSimplex>& simplices() const noexcept { return simplices_; }
  std::size_t max_dim() const noexcept;

  /// All simplices with value <= t, as an unfiltered complex.
  SimplicialComplex prefix(double t) const;

  /// Wraps an already ordered list without re-sorting (used to test order validation).
  static FilteredComplex from_ordered(std::vector<FilteredSimplex> simplices);

 private:
  std::vector<FilteredSimplex> simplices_;
};

/// Vietoris-Rips complex with ball radius `radius`: a simplex is present when
/// all pairwise distances are <= 2 * radius. Every vertex is always present.
SimplicialComplex build_rips(const DistanceMatrix& dm, double radius, std::size_t max_dim);

/// Čech complex with ball radius `radius`: a simplex is present when the
/// minimal enclosing ball of its vertices has radius <= radius. Requires d <= 3.
SimplicialComplex build_cech(const PointCloud& pc, double radius, std::size_t max_dim);

/// Rips filtration indexed by diameter (= 2 * ball radius), truncated at
/// max_threshold.
FilteredComplex build_rips_filtration(const DistanceMatrix& dm, double max_threshold, std::size_t max_dim);

/// Radius of the smallest ball enclosing the given points (exact for up to
/// d+1 support points, d <= 3).
double minimal_enclosing_radius(const PointCloud& pc, std::span<const Vertex> vertices);

/// Whether the 1-skeleton has exactly one connected component.
bool is_connected(const SimplicialComplex& sc);
std::size_t connected_components(const SimplicialComplex& sc);

}  // namespace bettitest
