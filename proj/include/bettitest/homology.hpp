#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "bettitest/complex.hpp"
#include "bettitest/geometry.hpp"

namespace bettitest {

/// Sparse matrix over GF(2). Each column lists the row indices of its ones in
/// increasing order.
struct GF2Matrix {
  std::size_t rows = 0;
  std::vector<std::vector<std::uint32_t>> columns;

  std::size_t cols() const noexcept { return columns.size(); }
  bool is_zero() const noexcept;
};

/// Product a * b over GF(2). Requires a.cols() == b.rows.
GF2Matrix multiply(const GF2Matrix& a, const GF2Matrix& b);

/// Rank by left-to-right column reduction with a lowest-one pivot table.
std::size_t gf2_rank(const GF2Matrix& m);

/// Betti numbers (β_0, ..., β_{d-1}).
using BettiVector = std::vector<std::int64_t>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
  std::size_t dim = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool essential() const noexcept { return death == kInfinity; }
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// Pairs sorted by (dim, birth, death).
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  /// Throws DomainError when birth > death for some pair.
  explicit PersistenceDiagram(std::vector<PersistencePair> pairs);

  const std::vector<PersistencePair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  /// Pairs of one homology dimension.
  PersistenceDiagram in_dimension(std::size_t dim) const;
  /// Drops essential pairs.
  PersistenceDiagram finite() const;
  /// Drops pairs with birth == death.
  PersistenceDiagram off_diagonal() const;

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

 private:
  std::vector<PersistencePair> pairs_;
};

/// Column of p-simplex i has ones at the rows of its (p-1)-faces; rows and
/// columns follow the complex's lexicographic order. Requires p >= 1.
GF2Matrix boundary_matrix(const SimplicialComplex& sc, std::size_t p);

/// β_p = (n_p - rank ∂_p) - rank ∂_{p+1} for p = 0 .. d-1.
BettiVector betti_numbers(const SimplicialComplex& sc, std::size_t d);

/// Standard column reduction of the filtration's boundary matrix, with
/// clearing. Throws InvalidFiltration when a simplex precedes one of its
/// faces or a face is missing.
PersistenceDiagram reduce_filtration(const FilteredComplex& fc);

/// Number of dim-p pairs alive on [eps, eps_prime]: birth <= eps and death > eps_prime.
/// Throws OrderViolation when eps > eps_prime.
std::size_t persistent_betti(const PersistenceDiagram& diagram, std::size_t p, double eps, double eps_prime);

/// Persistence of the Rips filtration (diameter-indexed, truncated at
/// max_threshold) in homology dimensions 0..max_hom_dim. Simplices are
/// generated implicitly and reduced in the cohomology order, so no explicit
/// filtration is built. Produces the same diagram as
/// reduce_filtration(build_rips_filtration(dm, max_threshold, max_hom_dim + 1)).
PersistenceDiagram rips_persistence(const DistanceMatrix& dm, double max_threshold, std::size_t max_hom_dim);

/// CSV with header "dim,birth,death"; essential deaths are written as "inf".
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_csv(std::istream& in);

}  // namespace bettitest
