#include "bettitest/complex.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

#include "bettitest/error.hpp"
#include "bettitest/union_find.hpp"

namespace bettitest {

Simplex::Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw DomainError("a simplex needs at least one vertex");
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw DomainError("simplex vertices must be distinct");
}

std::vector<Simplex> Simplex::facets() const {
  std::vector<Simplex> out;
  if (vertices_.size() < 2) return out;
  out.reserve(vertices_.size());
  for (std::size_t skip = 0; skip < vertices_.size(); ++skip) {
    std::vector<Vertex> f;
    f.reserve(vertices_.size() - 1);
    for (std::size_t k = 0; k < vertices_.size(); ++k)
      if (k != skip) f.push_back(vertices_[k]);
    out.emplace_back(std::move(f));
  }
  return out;
}

SimplicialComplex::SimplicialComplex(std::span<const Simplex> simplices) {
  std::vector<Simplex> sorted(simplices.begin(), simplices.end());
  std::sort(sorted.begin(), sorted.end(), [](const Simplex& a, const Simplex& b) {
    if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
    return a.vertices() < b.vertices();
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& s : sorted) append_sorted(s.dimension(), s.vertices());
}

std::size_t SimplicialComplex::total_count() const noexcept {
  std::size_t total = 0;
  for (std::size_t p = 0; p < by_dim_.size(); ++p) total += count(p);
  return total;
}

void SimplicialComplex::append_sorted(std::size_t p, std::span<const Vertex> vertices) {
  if (by_dim_.size() <= p) by_dim_.resize(p + 1);
  by_dim_[p].insert(by_dim_[p].end(), vertices.begin(), vertices.end());
}

std::optional<std::size_t> SimplicialComplex::index_of(std::span<const Vertex> vertices) const {
  if (vertices.empty()) return std::nullopt;
  const std::size_t p = vertices.size() - 1;
  std::size_t lo = 0;
  std::size_t hi = count(p);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto s = simplex(p, mid);
    if (std::lexicographical_compare(s.begin(), s.end(), vertices.begin(), vertices.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < count(p) && std::ranges::equal(simplex(p, lo), vertices)) return lo;
  return std::nullopt;
}

std::vector<Simplex> SimplicialComplex::simplices(std::size_t p) const {
  std::vector<Simplex> out;
  out.reserve(count(p));
  for (std::size_t i = 0; i < count(p); ++i) {
    auto s = simplex(p, i);
    out.emplace_back(std::vector<Vertex>(s.begin(), s.end()));
  }
  return out;
}

bool SimplicialComplex::is_closed_under_faces() const {
  std::vector<Vertex> face;
  for (std::size_t p = 1; p <= max_dim(); ++p) {
    for (std::size_t i = 0; i < count(p); ++i) {
      auto s = simplex(p, i);
      for (std::size_t skip = 0; skip <= p; ++skip) {
        face.clear();
        for (std::size_t k = 0; k <= p; ++k)
          if (k != skip) face.push_back(s[k]);
        if (!contains(face)) return false;
      }
    }
  }
  return true;
}

FilteredComplex::FilteredComplex(std::vector<FilteredSimplex> simplices) : simplices_(std::move(simplices)) {
  std::sort(simplices_.begin(), simplices_.end(), [](const FilteredSimplex& a, const FilteredSimplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.simplex.dimension() != b.simplex.dimension()) return a.simplex.dimension() < b.simplex.dimension();
    return a.simplex.vertices() < b.simplex.vertices();
  });
}

FilteredComplex FilteredComplex::from_ordered(std::vector<FilteredSimplex> simplices) {
  FilteredComplex fc;
  fc.simplices_ = std::move(simplices);
  return fc;
}

std::size_t FilteredComplex::max_dim() const noexcept {
  std::size_t m = 0;
  for (const auto& s : simplices_) m = std::max(m, s.simplex.dimension());
  return m;
}

SimplicialComplex FilteredComplex::prefix(double t) const {
  std::vector<Simplex> kept;
  for (const auto& s : simplices_)
    if (s.value <= t) kept.push_back(s.simplex);
  return SimplicialComplex(kept);
}

namespace {

/// Neighbors with a larger index whose distance is within `limit`, ascending.
std::vector<std::vector<Vertex>> upper_neighbors(const DistanceMatrix& dm, double limit) {
  const std::size_t n = dm.size();
  std::vector<std::vector<Vertex>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dm(i, j) <= limit) adj[i].push_back(static_cast<Vertex>(j));
  return adj;
}

/// Depth-first clique expansion in increasing vertex order. Emits each clique
/// with its diameter; within a dimension cliques come out lexicographically.
template <typename Emit>
void expand_cliques(const DistanceMatrix& dm, const std::vector<std::vector<Vertex>>& adj, std::size_t max_dim,
                    Emit&& emit) {
  std::vector<Vertex> current;
  auto recurse = [&](auto&& self, const std::vector<Vertex>& candidates, double diameter) -> void {
    emit(std::span<const Vertex>(current), diameter);
    if (current.size() > max_dim) return;
    std::vector<Vertex> next;
    for (Vertex v : candidates) {
      next.clear();
      std::ranges::set_intersection(candidates, adj[v], std::back_inserter(next));
      double d = diameter;
      for (Vertex u : current) d = std::max(d, dm(u, v));
      current.push_back(v);
      self(self, next, d);
      current.pop_back();
    }
  };
  for (std::size_t v = 0; v < dm.size(); ++v) {
    current.assign(1, static_cast<Vertex>(v));
    if (max_dim == 0) {
      emit(std::span<const Vertex>(current), 0.0);
      continue;
    }
    recurse(recurse, adj[v], 0.0);
  }
}

}  // namespace

SimplicialComplex build_rips(const DistanceMatrix& dm, double radius, std::size_t max_dim) {
  const auto adj = upper_neighbors(dm, 2.0 * radius);
  SimplicialComplex sc;
  expand_cliques(dm, adj, max_dim, [&](std::span<const Vertex> s, double) { sc.append_sorted(s.size() - 1, s); });
  return sc;
}

FilteredComplex build_rips_filtration(const DistanceMatrix& dm, double max_threshold, std::size_t max_dim) {
  const auto adj = upper_neighbors(dm, max_threshold);
  std::vector<FilteredSimplex> out;
  expand_cliques(dm, adj, max_dim, [&](std::span<const Vertex> s, double diameter) {
    out.push_back({Simplex(std::vector<Vertex>(s.begin(), s.end())), diameter});
  });
  return FilteredComplex(std::move(out));
}

namespace {

/// Circumscribed ball of the points within their affine hull. Returns
/// nullopt for affinely dependent sets.
std::optional<std::pair<std::array<double, 3>, double>> circumball(const PointCloud& pc,
                                                                   std::span<const Vertex> subset) {
  const std::size_t d = pc.dim();
  const std::size_t m = subset.size() - 1;
  auto p0 = pc.point(subset[0]);
  std::array<double, 3> center{};
  for (std::size_t k = 0; k < d; ++k) center[k] = p0[k];
  if (m == 0) return std::make_pair(center, 0.0);

  std::array<std::array<double, 3>, 3> u{};
  for (std::size_t i = 0; i < m; ++i) {
    auto pi = pc.point(subset[i + 1]);
    for (std::size_t k = 0; k < d; ++k) u[i][k] = pi[k] - p0[k];
  }
  // Solve G * lambda = b / 2 with G the Gram matrix of the edge vectors.
  std::array<std::array<double, 4>, 3> a{};
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double g = 0.0;
      for (std::size_t k = 0; k < d; ++k) g += u[i][k] * u[j][k];
      a[i][j] = g;
    }
    a[i][m] = 0.5 * a[i][i];
    scale = std::max(scale, a[i][i]);
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) <= 1e-12 * scale) return std::nullopt;
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double lambda = a[i][m] / a[i][i];
    for (std::size_t k = 0; k < d; ++k) center[k] += lambda * u[i][k];
  }
  double r2 = 0.0;
  for (std::size_t k = 0; k < d; ++k) r2 += (center[k] - p0[k]) * (center[k] - p0[k]);
  return std::make_pair(center, std::sqrt(r2));
}

}  // namespace

double minimal_enclosing_radius(const PointCloud& pc, std::span<const Vertex> vertices) {
  if (pc.dim() > 3) throw UnsupportedDimension("minimal enclosing ball supports d <= 3");
  const std::size_t k = vertices.size();
  if (k == 1) return 0.0;
  if (k == 2) return 0.5 * euclidean_distance(pc.point(vertices[0]), pc.point(vertices[1]));
  const std::size_t max_support = std::min(k, pc.dim() + 1);
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vertex> subset;
  // Enumerate subsets by bitmask; the enclosing ball is the circumball of one
  // of them, and among those that contain every point it is the smallest.
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size < 2 || size > max_support) continue;
    subset.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) subset.push_back(vertices[i]);
    auto ball = circumball(pc, subset);
    if (!ball || ball->second >= best) continue;
    const auto& [center, radius] = *ball;
    const double tol = 1e-12 * std::max(1.0, radius);
    bool encloses = true;
    for (Vertex v : vertices) {
      auto p = pc.point(v);
      double r2 = 0.0;
      for (std::size_t c = 0; c < pc.dim(); ++c) r2 += (p[c] - center[c]) * (p[c] - center[c]);
      if (std::sqrt(r2) > radius + tol) {
        encloses = false;
        break;
      }
    }
    if (encloses) best = radius;
  }
  return best;
}

SimplicialComplex build_cech(const PointCloud& pc, double radius, std::size_t max_dim) {
  if (pc.dim() > 3)
    throw UnsupportedDimension("Čech complex is implemented for d <= 3, got d = " + std::to_string(pc.dim()));
  // Every Čech simplex is a Rips clique at the same radius. Filter the cliques
  // dimension by dimension, keeping those whose facets all survived.
  const auto rips = build_rips(pairwise_distances(pc), radius, max_dim);
  SimplicialComplex sc;
  std::vector<Vertex> face;
  for (std::size_t p = 0; p <= rips.max_dim(); ++p) {
    for (std::size_t i = 0; i < rips.count(p); ++i) {
      auto s = rips.simplex(p, i);
      if (p >= 2) {
        bool faces_present = true;
        for (std::size_t skip = 0; skip <= p && faces_present; ++skip) {
          face.clear();
          for (std::size_t k = 0; k <= p; ++k)
            if (k != skip) face.push_back(s[k]);
          faces_present = sc.contains(face);
        }
        if (!faces_present || minimal_enclosing_radius(pc, s) > radius) continue;
      }
      sc.append_sorted(p, s);
    }
  }
  return sc;
}

std::size_t connected_components(const SimplicialComplex& sc) {
  if (sc.count(0) == 0) return 0;
  Vertex top = 0;
  for (std::size_t i = 0; i < sc.count(0); ++i) top = std::max(top, sc.simplex(0, i)[0]);
  UnionFind uf(top + 1);
  for (std::size_t i = 0; i < sc.count(1); ++i) {
    auto e = sc.simplex(1, i);
    uf.unite(e[0], e[1]);
  }
  // Ids that are not stored vertices are singleton sets; discount them.
  return uf.components() - (top + 1 - sc.count(0));
}

bool is_connected(const SimplicialComplex& sc) { return connected_components(sc) == 1; }

}  // namespace bettitest
