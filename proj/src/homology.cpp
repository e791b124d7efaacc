#include "bettitest/homology.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "bettitest/error.hpp"
#include "bettitest/union_find.hpp"

namespace bettitest {

namespace {

using Column = std::vector<std::uint32_t>;

/// In-place symmetric difference of two sorted columns: target ^= source.
void add_column(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::ranges::set_symmetric_difference(target, source, std::back_inserter(scratch));
  target.swap(scratch);
}

constexpr std::int64_t kNoPivot = -1;

}  // namespace

bool GF2Matrix::is_zero() const noexcept {
  return std::ranges::all_of(columns, [](const auto& c) { return c.empty(); });
}

GF2Matrix multiply(const GF2Matrix& a, const GF2Matrix& b) {
  if (a.cols() != b.rows) throw LengthMismatch(a.cols(), b.rows);
  GF2Matrix out;
  out.rows = a.rows;
  out.columns.resize(b.cols());
  Column scratch;
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::uint32_t k : b.columns[j]) add_column(out.columns[j], a.columns[k], scratch);
  return out;
}

std::size_t gf2_rank(const GF2Matrix& m) {
  std::vector<std::int64_t> pivot_of_row(m.rows, kNoPivot);
  std::vector<Column> reduced(m.cols());
  Column scratch;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Column col = m.columns[j];
    while (!col.empty() && pivot_of_row[col.back()] != kNoPivot)
      add_column(col, reduced[static_cast<std::size_t>(pivot_of_row[col.back()])], scratch);
    if (!col.empty()) {
      pivot_of_row[col.back()] = static_cast<std::int64_t>(j);
      reduced[j] = std::move(col);
      ++rank;
    }
  }
  return rank;
}

PersistenceDiagram::PersistenceDiagram(std::vector<PersistencePair> pairs) : pairs_(std::move(pairs)) {
  for (const auto& p : pairs_)
    if (!(p.birth <= p.death)) throw DomainError("persistence pair with birth > death");
  std::sort(pairs_.begin(), pairs_.end());
}

PersistenceDiagram PersistenceDiagram::in_dimension(std::size_t dim) const {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs_)
    if (p.dim == dim) out.push_back(p);
  return PersistenceDiagram(std::move(out));
}

PersistenceDiagram PersistenceDiagram::finite() const {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs_)
    if (!p.essential()) out.push_back(p);
  return PersistenceDiagram(std::move(out));
}

PersistenceDiagram PersistenceDiagram::off_diagonal() const {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs_)
    if (p.birth < p.death) out.push_back(p);
  return PersistenceDiagram(std::move(out));
}

GF2Matrix boundary_matrix(const SimplicialComplex& sc, std::size_t p) {
  if (p == 0) throw DomainError("boundary_matrix requires p >= 1");
  GF2Matrix m;
  m.rows = sc.count(p - 1);
  m.columns.resize(sc.count(p));
  std::vector<Vertex> face;
  for (std::size_t j = 0; j < sc.count(p); ++j) {
    auto s = sc.simplex(p, j);
    Column& col = m.columns[j];
    for (std::size_t skip = 0; skip <= p; ++skip) {
      face.clear();
      for (std::size_t k = 0; k <= p; ++k)
        if (k != skip) face.push_back(s[k]);
      auto row = sc.index_of(face);
      if (!row) throw DomainError("complex is not closed under faces");
      col.push_back(static_cast<std::uint32_t>(*row));
    }
    std::sort(col.begin(), col.end());
  }
  return m;
}

namespace {

/// Cofaces of every p-simplex as sorted index lists into dimension p+1.
std::vector<Column> coface_lists(const SimplicialComplex& sc, std::size_t p) {
  std::vector<Column> cofaces(sc.count(p));
  std::vector<Vertex> face;
  for (std::size_t j = 0; j < sc.count(p + 1); ++j) {
    auto s = sc.simplex(p + 1, j);
    for (std::size_t skip = 0; skip <= p + 1; ++skip) {
      face.clear();
      for (std::size_t k = 0; k <= p + 1; ++k)
        if (k != skip) face.push_back(s[k]);
      auto i = sc.index_of(face);
      if (!i) throw DomainError("complex is not closed under faces");
      cofaces[*i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return cofaces;
}

}  // namespace

BettiVector betti_numbers(const SimplicialComplex& sc, std::size_t d) {
  // rank ∂_{p+1} = rank δ_p. The coboundary matrices are reduced bottom-up,
  // columns in decreasing index order with the smallest row as pivot; a
  // (p+1)-simplex that becomes a pivot of δ_p has a zero column in δ_{p+1},
  // so it is skipped there.
  std::vector<std::size_t> rank_boundary(d + 1, 0);  // rank ∂_p, ∂_0 = 0
  std::vector<char> cleared;
  Column scratch;
  for (std::size_t p = 0; p < d && p < sc.max_dim(); ++p) {
    const auto cofaces = coface_lists(sc, p);
    const std::size_t rows = sc.count(p + 1);
    std::vector<std::int64_t> pivot_owner(rows, kNoPivot);
    std::vector<Column> reduced(cofaces.size());
    std::vector<char> next_cleared(rows, 0);
    std::size_t rank = 0;
    for (std::size_t jj = cofaces.size(); jj-- > 0;) {
      if (!cleared.empty() && cleared[jj]) continue;
      Column col = cofaces[jj];
      while (!col.empty() && pivot_owner[col.front()] != kNoPivot)
        add_column(col, reduced[static_cast<std::size_t>(pivot_owner[col.front()])], scratch);
      if (col.empty()) continue;
      pivot_owner[col.front()] = static_cast<std::int64_t>(jj);
      next_cleared[col.front()] = 1;
      reduced[jj] = std::move(col);
      ++rank;
    }
    rank_boundary[p + 1] = rank;
    cleared = std::move(next_cleared);
  }
  BettiVector betti(d, 0);
  for (std::size_t p = 0; p < d; ++p) {
    const auto np = static_cast<std::int64_t>(sc.count(p));
    betti[p] = np - static_cast<std::int64_t>(rank_boundary[p]) - static_cast<std::int64_t>(rank_boundary[p + 1]);
  }
  return betti;
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<Vertex>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Vertex x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

}  // namespace

PersistenceDiagram reduce_filtration(const FilteredComplex& fc) {
  const std::size_t m = fc.size();
  std::unordered_map<std::vector<Vertex>, std::uint32_t, VectorHash> position;
  position.reserve(m);
  for (std::size_t j = 0; j < m; ++j) position.emplace(fc[j].simplex.vertices(), static_cast<std::uint32_t>(j));

  std::vector<Column> columns(m);
  std::size_t top_dim = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& s = fc[j].simplex;
    top_dim = std::max(top_dim, s.dimension());
    for (const auto& f : s.facets()) {
      auto it = position.find(f.vertices());
      if (it == position.end()) throw InvalidFiltration("a face of simplex " + std::to_string(j) + " is missing");
      if (it->second >= j || fc[it->second].value > fc[j].value)
        throw InvalidFiltration("simplex " + std::to_string(j) + " precedes one of its faces");
      columns[j].push_back(it->second);
    }
    std::sort(columns[j].begin(), columns[j].end());
  }

  std::vector<std::int64_t> pivot_owner(m, kNoPivot);
  std::vector<char> negative(m, 0);
  std::vector<char> cleared(m, 0);
  std::vector<PersistencePair> pairs;
  Column scratch;
  // Highest dimension first so that pivots clear columns one dimension down.
  for (std::size_t dim = top_dim; dim >= 1; --dim) {
    for (std::size_t j = 0; j < m; ++j) {
      if (fc[j].simplex.dimension() != dim) continue;
      if (cleared[j]) {
        columns[j].clear();
        continue;
      }
      Column& col = columns[j];
      while (!col.empty() && pivot_owner[col.back()] != kNoPivot)
        add_column(col, columns[static_cast<std::size_t>(pivot_owner[col.back()])], scratch);
      if (col.empty()) continue;
      const std::uint32_t low = col.back();
      pivot_owner[low] = static_cast<std::int64_t>(j);
      negative[j] = 1;
      cleared[low] = 1;
      pairs.push_back({dim - 1, fc[low].value, fc[j].value});
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (!negative[i] && pivot_owner[i] == kNoPivot) pairs.push_back({fc[i].simplex.dimension(), fc[i].value, kInfinity});
  return PersistenceDiagram(std::move(pairs));
}

std::size_t persistent_betti(const PersistenceDiagram& diagram, std::size_t p, double eps, double eps_prime) {
  if (eps > eps_prime) throw OrderViolation("persistent_betti requires eps <= eps'");
  std::size_t count = 0;
  for (const auto& pair : diagram.pairs())
    if (pair.dim == p && pair.birth <= eps && pair.death > eps_prime) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// Implicit Rips persistence.

namespace {

using Index = std::uint64_t;

class Binomials {
 public:
  Binomials(std::size_t n, std::size_t k) : k_(k + 1), table_((n + 1) * (k + 2), 0) {
    for (std::size_t i = 0; i <= n; ++i) {
      at(i, 0) = 1;
      for (std::size_t j = 1; j <= std::min(i, k + 1); ++j)
        at(i, j) = (j == i) ? 1 : at(i - 1, j - 1) + at(i - 1, j);
    }
  }
  Index operator()(std::size_t n, std::size_t k) const { return k > n ? 0 : table_[n * (k_ + 1) + k]; }

 private:
  Index& at(std::size_t n, std::size_t k) { return table_[n * (k_ + 1) + k]; }
  std::size_t k_;
  std::vector<Index> table_;
};

struct Entry {
  double diameter;
  Index index;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};

class RipsCoboundary {
 public:
  RipsCoboundary(const DistanceMatrix& dm, double threshold, std::size_t max_dim)
      : dm_(dm), threshold_(threshold), binom_(dm.size(), max_dim + 1) {}

  Index encode(std::span<const Vertex> sorted) const {
    Index idx = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) idx += binom_(sorted[i], i + 1);
    return idx;
  }

  /// Vertices of the simplex with `count` vertices and combinatorial index idx, ascending.
  void decode(Index idx, std::size_t count, std::vector<Vertex>& out) const {
    out.resize(count);
    Vertex upper = static_cast<Vertex>(dm_.size());
    for (std::size_t i = count; i-- > 0;) {
      // Largest v < upper with C(v, i+1) <= idx.
      Vertex lo = static_cast<Vertex>(i), hi = upper;
      while (hi - lo > 1) {
        const Vertex mid = lo + (hi - lo) / 2;
        if (binom_(mid, i + 1) <= idx) lo = mid;
        else hi = mid;
      }
      out[i] = lo;
      idx -= binom_(lo, i + 1);
      upper = lo;
    }
  }

  /// Pushes every coface within the threshold.
  template <typename Push>
  void for_each_coface(std::span<const Vertex> sorted, double diameter, Push&& push) const {
    std::vector<Vertex> merged(sorted.size() + 1);
    for (Vertex w = 0; w < dm_.size(); ++w) {
      double d = diameter;
      bool member = false;
      for (Vertex v : sorted) {
        if (v == w) {
          member = true;
          break;
        }
        d = std::max(d, dm_(v, w));
      }
      if (member || d > threshold_) continue;
      std::size_t k = 0;
      bool placed = false;
      for (Vertex v : sorted) {
        if (!placed && w < v) {
          merged[k++] = w;
          placed = true;
        }
        merged[k++] = v;
      }
      if (!placed) merged[k++] = w;
      push(Entry{d, encode(merged)});
    }
  }

 private:
  const DistanceMatrix& dm_;
  double threshold_;
  Binomials binom_;
};

/// Pops and returns the smallest entry with odd multiplicity, leaving it on the heap.
template <typename Heap>
std::optional<Entry> get_pivot(Heap& heap) {
  while (!heap.empty()) {
    const Entry e = heap.top();
    heap.pop();
    if (!heap.empty() && heap.top() == e) {
      heap.pop();
      continue;
    }
    heap.push(e);
    return e;
  }
  return std::nullopt;
}

/// Enumerates the k-simplices (k+1 vertices) with diameter <= threshold.
void enumerate_simplices(const DistanceMatrix& dm, double threshold, std::size_t k, const RipsCoboundary& cob,
                         std::vector<Entry>& out) {
  const std::size_t n = dm.size();
  std::vector<std::vector<Vertex>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dm(i, j) <= threshold) adj[i].push_back(static_cast<Vertex>(j));
  std::vector<Vertex> current;
  auto recurse = [&](auto&& self, const std::vector<Vertex>& candidates, double diameter) -> void {
    if (current.size() == k + 1) {
      out.push_back({diameter, cob.encode(current)});
      return;
    }
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
  for (std::size_t v = 0; v < n; ++v) {
    current.assign(1, static_cast<Vertex>(v));
    recurse(recurse, adj[v], 0.0);
  }
}

}  // namespace

PersistenceDiagram rips_persistence(const DistanceMatrix& dm, double max_threshold, std::size_t max_hom_dim) {
  const std::size_t n = dm.size();
  std::vector<PersistencePair> pairs;
  if (n == 0) return {};
  RipsCoboundary cob(dm, max_threshold, max_hom_dim + 1);

  // Dimension 0 by Kruskal over edges in filtration order.
  std::vector<Entry> edges;
  enumerate_simplices(dm, max_threshold, 1, cob, edges);
  std::sort(edges.begin(), edges.end());
  std::unordered_set<Index> cleared;
  {
    UnionFind uf(n);
    std::vector<Vertex> v;
    for (const auto& e : edges) {
      cob.decode(e.index, 2, v);
      if (uf.unite(v[0], v[1])) {
        pairs.push_back({0, 0.0, e.diameter});
        cleared.insert(e.index);
      }
    }
    for (std::size_t c = 0; c < uf.components(); ++c) pairs.push_back({0, 0.0, kInfinity});
  }

  std::vector<Entry> columns = std::move(edges);
  std::vector<Vertex> verts;
  for (std::size_t dim = 1; dim <= max_hom_dim; ++dim) {
    if (dim > 1) {
      columns.clear();
      enumerate_simplices(dm, max_threshold, dim, cob, columns);
      std::sort(columns.begin(), columns.end());
    }
    using Heap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;
    std::unordered_map<Index, std::size_t> pivot_owner;
    std::vector<std::vector<Entry>> reductions;
    std::unordered_set<Index> next_cleared;

    auto push_coboundary = [&](const Entry& s, Heap& heap) {
      cob.decode(s.index, dim + 1, verts);
      cob.for_each_coface(verts, s.diameter, [&](const Entry& c) { heap.push(c); });
    };

    for (auto it = columns.rbegin(); it != columns.rend(); ++it) {
      const Entry sigma = *it;
      if (cleared.contains(sigma.index)) continue;
      Heap working;
      std::vector<Entry> reduction{sigma};
      push_coboundary(sigma, working);
      auto pivot = get_pivot(working);
      while (pivot) {
        auto owner = pivot_owner.find(pivot->index);
        if (owner == pivot_owner.end()) break;
        for (const Entry& s : reductions[owner->second]) {
          reduction.push_back(s);
          push_coboundary(s, working);
        }
        pivot = get_pivot(working);
      }
      if (!pivot) {
        pairs.push_back({dim, sigma.diameter, kInfinity});
        continue;
      }
      // Keep only simplices with odd multiplicity in the reduction record.
      std::sort(reduction.begin(), reduction.end());
      std::vector<Entry> compact;
      for (std::size_t i = 0; i < reduction.size();) {
        std::size_t j = i;
        while (j < reduction.size() && reduction[j] == reduction[i]) ++j;
        if ((j - i) % 2 == 1) compact.push_back(reduction[i]);
        i = j;
      }
      pivot_owner.emplace(pivot->index, reductions.size());
      reductions.push_back(std::move(compact));
      next_cleared.insert(pivot->index);
      pairs.push_back({dim, sigma.diameter, pivot->diameter});
    }
    cleared = std::move(next_cleared);
  }
  return PersistenceDiagram(std::move(pairs));
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "dim,birth,death\n";
  char buf[32];
  auto put = [&](double v) {
    if (v == kInfinity) {
      out << "inf";
      return;
    }
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, end - buf);
  };
  for (const auto& p : diagram.pairs()) {
    out << p.dim << ',';
    put(p.birth);
    out << ',';
    put(p.death);
    out << '\n';
  }
}

PersistenceDiagram read_diagram_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<PersistencePair> pairs;
  auto parse = [&](const std::string& field) -> double {
    if (field == "inf") return kInfinity;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) throw ParseError(line_no, "bad value '" + field + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError(line_no, "expected dim,birth,death");
    PersistencePair p;
    p.dim = static_cast<std::size_t>(std::stoul(line.substr(0, c1)));
    p.birth = parse(line.substr(c1 + 1, c2 - c1 - 1));
    p.death = parse(line.substr(c2 + 1));
    pairs.push_back(p);
  }
  return PersistenceDiagram(std::move(pairs));
}

}  // namespace bettitest
