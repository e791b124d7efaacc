#include <cmath>
#include <numbers>

#include "bettitest/complex.hpp"
#include "bettitest/error.hpp"
#include "bettitest/homology.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bettitest;

namespace {

DistanceMatrix uniform_distances(std::size_t n, double d) {
  DistanceMatrix dm(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dm.set(i, j, d);
  return dm;
}

PointCloud equilateral() {
  return PointCloud::from_rows({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
}

bool subset_of(const SimplicialComplex& a, const SimplicialComplex& b) {
  for (std::size_t p = 0; p <= a.max_dim(); ++p)
    for (std::size_t i = 0; i < a.count(p); ++i)
      if (!b.contains(a.simplex(p, i))) return false;
  return true;
}

}  // namespace

TEST_CASE("Simplex keeps sorted distinct vertices") {
  Simplex s{2, 0, 1};
  CHECK(s.vertices() == std::vector<Vertex>{0, 1, 2});
  CHECK(s.dimension() == 2);
  CHECK(s.facets().size() == 3);
  CHECK_THROWS_AS((Simplex{1, 1}), DomainError);
}

TEST_CASE("build_rips includes distances equal to the diameter threshold") {
  const auto dm = uniform_distances(3, 1.0);
  auto sc = build_rips(dm, 0.5, 2);
  CHECK(sc.count(0) == 3);
  CHECK(sc.count(1) == 3);
  CHECK(sc.count(2) == 1);

  auto sparse = build_rips(dm, 0.49, 2);
  CHECK(sparse.count(0) == 3);
  CHECK(sparse.count(1) == 0);
  CHECK(sparse.max_dim() == 0);
}

TEST_CASE("build_rips respects max_dim") {
  const auto dm = uniform_distances(5, 1.0);
  auto sc = build_rips(dm, 1.0, 2);
  CHECK(sc.count(2) == 10);
  CHECK(sc.count(3) == 0);
  CHECK(build_rips(dm, 1.0, 0).count(1) == 0);
}

TEST_CASE("build_rips matches subset enumeration and is a clique complex") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const std::size_t d = 1 + rng.below(3);
    const auto pc = oracle::random_cloud(rng, n, d);
    const double radius = 0.4 * rng.uniform();
    const auto sc = build_rips(pairwise_distances(pc), radius, 3);
    const auto expected = oracle::brute_rips(pc, radius, 3);
    std::size_t total = 0;
    for (const auto& s : expected) {
      REQUIRE(sc.contains(s));
      ++total;
    }
    CHECK(sc.total_count() == total);
    CHECK(sc.is_closed_under_faces());
  }
}

TEST_CASE("Rips and Čech complexes grow with the radius") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(29);
    const std::size_t d = 1 + rng.below(3);
    const auto pc = oracle::random_cloud(rng, n, d);
    const auto dm = pairwise_distances(pc);
    const double r1 = 0.3 * rng.uniform();
    const double r2 = r1 + 0.2 * rng.uniform();
    CHECK(subset_of(build_rips(dm, r1, 3), build_rips(dm, r2, 3)));
    if (n <= 15) CHECK(subset_of(build_cech(pc, r1, d), build_cech(pc, r2, d)));
  }
}

TEST_CASE("build_cech uses the minimal enclosing ball") {
  const auto pc = equilateral();
  auto below = build_cech(pc, 0.55, 2);
  CHECK(below.count(1) == 3);
  CHECK(below.count(2) == 0);
  auto above = build_cech(pc, 0.58, 2);
  CHECK(above.count(2) == 1);

  auto single = build_cech(PointCloud::from_rows({{0.3, 0.1, 0.2}}), 0.0, 3);
  CHECK(single.count(0) == 1);
  CHECK(single.total_count() == 1);

  CHECK_THROWS_AS(build_cech(PointCloud::from_rows({{0, 0, 0, 0}}), 1.0, 1), UnsupportedDimension);
}

TEST_CASE("minimal enclosing radius against closed forms") {
  CHECK(minimal_enclosing_radius(equilateral(), std::vector<Vertex>{0, 1, 2}) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  // Obtuse triangle: the ball is the one on the longest side.
  const auto obtuse = PointCloud::from_rows({{0, 0}, {2, 0}, {1, 0.2}});
  CHECK(minimal_enclosing_radius(obtuse, std::vector<Vertex>{0, 1, 2}) == doctest::Approx(1.0));
  // Regular tetrahedron with edge sqrt(2): circumradius sqrt(3)/2.
  const auto tet = PointCloud::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
  CHECK(minimal_enclosing_radius(tet, std::vector<Vertex>{0, 1, 2, 3}) ==
        doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
}

TEST_CASE("nesting chain C(r) ⊆ R(r) ⊆ C(2r)") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(15);
    const std::size_t d = 1 + rng.below(3);
    const auto pc = oracle::random_cloud(rng, n, d);
    const double r = 0.35 * rng.uniform();
    const auto cech = build_cech(pc, r, d);
    const auto rips = build_rips(pairwise_distances(pc), r, d);
    const auto cech2 = build_cech(pc, 2 * r, d);
    CHECK(subset_of(cech, rips));
    CHECK(subset_of(rips, cech2));
  }
}

TEST_CASE("build_rips_filtration values are diameters") {
  auto two = build_rips_filtration(uniform_distances(2, 1.0), 4.0, 1);
  REQUIRE(two.size() == 3);
  CHECK(two[0].value == 0.0);
  CHECK(two[1].value == 0.0);
  CHECK(two[2].value == 1.0);
  CHECK(two[2].simplex.dimension() == 1);

  auto far = build_rips_filtration(uniform_distances(2, 5.0), 4.0, 1);
  CHECK(far.size() == 2);

  const auto square = pairwise_distances(PointCloud::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  auto fc = build_rips_filtration(square, 4.0, 2);
  std::size_t sides = 0, diagonals = 0, triangles = 0;
  for (const auto& s : fc.simplices()) {
    if (s.simplex.dimension() == 1 && s.value == 1.0) ++sides;
    if (s.simplex.dimension() == 1 && s.value == std::sqrt(2.0)) ++diagonals;
    if (s.simplex.dimension() == 2) {
      CHECK(s.value == std::sqrt(2.0));
      ++triangles;
    }
  }
  CHECK(sides == 4);
  CHECK(diagonals == 2);
  CHECK(triangles == 4);
}

TEST_CASE("filtration order and prefixes") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const auto pc = oracle::random_cloud(rng, n, 2);
    const auto dm = pairwise_distances(pc);
    const auto fc = build_rips_filtration(dm, 0.9, 2);
    for (std::size_t i = 1; i < fc.size(); ++i) {
      const auto& a = fc[i - 1];
      const auto& b = fc[i];
      const bool ordered = a.value < b.value ||
                           (a.value == b.value && (a.simplex.dimension() < b.simplex.dimension() ||
                                                   (a.simplex.dimension() == b.simplex.dimension() &&
                                                    a.simplex.vertices() < b.simplex.vertices())));
      REQUIRE(ordered);
    }
    for (int k = 0; k < 5; ++k) {
      const double t = fc[rng.below(fc.size())].value;
      CHECK(fc.prefix(t) == build_rips(dm, t / 2, 2));
    }
  }
}

TEST_CASE("is_connected") {
  const std::vector<Simplex> path{{0}, {1}, {2}, {0, 1}, {1, 2}};
  CHECK(is_connected(SimplicialComplex(path)));
  const std::vector<Simplex> disjoint{{0}, {1}, {2}, {3}, {0, 1}, {2, 3}};
  CHECK_FALSE(is_connected(SimplicialComplex(disjoint)));
  const std::vector<Simplex> single{{0}};
  CHECK(is_connected(SimplicialComplex(single)));
}

TEST_CASE("is_connected agrees with β0") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pc = oracle::random_cloud(rng, 1 + rng.below(25), 2);
    const auto sc = build_rips(pairwise_distances(pc), 0.3 * rng.uniform(), 1);
    CHECK(is_connected(sc) == (betti_numbers(sc, 1)[0] == 1));
  }
}

TEST_CASE("scaling coordinates and radius together leaves Rips unchanged") {
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pc = oracle::random_cloud(rng, 2 + rng.below(20), 2);
    const double r = 0.3 * rng.uniform();
    // Powers of two keep every distance and threshold exact.
    const double lambda = std::ldexp(1.0, static_cast<int>(rng.below(7)) - 3);
    CHECK(build_rips(pairwise_distances(pc), r, 2) == build_rips(pairwise_distances(pc.scaled(lambda)), lambda * r, 2));
  }
}
