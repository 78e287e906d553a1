#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <utility>

#include "riemann/geometry.hpp"
#include "support.hpp"

using namespace riemann;
using fixtures::error_of;

namespace {

Domain square01() { return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Every cell edge keyed by its lattice endpoints (sorted), with owner count.
std::map<std::pair<std::pair<long, long>, std::pair<long, long>>, int> edge_owners(const DyadicGrid& g) {
  std::map<std::pair<std::pair<long, long>, std::pair<long, long>>, int> owners;
  for (const Lattice c : g.cells()) {
    const std::pair<long, long> ll{c.i, c.j}, lr{c.i + 1, c.j}, ur{c.i + 1, c.j + 1}, ul{c.i, c.j + 1};
    ++owners[{ll, lr}];
    ++owners[{lr, ur}];
    ++owners[{ul, ur}];
    ++owners[{ll, ul}];
  }
  return owners;
}

void check_structure(const DyadicGrid& g) {
  // Closed cycle, exactly in lattice arithmetic.
  std::int64_t di = 0, dj = 0;
  for (const auto& e : g.boundary_edges()) {
    di += e.end.i - e.start.i;
    dj += e.end.j - e.start.j;
    CHECK(std::abs(e.end.i - e.start.i) + std::abs(e.end.j - e.start.j) == 1);
  }
  CHECK(di == 0);
  CHECK(dj == 0);

  // Ownership dichotomy; boundary edges are the singly owned ones.
  const auto owners = edge_owners(g);
  std::size_t single = 0;
  for (const auto& [edge, count] : owners) {
    CHECK((count == 1 || count == 2));
    if (count == 1) ++single;
  }
  CHECK(single == g.boundary_edges().size());
  for (const auto& e : g.boundary_edges()) {
    std::pair<long, long> a{e.start.i, e.start.j}, b{e.end.i, e.end.j};
    if (b < a) std::swap(a, b);
    CHECK(owners.at({a, b}) == 1);
  }

  for (std::size_t n = 0; n < g.node_count(); ++n) {
    CHECK(g.is_interior(n) == (g.cell_multiplicity(n) == 4));
  }
}

}  // namespace

TEST_CASE("unit square at level 2") {
  const DyadicGrid g = build_grid(square01(), 2);
  REQUIRE(g.cell_count() == 4);
  for (const Lattice c : g.cells()) {
    CHECK((c.i >= 1 && c.i <= 2 && c.j >= 1 && c.j <= 2));
  }
  CHECK(g.node_count() == 9);
  CHECK(g.spacing() == 0.25);

  const auto edges = g.boundary_edges();
  REQUIRE(edges.size() == 8);
  double twice_area = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Point a = g.position(edges[k].start), b = g.position(edges[k].end);
    CHECK(std::abs(b - a) == 0.25);
    CHECK(a.real() >= 0.25);
    CHECK(a.real() <= 0.75);
    CHECK(a.imag() >= 0.25);
    CHECK(a.imag() <= 0.75);
    twice_area += a.real() * b.imag() - b.real() * a.imag();
  }
  CHECK(twice_area == doctest::Approx(2 * 0.25));
  check_structure(g);
}

TEST_CASE("unit disc at level 1 keeps the four squares at the origin") {
  const DyadicGrid g = build_grid(fixtures::unit_disc(), 1);
  CHECK(g.cell_count() == 4);
  CHECK(g.node_count() == 9);
  const auto centre = g.node_index({0, 0});
  REQUIRE(centre);
  CHECK(g.is_interior(*centre));
}

TEST_CASE("single cell grid") {
  const DyadicGrid g = grid_from_cells({{3, -2}}, 4);
  CHECK(g.boundary_edges().size() == 4);
  CHECK(g.node_count() == 4);
  for (std::size_t n = 0; n < 4; ++n) CHECK_FALSE(g.is_interior(n));
  check_structure(g);
}

TEST_CASE("grid error paths") {
  CHECK(error_of([] { build_grid(square01(), 0); }) == ErrorCode::MalformedInput);
  CHECK(error_of([] { build_grid(square01(), 1); }) == ErrorCode::EmptyGrid);
  CHECK(error_of([] { build_grid(square01(), 3, 0.2); }) == ErrorCode::MalformedInput);
}

TEST_CASE("lookup and location") {
  const DyadicGrid g = build_grid(fixtures::unit_disc(), 4);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    REQUIRE(g.node_index(g.nodes()[n]) == n);
  }
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto found = g.locate(g.cell_center(c));
    REQUIRE(found);
    CHECK(*found == c);
    const auto corners = g.cell_corners(c);
    CHECK(g.node_position(corners[0]) == g.position(g.cells()[c]));
    CHECK(g.node_position(corners[2]) - g.node_position(corners[0]) == Point{g.spacing(), g.spacing()});
  }
  CHECK_FALSE(g.locate({2.0, 0.0}));
  CHECK(g.nearest_node({0.01, -0.01}) == *g.node_index({0, 0}));
  CHECK(g.distance_to({0.0, 0.0}) == 0.0);
  CHECK(g.distance_to({3.0, 0.0}) > 2.0);
}

TEST_CASE("neighbours follow cell edges only") {
  // Two cells touching at a single corner share a node but no edge.
  const DyadicGrid g = grid_from_cells({{0, 0}, {1, 1}}, 3);
  const auto shared = g.node_index({1, 1});
  REQUIRE(shared);
  CHECK(g.cell_multiplicity(*shared) == 2);
  CHECK_FALSE(g.is_interior(*shared));
  CHECK(g.neighbor(*shared, DyadicGrid::East) != kNoNode);
  CHECK(g.neighbor(*shared, DyadicGrid::West) != kNoNode);
  CHECK(g.boundary_edges().size() == 8);
  check_structure(g);
}

TEST_CASE("property: structural invariants on random star polygons and discs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 40; ++trial) {
    CAPTURE(trial);
    const Domain d = trial % 2 == 0 ? make_polygon(fixtures::star_polygon(rng, {u(rng), u(rng)}, 5 + trial % 7, 0.4, 1.2))
                                    : make_disc({u(rng), u(rng)}, 0.5 + std::abs(u(rng)));
    const int level = 3 + trial % 4;
    const double shift = trial % 3 == 0 ? default_shift(level) : 0.0;
    const DyadicGrid g = build_grid(d, level, shift);
    check_structure(g);
    CHECK(boundary_edges(g).size() == g.boundary_edges().size());
  }
}

TEST_CASE("property: kept squares lie inside the domain (dense sampling oracle)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    const Domain d = make_polygon(fixtures::star_polygon(rng, {0.0, 0.0}, 6 + trial, 0.3, 1.0));
    const int level = 4 + trial % 2;
    for (const double shift : {0.0, default_shift(level)}) {
      const DyadicGrid g = build_grid(d, level, shift);
      const double h = g.spacing();
      for (std::size_t c = 0; c < g.cell_count(); ++c) {
        const Point ll = g.position(g.cells()[c]);
        for (int a = 0; a <= 8; ++a) {
          for (int b = 0; b <= 8; ++b) {
            if (a != 0 && a != 8 && b != 0 && b != 8) continue;
            REQUIRE(contains(d, ll + Point{a * h / 8, b * h / 8}));
          }
        }
      }
    }
  }
}

TEST_CASE("property: refinement monotonicity and exhaustion") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Domain d = make_polygon(fixtures::star_polygon(rng, {0.0, 0.0}, 7, 0.5, 1.0));
    // Children of every level-N cell are level-(N+1) cells.
    for (int level = 2; level <= 5; ++level) {
      const DyadicGrid coarse = build_grid(d, level);
      const DyadicGrid fine = build_grid(d, level + 1);
      for (const Lattice c : coarse.cells()) {
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) CHECK(fine.has_cell({2 * c.i + a, 2 * c.j + b}));
        }
      }
    }
    // Each sampled point at least ~0.01 inside is eventually covered and stays covered.
    for (int k = 0; k < 5; ++k) {
      Point p;
      auto well_inside = [&](Point z) {
        for (int a = 0; a < 8; ++a) {
          if (!contains(d, z + std::polar(0.01, a * M_PI / 4))) return false;
        }
        return true;
      };
      do {
        p = fixtures::uniform_in_disc(rng, {0.0, 0.0}, 1.0);
      } while (!well_inside(p));
      int first = -1;
      for (int level = 1; level <= 10 && first < 0; ++level) {
        if (error_of([&] { if (build_grid(d, level).locate(p)) first = level; })) continue;
      }
      REQUIRE(first > 0);
      for (int level = first; level <= std::min(first + 2, 10); ++level) {
        CHECK(build_grid(d, level).locate(p).has_value());
      }
    }
  }
}
