#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <tuple>

#include "circlet/filtration.hpp"
#include "oracles.hpp"

using namespace circlet;

namespace {

std::vector<double> unit_square_matrix() {
  const auto src =
      DistanceSource::from_points({0, 0, 1, 0, 0, 1, 1, 1}, 2);
  return oracle::full_matrix(src);
}

}  // namespace

TEST_CASE("rips construction") {
  SECTION("unit square, threshold 1.2: four unit edges, no triangles") {
    const auto f = build_rips(unit_square_matrix(), 4, 1.2, 2);
    REQUIRE(f.edges.size() == 4);
    for (const auto& e : f.edges) REQUIRE(e.diameter == Catch::Approx(1.0));
    REQUIRE(f.triangles.empty());
  }
  SECTION("hexagon, threshold 1.8") {
    const auto m = oracle::full_matrix(oracle::hexagon());
    const auto f = build_rips(m, 6, 1.8, 2);
    std::size_t side = 0, skip = 0;
    for (const auto& e : f.edges) {
      if (std::abs(e.diameter - 1.0) < 1e-9) ++side;
      if (std::abs(e.diameter - std::sqrt(3.0)) < 1e-9) ++skip;
    }
    REQUIRE(side == 6);
    REQUIRE(skip == 6);
    REQUIRE(f.edges.size() == 12);  // opposite pairs (diam 2) excluded

    std::set<std::tuple<int, int, int>> tris;
    for (const auto& t : f.triangles) {
      REQUIRE(t.diameter == Catch::Approx(std::sqrt(3.0)).margin(1e-12));
      tris.insert({t.i, t.j, t.k});
    }
    REQUIRE(tris.count({0, 1, 2}) == 1);
    REQUIRE(tris.count({0, 2, 4}) == 1);
  }
  SECTION("threshold at the minimum positive distance is empty") {
    const auto f = build_rips(unit_square_matrix(), 4, 1.0, 2);
    REQUIRE(f.edges.empty());
    REQUIRE(f.triangles.empty());
  }
  SECTION("max_dim 1 skips triangles") {
    const auto m = oracle::full_matrix(oracle::hexagon());
    const auto f = build_rips(m, 6, 2.1, 1);
    REQUIRE(f.edges.size() == 15);
    REQUIRE(f.triangles.empty());
  }
  SECTION("bad arguments") {
    REQUIRE_THROWS_AS(build_rips(unit_square_matrix(), 4, 0.0, 2),
                      argument_error);
    REQUIRE_THROWS_AS(build_rips(unit_square_matrix(), 4, 1.0, 3),
                      argument_error);
  }
}

TEST_CASE("restriction") {
  const auto m = oracle::full_matrix(oracle::hexagon());
  const auto f = build_rips(m, 6, 1.8, 2);
  SECTION("restrict to threshold is the identity") {
    const auto r = restrict_filtration(f, 1.8);
    REQUIRE(r.edges.size() == f.edges.size());
    REQUIRE(r.triangles.size() == f.triangles.size());
  }
  SECTION("hexagon 1.8 -> 1.2 keeps the six sides only") {
    const auto r = restrict_filtration(f, 1.2);
    REQUIRE(r.edges.size() == 6);
    REQUIRE(r.triangles.empty());
  }
  SECTION("restrict to zero is empty") {
    const auto r = restrict_filtration(f, 0.0);
    REQUIRE(r.edges.empty());
    REQUIRE(r.triangles.empty());
  }
  SECTION("restrict above the threshold is an error") {
    REQUIRE_THROWS_AS(restrict_filtration(f, 2.0), argument_error);
  }
  SECTION("monotonicity: smaller scale is a subset") {
    const auto r1 = restrict_filtration(f, 1.1);
    const auto r2 = restrict_filtration(f, 1.75);
    std::set<std::pair<int, int>> e2;
    for (const auto& e : r2.edges) e2.insert({e.i, e.j});
    for (const auto& e : r1.edges) REQUIRE(e2.count({e.i, e.j}) == 1);
    REQUIRE(r1.edges.size() <= r2.edges.size());
  }
}

TEST_CASE("filtration invariants on a random landmark set") {
  const auto src = oracle::random_cloud(40, 17);
  const auto m = oracle::full_matrix(src);
  double diam = 0.0;
  for (double d : m) diam = std::max(diam, d);
  const auto f = build_rips(m, 40, diam, 2);

  SECTION("triangle diameter is the exact max of its edges") {
    std::set<std::pair<int, int>> edges;
    std::vector<double> ed(40 * 40, 0.0);
    for (const auto& e : f.edges) {
      edges.insert({e.i, e.j});
      ed[e.i * 40 + e.j] = e.diameter;
    }
    for (const auto& t : f.triangles) {
      // face closure
      REQUIRE(edges.count({t.i, t.j}) == 1);
      REQUIRE(edges.count({t.i, t.k}) == 1);
      REQUIRE(edges.count({t.j, t.k}) == 1);
      const double mx = std::max(
          {ed[t.i * 40 + t.j], ed[t.i * 40 + t.k], ed[t.j * 40 + t.k]});
      REQUIRE(t.diameter == mx);  // exact: same source values
      REQUIRE(t.diameter >= ed[t.i * 40 + t.j]);
    }
  }
  SECTION("sorted by (diameter, lex) and strictly below threshold") {
    for (std::size_t e = 1; e < f.edges.size(); ++e) {
      const auto& a = f.edges[e - 1];
      const auto& b = f.edges[e];
      REQUIRE(std::tie(a.diameter, a.i, a.j) <= std::tie(b.diameter, b.i, b.j));
    }
    for (const auto& e : f.edges) REQUIRE(e.diameter < f.threshold);
    for (std::size_t t = 1; t < f.triangles.size(); ++t) {
      const auto& a = f.triangles[t - 1];
      const auto& b = f.triangles[t];
      REQUIRE(std::tie(a.diameter, a.i, a.j, a.k) <=
              std::tie(b.diameter, b.i, b.j, b.k));
    }
  }
}
