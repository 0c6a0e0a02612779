#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "circlet/cohomology.hpp"
#include "circlet/landmarks.hpp"
#include "circlet/synth.hpp"
#include "oracles.hpp"

using namespace circlet;

namespace {

RipsFiltration hexagon_filtration(double threshold) {
  const auto m = oracle::full_matrix(oracle::hexagon());
  return build_rips(m, 6, threshold, 2);
}

std::vector<PersistencePair> dim1(const std::vector<PersistencePair>& pairs) {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs)
    if (p.dim == 1) out.push_back(p);
  return out;
}

// Signed sum of a cochain around the hexagon boundary cycle 0-1-2-3-4-5-0.
int cycle_pairing(const EdgeCochainQ& rep, int q) {
  const auto at = [&](int a, int b) {
    for (const auto& ev : rep)
      if (ev.i == std::min(a, b) && ev.j == std::max(a, b))
        return a < b ? ev.value : -ev.value;
    return 0;
  };
  int s = 0;
  for (int v = 0; v < 6; ++v) s += at(v, (v + 1) % 6);
  return ((s % q) + q) % q;
}

}  // namespace

TEST_CASE("persistence diagrams on reference spaces") {
  SECTION("hexagon: exactly one dim-1 pair (1, sqrt 3)") {
    const auto f = hexagon_filtration(2.1);
    const auto d1 = dim1(persistent_cohomology(f, 47));
    REQUIRE(d1.size() == 1);
    REQUIRE(d1[0].finite());
    REQUIRE(d1[0].birth == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(d1[0].death == Catch::Approx(std::sqrt(3.0)).margin(1e-9));
  }
  SECTION("unit square: one dim-1 pair (1, sqrt 2)") {
    const auto src = DistanceSource::from_points({0, 0, 1, 0, 0, 1, 1, 1}, 2);
    const auto f = build_rips(oracle::full_matrix(src), 4, 2.0, 2);
    const auto d1 = dim1(persistent_cohomology(f, 47));
    REQUIRE(d1.size() == 1);
    REQUIRE(d1[0].birth == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(d1[0].death == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
  }
  SECTION("tree-like 3-point space has empty dim-1 diagram") {
    const auto src = DistanceSource::from_points({0.0, 1.0, 3.0}, 1);
    const auto f = build_rips(oracle::full_matrix(src), 3, 10.0, 2);
    REQUIRE(dim1(persistent_cohomology(f, 47)).empty());
  }
  SECTION("q must be an odd prime") {
    const auto f = hexagon_filtration(2.1);
    REQUIRE_THROWS_AS(persistent_cohomology(f, 4), argument_error);
    REQUIRE_THROWS_AS(persistent_cohomology(f, 2), argument_error);
    REQUIRE_THROWS_AS(persistent_cohomology(f, 1), argument_error);
  }
}

TEST_CASE("reduction agrees with the rank-function oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto src = oracle::random_cloud(4 + seed % 7, 500 + seed);
    const auto m = oracle::full_matrix(src);
    double diam = 0.0;
    for (double d : m) diam = std::max(diam, d);
    const auto f = build_rips(m, static_cast<int>(src.size()), diam * 1.01, 2);
    for (int q : {3, 47}) {
      const auto a = oracle::diagram_key(persistent_cohomology(f, q));
      const auto b = oracle::diagram_key(oracle::rank_oracle_diagram(f, q));
      REQUIRE(a == b);
    }
  }
}

TEST_CASE("diagram is independent of q on torsion-free suites") {
  const auto cloud = gen_noisy_circle(300, 0.1, 31);
  const auto ls = maxmin_landmarks(cloud.source, 25, 0);
  const auto lm = landmark_matrix(cloud.source, ls);
  double diam = 0.0;
  for (double d : lm) diam = std::max(diam, d);
  const auto f = build_rips(lm, 25, diam, 2);
  const auto ref = oracle::diagram_key(persistent_cohomology(f, 3));
  for (int q : {5, 7, 47, 991})
    REQUIRE(oracle::diagram_key(persistent_cohomology(f, q)) == ref);
}

TEST_CASE("dim-0 infinite pairs equal component count") {
  // two far-apart clusters cut by a small threshold
  const auto src = DistanceSource::from_points(
      {0.0, 0.3, 0.6, 10.0, 10.2, 20.0}, 1);
  const auto f = build_rips(oracle::full_matrix(src), 6, 1.0, 2);
  const auto pairs = persistent_cohomology(f, 47);

  // independent union-find over the included edges
  std::vector<int> parent(6);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : f.edges) parent[find(e.i)] = find(e.j);
  int comps = 0;
  for (int v = 0; v < 6; ++v)
    if (find(v) == v) ++comps;

  int inf0 = 0;
  for (const auto& p : pairs)
    if (p.dim == 0 && !p.finite()) ++inf0;
  REQUIRE(comps == 3);
  REQUIRE(inf0 == comps);
}

TEST_CASE("scale selection") {
  SECTION("alpha interpolates max{birth, r_L} and death/2") {
    std::vector<PersistencePair> pairs{{1, 0.9, 2.2, {}}};
    REQUIRE(choose_scale(pairs, 1.0, 0.5).alpha ==
            Catch::Approx(0.5 * 1.0 + 0.5 * 1.1).margin(1e-12));
    // birth dominates when it exceeds r_L
    REQUIRE(choose_scale(pairs, 0.2, 0.25).alpha ==
            Catch::Approx(0.25 * 0.9 + 0.75 * 1.1).margin(1e-12));
  }
  SECTION("gate: max{birth, r_L} must stay below death/2") {
    // (1, sqrt 3) fails for every r_L since 1 >= sqrt(3)/2
    std::vector<PersistencePair> pairs{{1, 1.0, std::sqrt(3.0), {}}};
    for (double r_L : {0.9, 2.0})
      REQUIRE_THROWS_MATCHES(choose_scale(pairs, r_L, 0.5),
                             no_qualifying_class_error,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("b/2")));
  }
  SECTION("t limits excluded") {
    std::vector<PersistencePair> pairs{{1, 0.1, 3.0, {}}};
    REQUIRE_THROWS_AS(choose_scale(pairs, 0.0, 0.0), argument_error);
    REQUIRE_THROWS_AS(choose_scale(pairs, 0.0, 1.0), argument_error);
  }
  SECTION("most-persistent ordering and rank selector") {
    std::vector<PersistencePair> pairs{
        {1, 0.2, 1.0, {}},   // persistence 0.8
        {1, 0.1, 2.0, {}},   // persistence 1.9 (most persistent)
        {0, 0.0, 5.0, {}},   // wrong dimension
        {1, 3.0, 4.0, {}}};  // fails max{a, r_L} < b/2
    const auto qual = qualifying_pairs(pairs, 0.05);
    REQUIRE(qual == std::vector<std::size_t>{1, 0});
    REQUIRE(choose_scale(pairs, 0.05, 0.5).pair_index == 1);
    REQUIRE(choose_scale(pairs, 0.05, 0.5, 1).pair_index == 0);
    REQUIRE_THROWS_AS(choose_scale(pairs, 0.05, 0.5, 2), argument_error);
  }
}

TEST_CASE("representative cocycles") {
  const auto f = hexagon_filtration(2.1);
  const auto pairs = persistent_cohomology(f, 47);
  const auto d1 = dim1(pairs);
  REQUIRE(d1.size() == 1);
  const auto& pair = d1[0];

  SECTION("at s = 1.5: cocycle pairing with the generating cycle is +-1") {
    const auto rep = representative_at_scale(pair, f, 1.5, 47);
    const auto sub = restrict_filtration(f, 1.5);
    REQUIRE(is_cocycle_mod_q(rep, sub, 47));
    const int pairing = cycle_pairing(rep, 47);
    REQUIRE((pairing == 1 || pairing == 47 - 1));
  }
  SECTION("at s = death: still a cocycle there") {
    const auto rep = representative_at_scale(pair, f, pair.death, 47);
    REQUIRE(is_cocycle_mod_q(rep, restrict_filtration(f, pair.death), 47));
  }
  SECTION("restriction is a cocycle at every scale in (birth, death]") {
    for (double s : {1.05, 1.2, 1.5, 1.7, std::sqrt(3.0)}) {
      const auto rep = representative_at_scale(pair, f, s, 47);
      REQUIRE(is_cocycle_mod_q(rep, restrict_filtration(f, s), 47));
      for (const auto& ev : rep) {
        REQUIRE(ev.value > 0);
        REQUIRE(ev.value < 47);
      }
    }
  }
  SECTION("s outside (birth, death] rejected") {
    REQUIRE_THROWS_AS(representative_at_scale(pair, f, pair.birth, 47),
                      argument_error);
    REQUIRE_THROWS_AS(representative_at_scale(pair, f, 2.0, 47),
                      argument_error);
  }
}

TEST_CASE("representatives on a larger suite are cocycles at 2 alpha") {
  const auto cloud = gen_noisy_circle(500, 0.1, 77);
  const auto ls = maxmin_landmarks(cloud.source, 40, 0);
  const auto lm = landmark_matrix(cloud.source, ls);
  double diam = 0.0;
  for (double d : lm) diam = std::max(diam, d);
  const auto f = build_rips(lm, 40, diam, 2);
  const auto pairs = persistent_cohomology(f, 47);
  const auto sc = choose_scale(pairs, ls.r_L, 0.5);
  const auto rep = representative_at_scale(sc.pair, f, 2.0 * sc.alpha, 47);
  REQUIRE(is_cocycle_mod_q(rep, restrict_filtration(f, 2.0 * sc.alpha), 47));
}
