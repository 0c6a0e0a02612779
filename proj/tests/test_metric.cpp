#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "circlet/metric.hpp"
#include "circlet/rng.hpp"
#include "oracles.hpp"

using namespace circlet;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("point cloud loading") {
  SECTION("three 2-d rows") {
    const auto p = write_temp("pc3.csv", "0,0\n1,0\n0,1\n");
    const auto src = load_point_cloud(p);
    REQUIRE(src.size() == 3);
    REQUIRE(src.kind() == SourceKind::PointCloud);
    REQUIRE(src(1, 2) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
  }
  SECTION("single row") {
    const auto p = write_temp("pc1.csv", "2.5,3.5\n");
    const auto src = load_point_cloud(p);
    REQUIRE(src.size() == 1);
    REQUIRE(src(0, 0) == 0.0);
  }
  SECTION("non-numeric field names the line") {
    const auto p = write_temp("pcbad.csv", "a,b\n");
    REQUIRE_THROWS_MATCHES(load_point_cloud(p), format_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("line 1")));
  }
  SECTION("ragged rows rejected with line number") {
    const auto p = write_temp("pcrag.csv", "0,0\n1\n");
    REQUIRE_THROWS_MATCHES(load_point_cloud(p), format_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("line 2")));
  }
  SECTION("empty file rejected") {
    const auto p = write_temp("pcempty.csv", "");
    REQUIRE_THROWS_AS(load_point_cloud(p), format_error);
  }
  SECTION("missing file rejected") {
    REQUIRE_THROWS_AS(load_point_cloud("/nonexistent/x.csv"), format_error);
  }
  SECTION("header skip and custom delimiter") {
    const auto p = write_temp("pchdr.csv", "x;y\n0;0\n3;4\n");
    const auto src = load_point_cloud(p, ';', true);
    REQUIRE(src.size() == 2);
    REQUIRE(src(0, 1) == Catch::Approx(5.0).margin(1e-15));
  }
}

TEST_CASE("distance matrix loading") {
  SECTION("2x2 identity-like") {
    const auto p = write_temp("dm2.csv", "0,1\n1,0\n");
    const auto src = load_distance_matrix(p);
    REQUIRE(src.size() == 2);
    REQUIRE(src.kind() == SourceKind::ExplicitMatrix);
    REQUIRE(src(0, 1) == 1.0);
  }
  SECTION("asymmetric beyond tolerance") {
    const auto p = write_temp("dmasym.csv", "0,1\n2,0\n");
    REQUIRE_THROWS_AS(load_distance_matrix(p), validation_error);
  }
  SECTION("non-square") {
    const auto p = write_temp("dmns.csv", "0,1,2\n1,0,1\n");
    REQUIRE_THROWS_AS(load_distance_matrix(p), validation_error);
  }
  SECTION("negative entry") {
    const auto p = write_temp("dmneg.csv", "0,-1\n-1,0\n");
    REQUIRE_THROWS_AS(load_distance_matrix(p), validation_error);
  }
  SECTION("nonzero diagonal") {
    const auto p = write_temp("dmdiag.csv", "0.1,1\n1,0\n");
    REQUIRE_THROWS_AS(load_distance_matrix(p), validation_error);
  }
  SECTION("10x10 round trip matches the written values") {
    const auto cloud = oracle::random_cloud(10, 42);
    std::string body;
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) {
        if (j) body += ",";
        body += std::to_string(cloud(i, j));
      }
      body += "\n";
    }
    const auto p = write_temp("dm10.csv", body);
    const auto src = load_distance_matrix(p);
    REQUIRE(src.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
      REQUIRE(src(i, i) == 0.0);
      for (std::size_t j = 0; j < 10; ++j) {
        REQUIRE(src(i, j) == src(j, i));  // exact post-symmetrization
        REQUIRE(src(i, j) ==
                Catch::Approx(std::stod(std::to_string(cloud(i, j)))));
      }
    }
  }
}

TEST_CASE("distance queries") {
  const auto src = DistanceSource::from_points({0.0, 0.0, 3.0, 4.0}, 2);
  SECTION("index-index 3-4-5 triangle") {
    REQUIRE(distance(src, QueryPoint::index(0), QueryPoint::index(1)) == 5.0);
  }
  SECTION("raw vector against index") {
    REQUIRE(distance(src, QueryPoint::raw({3.0, 4.0}), QueryPoint::index(0)) ==
            5.0);
  }
  SECTION("raw query on matrix kind unsupported") {
    const auto m = DistanceSource::from_matrix({0.0, 1.0, 1.0, 0.0}, 2);
    REQUIRE_THROWS_AS(
        distance(m, QueryPoint::raw({0.0, 0.0}), QueryPoint::index(0)),
        unsupported_query_error);
  }
  SECTION("raw vector dimension checked") {
    REQUIRE_THROWS_AS(
        distance(src, QueryPoint::raw({1.0}), QueryPoint::index(0)),
        argument_error);
  }
  SECTION("index out of range") {
    REQUIRE_THROWS_AS(src(0, 2), argument_error);
  }
}

TEST_CASE("metric invariants on random clouds") {
  const auto src = oracle::random_cloud(60, 7);
  SECTION("exact symmetry") {
    for (std::size_t i = 0; i < src.size(); ++i)
      for (std::size_t j = 0; j < src.size(); ++j)
        REQUIRE(src(i, j) == src(j, i));
  }
  SECTION("triangle inequality on 1000 random triples") {
    SplitMix64 rng(99);
    for (int t = 0; t < 1000; ++t) {
      const auto a = rng.bounded(src.size());
      const auto b = rng.bounded(src.size());
      const auto c = rng.bounded(src.size());
      REQUIRE(src(a, c) <= src(a, b) + src(b, c) + 1e-12);
    }
  }
}
