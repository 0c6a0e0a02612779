#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "circlet/errors.hpp"

namespace circlet {

struct RipsEdge {
  int i, j;  // i < j
  double diameter;
};

struct RipsTriangle {
  int i, j, k;  // i < j < k
  double diameter;
};

// Rips complex of the landmark set up to a threshold: all simplices of
// dimension <= 2 whose diameter is strictly below the threshold. Edges and
// triangles are sorted by (diameter, vertex tuple), which fixes the
// reduction order deterministically.
struct RipsFiltration {
  int n_vertices = 0;
  double threshold = 0.0;
  std::vector<RipsEdge> edges;
  std::vector<RipsTriangle> triangles;
};

// dist is the n x n landmark distance matrix (row-major). Simplices with
// diameter < threshold only; strict inequality matches the open Rips
// convention, so the weight |2a - d| is positive on every included edge.
inline RipsFiltration build_rips(const std::vector<double>& dist, int n,
                                 double threshold, int max_dim = 2) {
  if (threshold <= 0.0) throw argument_error("build_rips: threshold must be > 0");
  if (max_dim != 1 && max_dim != 2)
    throw argument_error("build_rips: max_dim must be 1 or 2");

  RipsFiltration f;
  f.n_vertices = n;
  f.threshold = threshold;
  const auto d = [&](int a, int b) { return dist[a * n + b]; };

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (d(i, j) < threshold) f.edges.push_back({i, j, d(i, j)});

  if (max_dim >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double dij = d(i, j);
        if (dij >= threshold) continue;
        for (int k = j + 1; k < n; ++k) {
          const double diam = std::max({dij, d(i, k), d(j, k)});
          if (diam < threshold) f.triangles.push_back({i, j, k, diam});
        }
      }
  }

  std::sort(f.edges.begin(), f.edges.end(), [](const RipsEdge& a, const RipsEdge& b) {
    return std::tie(a.diameter, a.i, a.j) < std::tie(b.diameter, b.i, b.j);
  });
  std::sort(f.triangles.begin(), f.triangles.end(),
            [](const RipsTriangle& a, const RipsTriangle& b) {
              return std::tie(a.diameter, a.i, a.j, a.k) <
                     std::tie(b.diameter, b.i, b.j, b.k);
            });
  return f;
}

/// Same complex truncated to simplices of diameter < s. Requires s <= threshold.
inline RipsFiltration restrict_filtration(const RipsFiltration& filt, double s) {
  if (s > filt.threshold)
    throw argument_error("restrict_filtration: s = " + std::to_string(s) +
                         " exceeds threshold " + std::to_string(filt.threshold));
  RipsFiltration f;
  f.n_vertices = filt.n_vertices;
  f.threshold = s;
  for (const auto& e : filt.edges)
    if (e.diameter < s) f.edges.push_back(e);
  for (const auto& t : filt.triangles)
    if (t.diameter < s) f.triangles.push_back(t);
  return f;
}

}  // namespace circlet
