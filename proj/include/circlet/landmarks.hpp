#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "circlet/errors.hpp"
#include "circlet/metric.hpp"
#include "circlet/rng.hpp"

namespace circlet {

enum class SamplingMethod { Maxmin, Random };

struct LandmarkSet {
  std::vector<std::size_t> indices;  // ordered, distinct
  double r_L = 0.0;                  // max over data of min landmark distance
  SamplingMethod method = SamplingMethod::Maxmin;
  std::uint64_t seed_or_start = 0;
};

namespace detail {

// Final scan for r_L given the per-point min-distance array.
inline double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace detail

// Greedy farthest-point sampling. indices[0] = start; each subsequent
// landmark maximizes the minimum distance to those already chosen, ties
// broken by lowest index.
inline LandmarkSet maxmin_landmarks(const DistanceSource& src, std::size_t N,
                                    std::size_t start = 0) {
  const std::size_t n = src.size();
  if (N < 1 || N > n)
    throw argument_error("maxmin_landmarks: N = " + std::to_string(N) +
                         " outside [1, " + std::to_string(n) + "]");
  if (start >= n) throw argument_error("maxmin_landmarks: start out of range");

  LandmarkSet ls;
  ls.method = SamplingMethod::Maxmin;
  ls.seed_or_start = start;
  ls.indices.reserve(N);
  ls.indices.push_back(start);

  std::vector<double> mind(n);
  for (std::size_t x = 0; x < n; ++x) mind[x] = src(x, start);

  while (ls.indices.size() < N) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (mind[x] > best_d) {
        best_d = mind[x];
        best = x;
      }
    }
    ls.indices.push_back(best);
    for (std::size_t x = 0; x < n; ++x)
      mind[x] = std::min(mind[x], src(x, best));
  }
  ls.r_L = detail::max_of(mind);
  return ls;
}

// N distinct indices drawn without replacement via a partial Fisher-Yates
// shuffle driven by SplitMix64.
inline LandmarkSet random_landmarks(const DistanceSource& src, std::size_t N,
                                    std::uint64_t seed) {
  const std::size_t n = src.size();
  if (N < 1 || N > n)
    throw argument_error("random_landmarks: N = " + std::to_string(N) +
                         " outside [1, " + std::to_string(n) + "]");

  LandmarkSet ls;
  ls.method = SamplingMethod::Random;
  ls.seed_or_start = seed;

  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t j = k + rng.bounded(n - k);
    std::swap(pool[k], pool[j]);
  }
  ls.indices.assign(pool.begin(), pool.begin() + N);

  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t l : ls.indices) mind[x] = std::min(mind[x], src(x, l));
  ls.r_L = detail::max_of(mind);
  return ls;
}

/// Materialized landmark-landmark distance matrix (N x N, row-major).
inline std::vector<double> landmark_matrix(const DistanceSource& src,
                                           const LandmarkSet& ls) {
  const std::size_t N = ls.indices.size();
  std::vector<double> m(N * N, 0.0);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b) {
      const double d = src(ls.indices[a], ls.indices[b]);
      m[a * N + b] = d;
      m[b * N + a] = d;
    }
  return m;
}

}  // namespace circlet
