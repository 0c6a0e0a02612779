#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "circlet/errors.hpp"
#include "circlet/metric.hpp"
#include "circlet/rng.hpp"

namespace circlet {

// A generated data set plus the generating parameters, kept as side metadata
// for winding tests (circle: angle1 = t; torus/klein: angle1, angle2).
struct SynthCloud {
  DistanceSource source;
  std::vector<double> angle1;
  std::vector<double> angle2;
};

// Points (1 + eps_i)(cos t_i, sin t_i) with t_i uniform in [0, 2 pi) and
// eps_i Gaussian(0, sigma^2), all drawn from the seeded generator.
inline SynthCloud gen_noisy_circle(std::size_t n, double sigma,
                                   std::uint64_t seed) {
  if (n < 1) throw argument_error("gen_noisy_circle: n must be >= 1");
  if (sigma < 0.0) throw argument_error("gen_noisy_circle: sigma must be >= 0");
  SplitMix64 rng(seed);
  std::vector<double> flat;
  flat.reserve(2 * n);
  SynthCloud out;
  out.angle1.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * SplitMix64::pi() * rng.uniform();
    const double r = 1.0 + sigma * rng.gaussian();
    flat.push_back(r * std::cos(t));
    flat.push_back(r * std::sin(t));
    out.angle1.push_back(t);
  }
  out.source = DistanceSource::from_points(std::move(flat), 2);
  return out;
}

// Flat torus embedded in R^4: rows (cos p1, sin p1, cos p2, sin p2) with
// (p1, p2) uniform on [0, 2 pi)^2; metric is the ambient chordal distance.
inline SynthCloud gen_torus(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw argument_error("gen_torus: n must be >= 1");
  SplitMix64 rng(seed);
  std::vector<double> flat;
  flat.reserve(4 * n);
  SynthCloud out;
  out.angle1.reserve(n);
  out.angle2.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p1 = 2.0 * SplitMix64::pi() * rng.uniform();
    const double p2 = 2.0 * SplitMix64::pi() * rng.uniform();
    flat.push_back(std::cos(p1));
    flat.push_back(std::sin(p1));
    flat.push_back(std::cos(p2));
    flat.push_back(std::sin(p2));
    out.angle1.push_back(p1);
    out.angle2.push_back(p2);
  }
  out.source = DistanceSource::from_points(std::move(flat), 4);
  return out;
}

/// Torus point for parameter angles (used for generator-loop queries).
inline std::vector<double> torus_point(double p1, double p2) {
  return {std::cos(p1), std::sin(p1), std::cos(p2), std::sin(p2)};
}

namespace detail {

inline double torus_chord(double a1, double a2, double b1, double b2) {
  const double u = 2.0 - 2.0 * std::cos(a1 - b1);
  const double v = 2.0 - 2.0 * std::cos(a2 - b2);
  return std::sqrt(std::max(u + v, 0.0));
}

}  // namespace detail

// Quotient metric on K = S^1 x S^1 / (z,w) ~ (-z, conj w), computed as the
// minimum of the chordal R^4 torus distance over the two representatives of
// one argument. The involution sends (p1, p2) to (p1 + pi, -p2) and is an
// isometry, so two representatives suffice.
inline double klein_distance(double a1, double a2, double b1, double b2) {
  const double d0 = detail::torus_chord(a1, a2, b1, b2);
  const double d1 = detail::torus_chord(a1, a2, b1 + SplitMix64::pi(), -b2);
  return std::min(d0, d1);
}

// n parameter pairs uniform on the fundamental domain [0, pi) x [0, 2 pi);
// emitted as an explicit distance matrix under the quotient metric.
inline SynthCloud gen_klein(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw argument_error("gen_klein: n must be >= 1");
  SplitMix64 rng(seed);
  SynthCloud out;
  out.angle1.reserve(n);
  out.angle2.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.angle1.push_back(SplitMix64::pi() * rng.uniform());
    out.angle2.push_back(2.0 * SplitMix64::pi() * rng.uniform());
  }
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = klein_distance(out.angle1[i], out.angle2[i],
                                      out.angle1[j], out.angle2[j]);
      m[i * n + j] = d;
      m[j * n + i] = d;
    }
  out.source = DistanceSource::from_matrix(std::move(m), n);
  return out;
}

}  // namespace circlet
