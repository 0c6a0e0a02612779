#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "circlet/cohomology.hpp"
#include "circlet/errors.hpp"
#include "circlet/filtration.hpp"
#include "circlet/harmonic.hpp"
#include "circlet/integer_lift.hpp"
#include "circlet/landmarks.hpp"
#include "circlet/metric.hpp"

namespace circlet {

enum class CoordinateMode { Harmonic, Integer };

/// Wrap a radian value into (-pi, pi].
inline double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * SplitMix64::pi());
  if (r <= -SplitMix64::pi()) r += 2.0 * SplitMix64::pi();
  return r;
}

// Everything needed to evaluate the circle map on arbitrary covered points:
// landmark indices, the scale alpha, the vertex cochain tau and the edge
// cochain theta on R_{2 alpha}. Stores nothing outside R_{2 alpha}.
class CoordinateModel {
 public:
  CoordinateModel() = default;

  CoordinateModel(std::vector<std::size_t> landmark_indices, double alpha,
                  std::vector<double> tau, const RipsFiltration& filt_2alpha,
                  const std::vector<double>& theta, CoordinateMode mode, int q,
                  std::string class_id)
      : landmarks_(std::move(landmark_indices)),
        alpha_(alpha),
        tau_(std::move(tau)),
        mode_(mode),
        q_(q),
        class_id_(std::move(class_id)) {
    const int n = static_cast<int>(landmarks_.size());
    theta_.reserve(filt_2alpha.edges.size() * 2);
    for (std::size_t e = 0; e < filt_2alpha.edges.size(); ++e)
      theta_[static_cast<std::uint64_t>(filt_2alpha.edges[e].i) * n +
             filt_2alpha.edges[e].j] = theta[e];
  }

  /// Model from an integer cochain (tau = 0): the f_eta comparison mode.
  static CoordinateModel from_integer(std::vector<std::size_t> landmark_indices,
                                      double alpha,
                                      const RipsFiltration& filt_2alpha,
                                      const IntegerCochain& eta, int q,
                                      std::string class_id) {
    std::vector<double> dense = detail::densify(eta, filt_2alpha);
    return CoordinateModel(std::move(landmark_indices), alpha,
                           std::vector<double>(filt_2alpha.n_vertices, 0.0),
                           filt_2alpha, dense, CoordinateMode::Integer, q,
                           std::move(class_id));
  }

  const std::vector<std::size_t>& landmarks() const { return landmarks_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& tau() const { return tau_; }
  CoordinateMode mode() const { return mode_; }
  int q_used() const { return q_; }
  const std::string& class_id() const { return class_id_; }

  /// theta on the oriented edge (j, k) of landmark ordinals; antisymmetric,
  /// zero on non-edges.
  double theta_at(int j, int k) const {
    if (j == k) return 0.0;
    const int n = static_cast<int>(landmarks_.size());
    const bool flip = j > k;
    if (flip) std::swap(j, k);
    const auto it = theta_.find(static_cast<std::uint64_t>(j) * n + k);
    if (it == theta_.end()) return 0.0;
    return flip ? -it->second : it->second;
  }

  bool has_edge(int j, int k) const {
    if (j > k) std::swap(j, k);
    const int n = static_cast<int>(landmarks_.size());
    return theta_.count(static_cast<std::uint64_t>(j) * n + k) > 0;
  }

 private:
  std::vector<std::size_t> landmarks_;
  double alpha_ = 0.0;
  std::vector<double> tau_;
  std::unordered_map<std::uint64_t, double> theta_;
  CoordinateMode mode_ = CoordinateMode::Harmonic;
  int q_ = 0;
  std::string class_id_;
};

/// Per-query angle in (-pi, pi], or a not-covered marker.
struct AngleAssignment {
  std::vector<double> angles;
  std::vector<char> covered;

  std::size_t size() const { return angles.size(); }
  std::size_t marker_count() const {
    return static_cast<std::size_t>(
        std::count(covered.begin(), covered.end(), char{0}));
  }
};

namespace detail {

inline std::vector<double> landmark_distances(const CoordinateModel& model,
                                              const QueryPoint& b,
                                              const DistanceSource& src) {
  std::vector<double> d(model.landmarks().size());
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = distance(src, QueryPoint::index(model.landmarks()[k]), b);
  return d;
}

}  // namespace detail

// phi_k(b) = |alpha - d(l_k, b)|_+ normalized; support is exactly the set of
// landmarks whose alpha-ball contains b.
inline std::vector<std::pair<int, double>> partition_of_unity(
    const CoordinateModel& model, const QueryPoint& b,
    const DistanceSource& src) {
  const auto d = detail::landmark_distances(model, b, src);
  std::vector<std::pair<int, double>> phi;
  double total = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double v = model.alpha() - d[k];
    if (v > 0.0) {
      phi.push_back({static_cast<int>(k), v});
      total += v;
    }
  }
  if (phi.empty())
    throw not_covered_error("query point lies outside every landmark ball");
  for (auto& [k, v] : phi) v /= total;
  return phi;
}

// Angle at b evaluated from the chart of covering landmark j:
// 2 pi (tau_j + sum_k phi_k theta_{jk}), wrapped to (-pi, pi]. Any covering
// j gives the same value mod 2 pi; callers normally pass the nearest.
inline double evaluate_with_index(const CoordinateModel& model,
                                  const QueryPoint& b,
                                  const DistanceSource& src, int j) {
  const auto phi = partition_of_unity(model, b, src);
  bool j_covers = false;
  for (const auto& [k, p] : phi) j_covers = j_covers || k == j;
  if (!j_covers)
    throw argument_error("evaluate_with_index: landmark does not cover the query");
  double sum = model.tau()[j];
  for (const auto& [k, p] : phi) {
    if (k == j) continue;
    // phi_k > 0 with b also in B_alpha(l_j) forces {j,k} into R_{2 alpha};
    // a missing edge here means the model is inconsistent.
    if (!model.has_edge(j, k))
      throw error("internal: covering landmarks " + std::to_string(j) + "," +
                  std::to_string(k) + " share no edge in R_{2 alpha}");
    sum += p * model.theta_at(j, k);
  }
  return wrap_angle(2.0 * SplitMix64::pi() * sum);
}

inline double evaluate(const CoordinateModel& model, const QueryPoint& b,
                       const DistanceSource& src) {
  const auto d = detail::landmark_distances(model, b, src);
  int j = -1;
  double best = model.alpha();
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] < best) {
      best = d[k];
      j = static_cast<int>(k);
    }
  if (j < 0)
    throw not_covered_error("query point lies outside every landmark ball");
  return evaluate_with_index(model, b, src, j);
}

inline AngleAssignment evaluate_all(const CoordinateModel& model,
                                    const DistanceSource& src,
                                    const std::vector<QueryPoint>& targets) {
  AngleAssignment out;
  out.angles.resize(targets.size(), 0.0);
  out.covered.resize(targets.size(), 0);
  for (std::size_t q = 0; q < targets.size(); ++q) {
    try {
      out.angles[q] = evaluate(model, targets[q], src);
      out.covered[q] = 1;
    } catch (const not_covered_error&) {
      // marker
    }
  }
  return out;
}

/// All data points of the source, in index order.
inline AngleAssignment evaluate_all(const CoordinateModel& model,
                                    const DistanceSource& src) {
  std::vector<QueryPoint> targets;
  targets.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i)
    targets.push_back(QueryPoint::index(i));
  return evaluate_all(model, src, targets);
}

// Pointwise integer combination sum_i c_i * angle_i on the circle; a marker
// in any input marks the output.
inline AngleAssignment combine(const std::vector<AngleAssignment>& assignments,
                               const std::vector<int>& coefficients) {
  if (assignments.empty() || assignments.size() != coefficients.size())
    throw argument_error("combine: assignment/coefficient length mismatch");
  const std::size_t n = assignments.front().size();
  for (const auto& a : assignments)
    if (a.size() != n)
      throw argument_error("combine: assignments of different lengths");

  AngleAssignment out;
  out.angles.resize(n, 0.0);
  out.covered.resize(n, 1);
  for (std::size_t q = 0; q < n; ++q) {
    double sum = 0.0;
    for (std::size_t a = 0; a < assignments.size(); ++a) {
      if (!assignments[a].covered[q]) {
        out.covered[q] = 0;
        break;
      }
      sum += coefficients[a] * assignments[a].angles[q];
    }
    if (out.covered[q]) out.angles[q] = wrap_angle(sum);
  }
  return out;
}

}  // namespace circlet
