#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "circlet/errors.hpp"

namespace circlet {

enum class SourceKind { ExplicitMatrix, PointCloud };

// Uniform access to pairwise distances, backed either by an explicit
// symmetric matrix or by a Euclidean point cloud. Immutable after
// construction; point-cloud distances are computed lazily (no n x n
// materialization).
class DistanceSource {
 public:
  static DistanceSource from_points(std::vector<double> flat, std::size_t dim) {
    if (dim == 0 || flat.empty() || flat.size() % dim != 0)
      throw argument_error("point cloud: inconsistent dimension");
    DistanceSource s;
    s.kind_ = SourceKind::PointCloud;
    s.n_ = flat.size() / dim;
    s.dim_ = dim;
    s.points_ = std::move(flat);
    return s;
  }

  // Validates squareness, nonnegativity, zero diagonal (tolerance 1e-12) and
  // symmetry (relative tolerance 1e-9, symmetrized by averaging).
  static DistanceSource from_matrix(std::vector<double> m, std::size_t n) {
    if (n == 0 || m.size() != n * n)
      throw validation_error("distance matrix: not square");
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(m[i * n + i]) > 1e-12)
        throw validation_error("distance matrix: nonzero diagonal at row " +
                               std::to_string(i));
      m[i * n + i] = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = m[i * n + j], b = m[j * n + i];
        if (a < 0.0 || b < 0.0)
          throw validation_error("distance matrix: negative entry at (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 ")");
        const double scale = std::max({std::abs(a), std::abs(b), 1.0});
        if (std::abs(a - b) > 1e-9 * scale)
          throw validation_error("distance matrix: asymmetric at (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 "): " + std::to_string(a) + " vs " +
                                 std::to_string(b));
        const double d = 0.5 * (a + b);
        m[i * n + j] = d;
        m[j * n + i] = d;
      }
    }
    DistanceSource s;
    s.kind_ = SourceKind::ExplicitMatrix;
    s.n_ = n;
    s.matrix_ = std::move(m);
    return s;
  }

  SourceKind kind() const { return kind_; }
  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }

  double operator()(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw argument_error("distance: index out of range");
    if (kind_ == SourceKind::ExplicitMatrix) return matrix_[i * n_ + j];
    return point_dist(i, j);
  }

  /// Distance from stored point i to a raw ambient vector (point clouds only).
  double to_vector(std::size_t i, const std::vector<double>& v) const {
    if (kind_ != SourceKind::PointCloud)
      throw unsupported_query_error(
          "raw-vector query requires a point-cloud source");
    if (i >= n_) throw argument_error("distance: index out of range");
    if (v.size() != dim_)
      throw argument_error("raw vector has dimension " +
                           std::to_string(v.size()) + ", expected " +
                           std::to_string(dim_));
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = points_[i * dim_ + k] - v[k];
      s += d * d;
    }
    return std::sqrt(s);
  }

  /// Coordinate k of point i (point clouds only).
  double coord(std::size_t i, std::size_t k) const { return points_[i * dim_ + k]; }

 private:
  double point_dist(std::size_t i, std::size_t j) const {
    double s = 0.0;
    const double* a = points_.data() + i * dim_;
    const double* b = points_.data() + j * dim_;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = a[k] - b[k];
      s += d * d;
    }
    return std::sqrt(s);
  }

  SourceKind kind_ = SourceKind::PointCloud;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> points_;  // n * dim, row-major
  std::vector<double> matrix_;  // n * n
};

// Either an index into the source data set or a raw ambient vector
// (the latter only for point-cloud sources).
struct QueryPoint {
  static QueryPoint index(std::size_t i) {
    QueryPoint q;
    q.is_index = true;
    q.idx = i;
    return q;
  }
  static QueryPoint raw(std::vector<double> v) {
    QueryPoint q;
    q.is_index = false;
    q.vec = std::move(v);
    return q;
  }
  bool is_index = true;
  std::size_t idx = 0;
  std::vector<double> vec;
};

inline double distance(const DistanceSource& src, const QueryPoint& a,
                       const QueryPoint& b) {
  if (a.is_index && b.is_index) return src(a.idx, b.idx);
  if (a.is_index) return src.to_vector(a.idx, b.vec);
  if (b.is_index) return src.to_vector(b.idx, a.vec);
  if (src.kind() != SourceKind::PointCloud)
    throw unsupported_query_error(
        "raw-vector query requires a point-cloud source");
  if (a.vec.size() != b.vec.size())
    throw argument_error("raw vectors of mismatched dimension");
  double s = 0.0;
  for (std::size_t k = 0; k < a.vec.size(); ++k) {
    const double d = a.vec[k] - b.vec[k];
    s += d * d;
  }
  return std::sqrt(s);
}

namespace detail {

inline std::vector<std::vector<double>> parse_csv(const std::string& path,
                                                  char delimiter,
                                                  bool skip_header) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const std::size_t next = line.find(delimiter, pos);
      const std::string field = line.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos);
      std::size_t consumed = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &consumed);
      } catch (const std::exception&) {
        throw format_error(path + ": non-numeric field at line " +
                           std::to_string(lineno));
      }
      // trailing whitespace is fine, anything else is not numeric
      for (std::size_t k = consumed; k < field.size(); ++k)
        if (!std::isspace(static_cast<unsigned char>(field[k])))
          throw format_error(path + ": non-numeric field at line " +
                             std::to_string(lineno));
      row.push_back(v);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw format_error(path + ": ragged row at line " +
                         std::to_string(lineno) + " (got " +
                         std::to_string(row.size()) + " fields, expected " +
                         std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw format_error(path + ": empty file");
  return rows;
}

}  // namespace detail

inline DistanceSource load_point_cloud(const std::string& path,
                                       char delimiter = ',',
                                       bool skip_header = false) {
  auto rows = detail::parse_csv(path, delimiter, skip_header);
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return DistanceSource::from_points(std::move(flat), dim);
}

inline DistanceSource load_distance_matrix(const std::string& path,
                                           char delimiter = ',',
                                           bool skip_header = false) {
  auto rows = detail::parse_csv(path, delimiter, skip_header);
  const std::size_t n = rows.size();
  if (rows.front().size() != n)
    throw validation_error(path + ": matrix is " + std::to_string(n) + "x" +
                           std::to_string(rows.front().size()) +
                           ", expected square");
  std::vector<double> m;
  m.reserve(n * n);
  for (const auto& r : rows) m.insert(m.end(), r.begin(), r.end());
  return DistanceSource::from_matrix(std::move(m), n);
}

}  // namespace circlet
