#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "circlet/cohomology.hpp"
#include "circlet/coords.hpp"
#include "circlet/errors.hpp"
#include "circlet/filtration.hpp"
#include "circlet/integer_lift.hpp"
#include "circlet/metric.hpp"
#include "circlet/rng.hpp"

namespace circlet {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// One row per query: point_id, then one angle column per class; not-covered
// markers render as empty fields. --turns rescales radians to [0, 1).
inline void write_coords_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, AngleAssignment>>& columns,
    bool turns = false) {
  if (columns.empty()) throw argument_error("write_coords_csv: no columns");
  std::ofstream out(path);
  if (!out) throw format_error("cannot write file: " + path);

  out << "point_id";
  for (const auto& [name, a] : columns) out << "," << name;
  out << "\n";
  const std::size_t n = columns.front().second.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << i;
    for (const auto& [name, a] : columns) {
      out << ",";
      if (a.covered[i]) {
        double v = a.angles[i];
        if (turns) {
          v /= 2.0 * SplitMix64::pi();  // (-1/2, 1/2]
          if (v < 0.0) v += 1.0;
        }
        out << format_double(v);
      }
    }
    out << "\n";
  }
}

inline nlohmann::ordered_json diagram_to_json(
    const std::vector<PersistencePair>& pairs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : pairs) {
    nlohmann::ordered_json item;
    item["dim"] = p.dim;
    item["birth"] = p.birth;
    if (p.finite()) {
      item["death"] = p.death;
      item["persistence"] = p.persistence();
    } else {
      item["death"] = nullptr;
      item["persistence"] = nullptr;
    }
    arr.push_back(std::move(item));
  }
  return arr;
}

inline void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

/// Debug dump: CSV rows `dim,i,j,k,diameter`.
inline void write_filtration_csv(const std::string& path,
                                 const RipsFiltration& filt) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot write file: " + path);
  out << "dim,i,j,k,diameter\n";
  for (int v = 0; v < filt.n_vertices; ++v) out << "0," << v << ",,,0\n";
  for (const auto& e : filt.edges)
    out << "1," << e.i << "," << e.j << ",," << format_double(e.diameter) << "\n";
  for (const auto& t : filt.triangles)
    out << "2," << t.i << "," << t.j << "," << t.k << ","
        << format_double(t.diameter) << "\n";
}

/// Debug dump: CSV rows `i,j,value` of the lifted integer cocycle.
inline void write_cocycle_csv(const std::string& path,
                              const IntegerCochain& eta) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot write file: " + path);
  out << "i,j,value\n";
  for (const auto& ev : eta.values)
    out << ev.i << "," << ev.j << "," << ev.value << "\n";
}

namespace detail {

// Cyclic palette: angle -> hue, full saturation; mirrors the paper's
// dark-blue (-pi) through dark-red (pi) convention closely enough.
inline std::string angle_color(double angle) {
  const double h = (angle + SplitMix64::pi()) / (2.0 * SplitMix64::pi());  // [0,1)
  const double r = std::abs(h * 6.0 - 3.0) - 1.0;
  const double g = 2.0 - std::abs(h * 6.0 - 2.0);
  const double b = 2.0 - std::abs(h * 6.0 - 4.0);
  const auto chan = [](double x) {
    const int v = static_cast<int>(255.0 * std::clamp(x, 0.0, 1.0));
    char buf[3];
    static const char* hex = "0123456789abcdef";
    buf[0] = hex[v >> 4];
    buf[1] = hex[v & 15];
    buf[2] = 0;
    return std::string(buf);
  };
  return "#" + chan(r) + chan(g) + chan(b);
}

}  // namespace detail

// Scatter of the first two input coordinates, points colored by angle,
// landmarks ringed, markers gray. Presentation only; nothing reads this back.
inline void write_svg_scatter(const std::string& path,
                              const DistanceSource& src,
                              const AngleAssignment& assignment,
                              const std::vector<std::size_t>& landmarks) {
  if (src.kind() != SourceKind::PointCloud || src.dim() < 2)
    throw argument_error("svg scatter requires a point cloud with >= 2 coordinates");
  std::ofstream out(path);
  if (!out) throw format_error("cannot write file: " + path);

  const std::size_t n = src.size();
  double xmin = src.coord(0, 0), xmax = xmin, ymin = src.coord(0, 1), ymax = ymin;
  for (std::size_t i = 0; i < n; ++i) {
    xmin = std::min(xmin, src.coord(i, 0));
    xmax = std::max(xmax, src.coord(i, 0));
    ymin = std::min(ymin, src.coord(i, 1));
    ymax = std::max(ymax, src.coord(i, 1));
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double size = 800.0, margin = 40.0;
  const auto px = [&](double x) {
    return margin + (x - xmin) / span * (size - 2 * margin);
  };
  const auto py = [&](double y) {
    return size - margin - (y - ymin) / span * (size - 2 * margin);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n<rect width=\"800\" height=\"800\" "
         "fill=\"white\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string color =
        assignment.covered[i] ? detail::angle_color(assignment.angles[i])
                              : std::string("#bbbbbb");
    out << "<circle cx=\"" << format_double(px(src.coord(i, 0))) << "\" cy=\""
        << format_double(py(src.coord(i, 1))) << "\" r=\"3\" fill=\"" << color
        << "\"/>\n";
  }
  for (std::size_t l : landmarks)
    out << "<circle cx=\"" << format_double(px(src.coord(l, 0))) << "\" cy=\""
        << format_double(py(src.coord(l, 1)))
        << "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "</svg>\n";
}

/// Point-cloud CSV, one row per point (used by `synth --out`).
inline void write_point_cloud_csv(const std::string& path,
                                  const DistanceSource& src, char delimiter) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot write file: " + path);
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t k = 0; k < src.dim(); ++k) {
      if (k) out << delimiter;
      out << format_double(src.coord(i, k));
    }
    out << "\n";
  }
}

/// Distance-matrix CSV (used by `synth --shape klein --out`).
inline void write_matrix_csv(const std::string& path, const DistanceSource& src,
                             char delimiter) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot write file: " + path);
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < src.size(); ++j) {
      if (j) out << delimiter;
      out << format_double(src(i, j));
    }
    out << "\n";
  }
}

}  // namespace circlet
