#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "circlet/cohomology.hpp"
#include "circlet/errors.hpp"
#include "circlet/filtration.hpp"

namespace circlet {

// Integer edge cochain on R_scale, sparse over oriented edges (i < j); the
// value on (j, i) is by convention the negation of the value on (i, j).
struct IntegerCochain {
  std::vector<EdgeValue> values;  // sorted by (i, j)
  double scale = 0.0;
};

/// Centered residue of a single Z/q value: v if v <= (q-1)/2, else v - q.
inline int centered_residue(int v, int q) {
  return v <= (q - 1) / 2 ? v : v - q;
}

// Lift a Z/q cocycle to an integer cocycle on filt_2alpha by taking the
// centered residue on every edge, then verify delta = 0 over the integers on
// every triangle. Verification is mandatory: the heuristic can fail for an
// unlucky prime, and a silently bad lift would corrupt every downstream
// angle. All arithmetic is exact.
inline IntegerCochain lift_cocycle(const EdgeCochainQ& eta_q,
                                   const RipsFiltration& filt_2alpha, int q) {
  IntegerCochain eta;
  eta.scale = filt_2alpha.threshold;
  eta.values.reserve(eta_q.size());
  for (const auto& ev : eta_q) {
    const int r = ((ev.value % q) + q) % q;
    if (r != 0) eta.values.push_back({ev.i, ev.j, centered_residue(r, q)});
  }

  const int n = filt_2alpha.n_vertices;
  std::unordered_map<std::uint64_t, std::int64_t> vals;
  vals.reserve(eta.values.size() * 2);
  for (const auto& ev : eta.values)
    vals[static_cast<std::uint64_t>(ev.i) * n + ev.j] = ev.value;
  const auto at = [&](int a, int b) -> std::int64_t {
    const auto it = vals.find(static_cast<std::uint64_t>(a) * n + b);
    return it == vals.end() ? 0 : it->second;
  };

  for (const auto& t : filt_2alpha.triangles) {
    const std::int64_t s = at(t.j, t.k) - at(t.i, t.k) + at(t.i, t.j);
    if (s != 0)
      throw lift_failure_error(
          "integer lift failed: delta(eta) = " + std::to_string(s) +
          " on triangle (" + std::to_string(t.i) + "," + std::to_string(t.j) +
          "," + std::to_string(t.k) +
          "); try a different prime (--prime). Repairing the lift by solving "
          "a Diophantine linear system is not implemented.");
  }
  return eta;
}

}  // namespace circlet
