#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "circlet/errors.hpp"
#include "circlet/filtration.hpp"

namespace circlet {

/// Value of a cochain on the oriented edge (i, j) with i < j.
struct EdgeValue {
  int i, j;
  int value;
};

/// Sparse edge cochain over Z/q, sorted by (i, j), values in [1, q).
using EdgeCochainQ = std::vector<EdgeValue>;

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  EdgeCochainQ representative;  // dim-1 finite pairs only

  bool finite() const { return death != std::numeric_limits<double>::infinity(); }
  double persistence() const { return death - birth; }
};

namespace detail {

inline bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Inverse of a mod q by extended Euclid (q prime, a in [1, q)).
inline int inv_mod(int a, int q) {
  int t = 0, new_t = 1, r = q, new_r = a % q;
  while (new_r != 0) {
    const int quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  return t < 0 ? t + q : t;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    // smaller root survives so the result is order-independent
    if (a < b)
      parent[b] = a;
    else
      parent[a] = b;
    return true;
  }
};

inline std::uint64_t tri_key(int i, int j, int k, int n) {
  return (static_cast<std::uint64_t>(i) * n + j) * n + k;
}

}  // namespace detail

// Persistent cohomology of the filtration over Z/q, dimensions 0 and 1.
//
// Dimension 0 is computed by union-find over edges in filtration order.
// Dimension 1 uses the anti-transposed coboundary reduction: edge columns are
// processed in decreasing filtration order, each column holding the triangle
// cofacets of its accumulated edge combination; the pivot is the cofacet
// earliest in filtration order. Edges that merged components are skipped
// (clearing). The reduction tracks the combination of edges forming each
// column, which at death time is the representative cocycle of the pair.
inline std::vector<PersistencePair> persistent_cohomology(
    const RipsFiltration& filt, int q) {
  if (q <= 2 || !detail::is_prime(q))
    throw argument_error("persistent_cohomology: q = " + std::to_string(q) +
                         " is not a prime > 2");

  const int n = filt.n_vertices;
  std::vector<PersistencePair> pairs;

  // --- dimension 0: union-find over edges in increasing order ---
  detail::UnionFind uf(n);
  std::vector<char> merges(filt.edges.size(), 0);
  for (std::size_t e = 0; e < filt.edges.size(); ++e) {
    if (uf.unite(filt.edges[e].i, filt.edges[e].j)) {
      merges[e] = 1;
      if (filt.edges[e].diameter > 0.0)
        pairs.push_back({0, 0.0, filt.edges[e].diameter, {}});
    }
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n; ++v)
    if (uf.find(v) == v) pairs.push_back({0, 0.0, inf, {}});

  // --- dimension 1: coboundary reduction with clearing ---
  const std::size_t n_edges = filt.edges.size();
  const std::size_t n_tris = filt.triangles.size();

  std::unordered_map<std::uint64_t, int> edge_id;  // (i,j) -> column index
  edge_id.reserve(n_edges * 2);
  for (std::size_t e = 0; e < n_edges; ++e)
    edge_id[static_cast<std::uint64_t>(filt.edges[e].i) * n + filt.edges[e].j] =
        static_cast<int>(e);

  // Per-edge cofacet lists: (triangle ordinal in filtration order, sign).
  // Triangle (a<b<c) boundary signs: +(b,c) -(a,c) +(a,b).
  std::vector<std::vector<std::pair<int, int>>> cofacets(n_edges);
  for (std::size_t t = 0; t < n_tris; ++t) {
    const auto& tr = filt.triangles[t];
    const int ab = edge_id.at(static_cast<std::uint64_t>(tr.i) * n + tr.j);
    const int ac = edge_id.at(static_cast<std::uint64_t>(tr.i) * n + tr.k);
    const int bc = edge_id.at(static_cast<std::uint64_t>(tr.j) * n + tr.k);
    cofacets[ab].push_back({static_cast<int>(t), 1});
    cofacets[ac].push_back({static_cast<int>(t), q - 1});
    cofacets[bc].push_back({static_cast<int>(t), 1});
  }

  using Entry = std::pair<int, int>;  // (triangle ordinal, coefficient)
  using MinHeap =
      std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>>;

  const auto pop_pivot = [&](MinHeap& heap) -> std::optional<Entry> {
    while (!heap.empty()) {
      const int ord = heap.top().first;
      int coeff = 0;
      while (!heap.empty() && heap.top().first == ord) {
        coeff = (coeff + heap.top().second) % q;
        heap.pop();
      }
      if (coeff != 0) return Entry{ord, coeff};
    }
    return std::nullopt;
  };

  std::unordered_map<int, int> pivot_owner;  // triangle ordinal -> column
  std::vector<std::vector<Entry>> stored_r(n_edges);  // reduced columns
  std::vector<std::vector<Entry>> stored_v(n_edges);  // (edge col, coeff)

  const auto combine_sorted = [&](std::vector<Entry>& v) {
    std::sort(v.begin(), v.end());
    std::size_t w = 0;
    for (std::size_t r = 0; r < v.size();) {
      int coeff = 0;
      const int key = v[r].first;
      while (r < v.size() && v[r].first == key) {
        coeff = (coeff + v[r].second) % q;
        ++r;
      }
      if (coeff != 0) v[w++] = {key, coeff};
    }
    v.resize(w);
  };

  for (std::size_t col = n_edges; col-- > 0;) {
    if (merges[col]) continue;  // cleared: pivot of the dim-0 reduction
    const double birth = filt.edges[col].diameter;

    MinHeap working;
    for (const auto& [ord, sign] : cofacets[col]) working.push({ord, sign});
    std::vector<Entry> v_col{{static_cast<int>(col), 1}};

    std::optional<Entry> pivot;
    while ((pivot = pop_pivot(working))) {
      const auto it = pivot_owner.find(pivot->first);
      if (it == pivot_owner.end()) break;
      const int other = it->second;
      // factor cancels the pivot: coeff + factor * other_pivot_coeff = 0
      const int other_pc = stored_r[other].front().second;
      const int factor =
          static_cast<int>((static_cast<std::int64_t>(q - pivot->second) *
                            detail::inv_mod(other_pc, q)) %
                           q);
      working.push(*pivot);
      for (const auto& [ord, c] : stored_r[other])
        working.push({ord, static_cast<int>(
                               (static_cast<std::int64_t>(c) * factor) % q)});
      for (const auto& [e, c] : stored_v[other])
        v_col.push_back({e, static_cast<int>(
                                (static_cast<std::int64_t>(c) * factor) % q)});
    }

    combine_sorted(v_col);
    if (!pivot) {
      pairs.push_back({1, birth, inf, {}});  // essential class
      continue;
    }

    // store reduced column with the pivot first
    std::vector<Entry> r_col{*pivot};
    while (!working.empty()) {
      r_col.push_back(working.top());
      working.pop();
    }
    std::vector<Entry> tail(r_col.begin() + 1, r_col.end());
    combine_sorted(tail);
    r_col.resize(1);
    r_col.insert(r_col.end(), tail.begin(), tail.end());
    stored_r[col] = std::move(r_col);
    stored_v[col] = v_col;
    pivot_owner[pivot->first] = static_cast<int>(col);

    const double death = filt.triangles[pivot->first].diameter;
    if (death > birth) {
      PersistencePair p{1, birth, death, {}};
      p.representative.reserve(v_col.size());
      for (const auto& [e, c] : v_col)
        p.representative.push_back({filt.edges[e].i, filt.edges[e].j, c});
      std::sort(p.representative.begin(), p.representative.end(),
                [](const EdgeValue& a, const EdgeValue& b) {
                  return std::tie(a.i, a.j) < std::tie(b.i, b.j);
                });
      pairs.push_back(std::move(p));
    }
  }

  return pairs;
}

/// delta(cochain) == 0 mod q over every triangle of the filtration, with the
/// cochain implicitly zero on unlisted edges.
inline bool is_cocycle_mod_q(const EdgeCochainQ& cochain,
                             const RipsFiltration& filt, int q) {
  std::unordered_map<std::uint64_t, int> vals;
  vals.reserve(cochain.size() * 2);
  const int n = filt.n_vertices;
  for (const auto& ev : cochain)
    vals[static_cast<std::uint64_t>(ev.i) * n + ev.j] = ev.value % q;
  const auto at = [&](int a, int b) {
    const auto it = vals.find(static_cast<std::uint64_t>(a) * n + b);
    return it == vals.end() ? 0 : it->second;
  };
  for (const auto& t : filt.triangles) {
    const int s = (at(t.j, t.k) - at(t.i, t.k) + at(t.i, t.j)) % q;
    if ((s % q + q) % q != 0) return false;
  }
  return true;
}

struct ScaleChoice {
  std::size_t pair_index = 0;  // index into the input pair list
  double t = 0.0;
  double alpha = 0.0;
  PersistencePair pair;
};

// Finite dim-1 pairs satisfying max{birth, r_L} < death/2, ordered by
// persistence (descending), then birth (ascending), then input order.
inline std::vector<std::size_t> qualifying_pairs(
    const std::vector<PersistencePair>& pairs, double r_L) {
  std::vector<std::size_t> q;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    if (p.dim == 1 && p.finite() && std::max(p.birth, r_L) < p.death / 2.0)
      q.push_back(k);
  }
  std::sort(q.begin(), q.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = pairs[a];
    const auto& pb = pairs[b];
    return std::tuple(-pa.persistence(), pa.birth, a) <
           std::tuple(-pb.persistence(), pb.birth, b);
  });
  return q;
}

// selector: nullopt = most persistent qualifying pair; otherwise an index
// into the qualifying list (ranked by persistence).
inline ScaleChoice choose_scale(const std::vector<PersistencePair>& pairs,
                                double r_L, double t,
                                std::optional<std::size_t> selector = {}) {
  if (!(t > 0.0 && t < 1.0))
    throw argument_error("choose_scale: t must lie strictly in (0,1)");

  const auto qual = qualifying_pairs(pairs, r_L);
  if (qual.empty()) {
    // diagnostic: report the best finite dim-1 candidate and the violated bound
    const PersistencePair* best = nullptr;
    for (const auto& p : pairs)
      if (p.dim == 1 && p.finite() &&
          (!best || p.persistence() > best->persistence()))
        best = &p;
    std::string msg = "no persistence pair satisfies max{a, r_L} < b/2";
    if (best)
      msg += ": best candidate (a, b) = (" + std::to_string(best->birth) + ", " +
             std::to_string(best->death) + ") with r_L = " + std::to_string(r_L) +
             " gives max{a, r_L} = " +
             std::to_string(std::max(best->birth, r_L)) +
             " >= b/2 = " + std::to_string(best->death / 2.0);
    else
      msg += " (no finite dim-1 pairs at all)";
    throw no_qualifying_class_error(msg);
  }

  std::size_t chosen;
  if (selector) {
    if (*selector >= qual.size())
      throw argument_error("choose_scale: class index " +
                           std::to_string(*selector) + " out of range (" +
                           std::to_string(qual.size()) + " qualifying pairs)");
    chosen = qual[*selector];
  } else {
    chosen = qual.front();
  }

  const auto& p = pairs[chosen];
  ScaleChoice sc;
  sc.pair_index = chosen;
  sc.t = t;
  sc.alpha = t * std::max(p.birth, r_L) + (1.0 - t) * (p.death / 2.0);
  sc.pair = p;
  return sc;
}

// Representative of the pair valid in R_s: the stored representative
// restricted to edges of diameter < s, delta-verified there. If verification
// fails the reduction is re-run on the truncated filtration.
inline EdgeCochainQ representative_at_scale(const PersistencePair& pair,
                                            const RipsFiltration& filt,
                                            double s, int q) {
  if (!(pair.birth < s && (!pair.finite() || s <= pair.death)))
    throw argument_error("representative_at_scale: s = " + std::to_string(s) +
                         " outside (birth, death] = (" +
                         std::to_string(pair.birth) + ", " +
                         std::to_string(pair.death) + "]");
  if (s > filt.threshold)
    throw argument_error("representative_at_scale: s exceeds filtration threshold");

  const RipsFiltration sub = restrict_filtration(filt, s);

  std::unordered_map<std::uint64_t, char> present;
  present.reserve(sub.edges.size() * 2);
  for (const auto& e : sub.edges)
    present[static_cast<std::uint64_t>(e.i) * filt.n_vertices + e.j] = 1;

  EdgeCochainQ restricted;
  for (const auto& ev : pair.representative)
    if (present.count(static_cast<std::uint64_t>(ev.i) * filt.n_vertices + ev.j))
      restricted.push_back(ev);

  if (is_cocycle_mod_q(restricted, sub, q)) return restricted;

  // Correctness net: recompute on the truncated filtration and take the pair
  // with matching birth that survives past s.
  const auto repairs = persistent_cohomology(sub, q);
  const PersistencePair* match = nullptr;
  for (const auto& p : repairs)
    if (p.dim == 1 && p.finite() && std::abs(p.birth - pair.birth) <= 1e-12 &&
        (!match || p.death > match->death))
      match = &p;
  if (!match)
    throw error("representative_at_scale: no matching pair in truncated filtration");
  return match->representative;
}

}  // namespace circlet
