#pragma once

// Spanning forests of finite Cayley patches and a mechanical replay of the
// counting argument that turns a forest containing every a-edge into the
// doubling inequality for S1 = {1, a}, S2 = {1, b, c}.
//
// An invariant random forest lives on the infinite Cayley graph; here we
// only sample uniform spanning trees of a finite patch. Vertices on the
// boundary sphere have depressed degrees, so degree statistics are restricted
// to the interior.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tarski/cayley.hpp"
#include "tarski/doubling.hpp"
#include "tarski/error.hpp"
#include "tarski/group.hpp"
#include "tarski/union_find.hpp"

namespace tarski {

/// Pseudorandom engine used by every sampler.
using Rng = std::mt19937_64;

/// Seed for sample `index` of a run seeded with `seed` (splitmix64 finalizer).
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct ForestSample {
  /// Edges {u, v} with u < v, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> degree;
  std::uint64_t seed = 0;

  bool contains(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::pair{u, v});
  }
};

namespace detail {

struct MultiEdge {
  std::size_t u, v;
};

// Wilson's algorithm: loop-erased random walks towards a growing tree rooted
// at vertex 0. Returns indices into `edges` of a uniform spanning tree of the
// (connected, loopless) multigraph.
inline std::vector<std::size_t> wilson(std::size_t n, const std::vector<MultiEdge>& edges,
                                       Rng& rng) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].u].emplace_back(edges[i].v, i);
    adj[edges[i].v].emplace_back(edges[i].u, i);
  }
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<bool> in_tree(n, false);
  std::vector<std::size_t> next_edge(n, none);
  std::vector<std::size_t> out;
  if (n == 0) return out;
  in_tree[0] = true;
  for (std::size_t start = 1; start < n; ++start) {
    std::size_t u = start;
    while (!in_tree[u]) {
      const auto& nbrs = adj[u];
      if (nbrs.empty()) throw PreconditionError("graph is not connected");
      std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
      const auto& [w, e] = nbrs[pick(rng)];
      next_edge[u] = e;  // overwriting erases loops
      u = w;
    }
    for (u = start; !in_tree[u];) {
      in_tree[u] = true;
      const std::size_t e = next_edge[u];
      out.push_back(e);
      u = edges[e].u == u ? edges[e].v : edges[e].u;
    }
  }
  return out;
}

inline ForestSample make_sample(const SimpleGraph& g, const std::vector<std::size_t>& edge_ids,
                                std::uint64_t seed) {
  ForestSample s;
  s.seed = seed;
  s.degree.assign(g.vertex_count, 0);
  for (std::size_t id : edge_ids) {
    const auto& e = g.edges[id];
    s.edges.emplace_back(e.u, e.v);
    ++s.degree[e.u];
    ++s.degree[e.v];
  }
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

inline bool has_generator_label(const SimpleEdge& e, const std::string& symbol) {
  for (const auto& l : e.labels)
    if (l == symbol || l == symbol + "^-1") return true;
  return false;
}

}  // namespace detail

/// Uniform spanning tree of a connected graph (Wilson's algorithm).
inline ForestSample sample_uniform_spanning_tree(const SimpleGraph& g, std::uint64_t seed) {
  if (!is_connected(g)) throw PreconditionError("graph is not connected");
  std::vector<detail::MultiEdge> es;
  es.reserve(g.edges.size());
  for (const auto& e : g.edges) es.push_back({e.u, e.v});
  Rng rng(seed);
  return detail::make_sample(g, detail::wilson(g.vertex_count, es, rng), seed);
}

inline ForestSample sample_uniform_spanning_tree(const CayleyPatch& patch, std::uint64_t seed) {
  return sample_uniform_spanning_tree(simple_graph(patch), seed);
}

/// Uniform spanning tree among those containing every edge labeled a or
/// a^-1: contract the a-edges, sample the contracted multigraph, lift back.
inline ForestSample sample_forest_containing_a_edges(const SimpleGraph& g,
                                                     const std::string& a_symbol,
                                                     std::uint64_t seed) {
  UnionFind uf(g.vertex_count);
  std::vector<std::size_t> forced;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!detail::has_generator_label(e, a_symbol)) continue;
    if (!uf.unite(e.u, e.v))
      throw PreconditionError("edges labeled " + a_symbol + " contain a cycle");
    forced.push_back(i);
  }
  if (!is_connected(g)) throw PreconditionError("graph is not connected");

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp_id(g.vertex_count, none);
  std::size_t comps = 0;
  for (std::size_t v = 0; v < g.vertex_count; ++v) {
    const std::size_t r = uf.find(v);
    if (comp_id[r] == none) comp_id[r] = comps++;
  }
  std::vector<detail::MultiEdge> contracted;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const std::size_t cu = comp_id[uf.find(g.edges[i].u)];
    const std::size_t cv = comp_id[uf.find(g.edges[i].v)];
    if (cu == cv) continue;
    contracted.push_back({cu, cv});
    origin.push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> ids = forced;
  for (std::size_t t : detail::wilson(comps, contracted, rng)) ids.push_back(origin[t]);
  return detail::make_sample(g, ids, seed);
}

inline ForestSample sample_forest_containing_a_edges(const CayleyPatch& patch,
                                                     const std::string& a_symbol,
                                                     std::uint64_t seed) {
  return sample_forest_containing_a_edges(simple_graph(patch), a_symbol, seed);
}

// ---------------------------------------------------------------------------
// Counting-argument audit

struct DirectedEdge {
  Element from;
  std::string label;
  Element to;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

struct LedgerEntry {
  std::string name;
  std::int64_t lhs = 0;
  std::string relation;  // ">=", ">", "=="
  std::int64_t rhs = 0;
  bool pass = false;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

struct ForestAudit {
  std::vector<DirectedEdge> e, e1, e2, e3;
  std::vector<Element> lambda_vertices;
  std::vector<std::pair<Element, Element>> lambda_edges;
  std::vector<LedgerEntry> ledger;

  bool all_pass() const {
    return std::all_of(ledger.begin(), ledger.end(), [](const auto& l) { return l.pass; });
  }
  const LedgerEntry& entry(const std::string& name) const {
    for (const auto& l : ledger)
      if (l.name == name) return l;
    throw PreconditionError("no ledger entry '" + name + "'");
  }

  friend bool operator==(const ForestAudit&, const ForestAudit&) = default;
};

namespace detail {

inline LedgerEntry ledger_entry(std::string name, std::int64_t lhs, std::string rel,
                                std::int64_t rhs) {
  bool ok = rel == ">=" ? lhs >= rhs : rel == ">" ? lhs > rhs : lhs == rhs;
  return {std::move(name), lhs, std::move(rel), rhs, ok};
}

inline std::size_t opposite_pairs(const std::vector<DirectedEdge>& es) {
  std::set<std::pair<Element, Element>> seen;
  for (const auto& e : es) seen.emplace(e.from, e.to);
  std::size_t n = 0;
  for (const auto& e : es)
    if (seen.contains({e.to, e.from})) ++n;
  return n / 2;
}

}  // namespace detail

/// Builds E, E1, E2, E3 and the graph Lambda for the forest and the pair
/// (A1, A2), and records every step of the inequality chain. `gens` is the
/// generating triple (a, b, c); `ts` must be S1 = {1, a}, S2 = {1, b, c}.
inline ForestAudit audit_counting_argument(const CayleyPatch& patch, const ForestSample& forest,
                                           const ElementSet& a1, const ElementSet& a2,
                                           const TranslatingSets& ts,
                                           const GeneratingSet& gens) {
  const GroupSpec& spec = patch.spec;
  if (gens.size() != 3)
    throw PreconditionError("the counting argument needs a generating triple (a, b, c)");
  const Element& a = gens.generators()[0].second;
  const Element& b = gens.generators()[1].second;
  const Element& c = gens.generators()[2].second;
  const Element one = identity(spec);
  auto same = [](std::vector<Element> x, std::vector<Element> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  };
  if (!same(ts.s1, {one, a}) || !same(ts.s2, {one, b, c}))
    throw PreconditionError("the counting argument needs S1 = {1, a} and S2 = {1, b, c}");
  if (a1.empty() && a2.empty()) throw PreconditionError("A1 and A2 are both empty");
  if (forest.degree.size() != patch.size())
    throw PreconditionError("forest does not belong to this patch");

  auto locate = [&](const Element& x) {
    auto i = patch.find(x);
    if (!i) throw PreconditionError("product " + format_element(spec, x) + " escapes the patch");
    return *i;
  };

  const std::vector<Label> labels = gens.symmetrized(spec);
  std::set<Element> s_pos{a, b, c};
  std::set<Element> s_neg{invert(spec, a), invert(spec, b), invert(spec, c)};

  ForestAudit au;
  std::int64_t degree_sum = 0;
  for (const Element& g : a2) {
    const std::size_t gi = locate(g);
    degree_sum += static_cast<std::int64_t>(forest.degree[gi]);
    for (const Label& l : labels) {
      Element t = multiply(spec, g, l.element);
      if (!forest.contains(gi, locate(t))) continue;
      DirectedEdge de{g, l.text(), t};
      au.e.push_back(de);
      if (s_pos.contains(l.element) && !s_neg.contains(l.element)) {
        au.e1.push_back(de);
        if (l.element == b || l.element == c) au.e2.push_back(de);
      }
    }
  }
  const std::string a_text = gens.generators()[0].first;
  for (const Element& g : a1) {
    Element t = multiply(spec, g, a);
    locate(t);
    au.e3.push_back({g, a_text, std::move(t)});
  }

  ElementSet lambda_v = product_set(spec, a1, std::span<const Element>(ts.s1));
  lambda_v.merge(product_set(spec, a2, std::span<const Element>(ts.s2)));
  for (const Element& x : lambda_v) locate(x);
  au.lambda_vertices.assign(lambda_v.begin(), lambda_v.end());

  std::vector<DirectedEdge> e23 = au.e2;
  e23.insert(e23.end(), au.e3.begin(), au.e3.end());
  std::set<std::pair<Element, Element>> und;
  std::size_t outside = 0;
  for (const auto& de : e23) {
    if (!lambda_v.contains(de.from) || !lambda_v.contains(de.to)) ++outside;
    und.insert(de.from < de.to ? std::pair{de.from, de.to} : std::pair{de.to, de.from});
  }
  au.lambda_edges.assign(und.begin(), und.end());

  std::size_t e2_e3_common = 0;
  {
    std::set<DirectedEdge> s2(au.e2.begin(), au.e2.end());
    for (const auto& de : au.e3) e2_e3_common += s2.contains(de) ? 1 : 0;
  }

  std::int64_t cycle_rank = 0;
  {
    std::map<Element, std::size_t> vid;
    for (const auto& x : au.lambda_vertices) vid.emplace(x, vid.size());
    for (const auto& [u, v] : au.lambda_edges) {
      vid.emplace(u, vid.size());
      vid.emplace(v, vid.size());
    }
    UnionFind uf(vid.size());
    for (const auto& [u, v] : au.lambda_edges)
      if (!uf.unite(vid[u], vid[v])) ++cycle_rank;
  }

  using I = std::int64_t;
  const I n1 = static_cast<I>(a1.size()), n2 = static_cast<I>(a2.size());
  const I E = static_cast<I>(au.e.size()), E1 = static_cast<I>(au.e1.size());
  const I E2 = static_cast<I>(au.e2.size()), E3 = static_cast<I>(au.e3.size());
  const I V = static_cast<I>(au.lambda_vertices.size());
  const I EL = static_cast<I>(au.lambda_edges.size());
  const I S = 3;

  using detail::ledger_entry;
  auto& L = au.ledger;
  L.push_back(ledger_entry("sum deg_F(A2) >= 5|A2|", degree_sum, ">=", 5 * n2));
  L.push_back(ledger_entry("|E| = sum deg_F(A2)", E, "==", degree_sum));
  L.push_back(ledger_entry("|E| >= 5|A2|", E, ">=", 5 * n2));
  L.push_back(ledger_entry("|E1| >= |E| - |S||A2|", E1, ">=", E - S * n2));
  L.push_back(ledger_entry("|E1| >= 2|A2|", E1, ">=", 2 * n2));
  L.push_back(ledger_entry("E1 has no opposite pair", static_cast<I>(detail::opposite_pairs(au.e1)), "==", 0));
  L.push_back(ledger_entry("|E2| >= |E1| - |A2|", E2, ">=", E1 - n2));
  L.push_back(ledger_entry("|E2| >= |A2|", E2, ">=", n2));
  L.push_back(ledger_entry("|E2 n E3| = 0", static_cast<I>(e2_e3_common), "==", 0));
  L.push_back(ledger_entry("E2 u E3 has no opposite pair", static_cast<I>(detail::opposite_pairs(e23)), "==", 0));
  L.push_back(ledger_entry("endpoints of E2 u E3 outside A1S1 u A2S2", static_cast<I>(outside), "==", 0));
  L.push_back(ledger_entry("Lambda cycle rank", cycle_rank, "==", 0));
  L.push_back(ledger_entry("|E(Lambda)| = |E2| + |E3|", EL, "==", E2 + E3));
  L.push_back(ledger_entry("|V(Lambda)| > |E(Lambda)|", V, ">", EL));
  L.push_back(ledger_entry("|E2| + |E3| >= |A1| + |A2|", E2 + E3, ">=", n1 + n2));
  L.push_back(ledger_entry("|A1S1 u A2S2| >= |A1| + |A2|", V, ">=", n1 + n2));
  return au;
}

struct DegreeSummary {
  std::size_t samples = 0;
  double mean = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  std::size_t threshold = 0;  // 5 |A2|
  bool meets_threshold = false;
};

/// Degree sum over A2 in forests containing every a-edge, across
/// `num_samples` samples seeded with sample_seed(seed, i).
inline DegreeSummary degree_statistics(const CayleyPatch& patch, const std::string& a_symbol,
                                       const ElementSet& a2, std::size_t num_samples,
                                       std::uint64_t seed) {
  if (num_samples < 1) throw PreconditionError("need at least one sample");
  std::vector<std::size_t> idx;
  for (const Element& g : a2) {
    auto i = patch.find(g);
    if (!i || patch.distance[*i] + 1 > patch.radius)
      throw PreconditionError("A2 must lie in the patch interior");
    idx.push_back(*i);
  }
  const SimpleGraph g = simple_graph(patch);
  DegreeSummary s;
  s.samples = num_samples;
  s.threshold = 5 * a2.size();
  s.min = std::numeric_limits<std::size_t>::max();
  double total = 0;
  for (std::size_t k = 0; k < num_samples; ++k) {
    const ForestSample f = sample_forest_containing_a_edges(g, a_symbol, sample_seed(seed, k));
    std::size_t sum = 0;
    for (auto i : idx) sum += f.degree[i];
    total += static_cast<double>(sum);
    s.min = std::min(s.min, sum);
    s.max = std::max(s.max, sum);
  }
  s.mean = total / static_cast<double>(num_samples);
  s.meets_threshold = s.mean >= static_cast<double>(s.threshold);
  return s;
}

}  // namespace tarski
