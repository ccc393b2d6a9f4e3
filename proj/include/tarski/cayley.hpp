#pragma once

// Finite balls of the right Cayley graph Cay(G, S u S^-1).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tarski/error.hpp"
#include "tarski/group.hpp"
#include "tarski/union_find.hpp"

namespace tarski {

using ElementSet = std::set<Element>;

inline constexpr std::size_t kDefaultVertexBudget = 5'000'000;

/// A symmetrized generator: `symbol` or `symbol^-1` together with its value.
struct Label {
  std::string symbol;
  bool inverse = false;
  Element element;

  std::string text() const { return inverse ? symbol + "^-1" : symbol; }
};

/// Named generating elements s_1..s_k. Symbols are distinct; the elements
/// need not be.
class GeneratingSet {
 public:
  GeneratingSet() = default;

  explicit GeneratingSet(std::vector<std::pair<std::string, Element>> gens)
      : gens_(std::move(gens)) {
    std::set<std::string> seen;
    for (const auto& [sym, _] : gens_) {
      if (!seen.insert(sym).second)
        throw PreconditionError("duplicate generator symbol '" + sym + "'");
    }
  }

  /// The spec's own generators under their configured names.
  static GeneratingSet standard(const GroupSpec& spec) {
    std::vector<std::pair<std::string, Element>> g;
    for (std::size_t i = 0; i < spec.generator_count(); ++i)
      g.emplace_back(spec.names()[i], generator(spec, i));
    return GeneratingSet(std::move(g));
  }

  const std::vector<std::pair<std::string, Element>>& generators() const noexcept {
    return gens_;
  }
  std::size_t size() const noexcept { return gens_.size(); }

  const Element& element(const std::string& symbol) const {
    for (const auto& [sym, e] : gens_)
      if (sym == symbol) return e;
    throw PreconditionError("unknown generator symbol '" + symbol + "'");
  }

  /// S u S^-1 in the order s1, s1^-1, s2, s2^-1, ...; later duplicates of an
  /// already listed element are dropped.
  std::vector<Label> symmetrized(const GroupSpec& spec) const {
    std::vector<Label> out;
    std::set<Element> seen;
    for (const auto& [sym, e] : gens_) {
      for (bool inv : {false, true}) {
        Element v = inv ? invert(spec, e) : e;
        if (seen.insert(v).second) out.push_back({sym, inv, std::move(v)});
      }
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, Element>> gens_;
};

struct PatchEdge {
  std::size_t source = 0;
  std::size_t label = 0;  // index into CayleyPatch::labels
  std::size_t target = 0;
  friend bool operator==(const PatchEdge&, const PatchEdge&) = default;
};

/// Ball of the right Cayley graph: vertices in BFS order (identity first,
/// each sphere sorted by normal form) and every labeled edge whose endpoints
/// both lie in the ball.
struct CayleyPatch {
  GroupSpec spec = GroupSpec::free(1);
  std::size_t radius = 0;
  std::vector<Label> labels;
  std::vector<Element> vertices;
  std::vector<std::size_t> distance;
  std::vector<PatchEdge> edges;
  std::unordered_map<Element, std::size_t, ElementHash> index;

  std::size_t size() const noexcept { return vertices.size(); }

  std::optional<std::size_t> find(const Element& e) const {
    auto it = index.find(e);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t label_index(const std::string& text) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i].text() == text) return i;
    throw PreconditionError("no label '" + text + "' in patch");
  }

  /// Vertices at distance <= radius - 1; all their neighbours are inside.
  std::vector<std::size_t> interior() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(); ++v)
      if (distance[v] + 1 <= radius) out.push_back(v);
    return out;
  }
};

inline CayleyPatch enumerate_ball(const GroupSpec& spec, const GeneratingSet& gens,
                                  std::size_t radius,
                                  std::size_t vertex_budget = kDefaultVertexBudget) {
  CayleyPatch p;
  p.spec = spec;
  p.radius = radius;
  p.labels = gens.symmetrized(spec);

  auto add_vertex = [&](Element e, std::size_t d) {
    if (p.vertices.size() >= vertex_budget)
      throw BudgetError("ball exceeds vertex budget of " + std::to_string(vertex_budget));
    p.index.emplace(e, p.vertices.size());
    p.vertices.push_back(std::move(e));
    p.distance.push_back(d);
  };

  add_vertex(identity(spec), 0);
  std::size_t layer_begin = 0;
  for (std::size_t d = 1; d <= radius; ++d) {
    const std::size_t layer_end = p.vertices.size();
    std::set<Element> next;
    for (std::size_t v = layer_begin; v < layer_end; ++v) {
      for (const Label& l : p.labels) {
        Element w = multiply(spec, p.vertices[v], l.element);
        if (!p.index.contains(w)) next.insert(std::move(w));
      }
    }
    if (next.empty()) break;
    for (auto& e : next) add_vertex(e, d);
    layer_begin = layer_end;
  }

  for (std::size_t v = 0; v < p.vertices.size(); ++v) {
    for (std::size_t li = 0; li < p.labels.size(); ++li) {
      if (auto t = p.find(multiply(spec, p.vertices[v], p.labels[li].element)))
        p.edges.push_back({v, li, *t});
    }
  }
  return p;
}

/// Number of vertices at each exact distance 0..radius.
inline std::vector<std::size_t> sphere_sizes(const CayleyPatch& patch) {
  std::vector<std::size_t> out(patch.radius + 1, 0);
  for (auto d : patch.distance) ++out[d];
  return out;
}

inline std::vector<std::size_t> sphere_sizes(const GroupSpec& spec,
                                             const GeneratingSet& gens,
                                             std::size_t radius,
                                             std::size_t vertex_budget = kDefaultVertexBudget) {
  return sphere_sizes(enumerate_ball(spec, gens, radius, vertex_budget));
}

/// Exact right product set {a s : a in A, s in S}.
template <typename Range>
ElementSet product_set(const GroupSpec& spec, const Range& A,
                       std::span<const Element> S) {
  ElementSet out;
  for (const Element& a : A)
    for (const Element& s : S) out.insert(multiply(spec, a, s));
  return out;
}

// ---------------------------------------------------------------------------
// Unoriented simple view

struct SimpleEdge {
  std::size_t u = 0, v = 0;         // u < v
  std::vector<std::string> labels;  // label texts of every directed edge u->v
};

/// Undirected graph without loops or multiple edges. Built from a patch or
/// directly (test graphs).
struct SimpleGraph {
  std::size_t vertex_count = 0;
  std::vector<SimpleEdge> edges;

  /// Index of edge {u, v}, if present.
  std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{u, v},
                               [](const SimpleEdge& e, const std::pair<std::size_t, std::size_t>& k) {
                                 return std::pair{e.u, e.v} < k;
                               });
    if (it == edges.end() || it->u != u || it->v != v) return std::nullopt;
    return static_cast<std::size_t>(it - edges.begin());
  }

  /// Builds from (u, v, label) triples; collapses parallel edges, drops loops.
  static SimpleGraph from_edges(
      std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, std::string>>& es) {
    std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>> acc;
    for (const auto& [a, b, l] : es) {
      if (a >= n || b >= n) throw PreconditionError("edge endpoint out of range");
      if (a == b) continue;
      acc[{std::min(a, b), std::max(a, b)}].insert(l);
    }
    SimpleGraph g;
    g.vertex_count = n;
    for (auto& [k, ls] : acc)
      g.edges.push_back({k.first, k.second, std::vector<std::string>(ls.begin(), ls.end())});
    return g;
  }
};

inline SimpleGraph simple_graph(const CayleyPatch& patch) {
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> es;
  es.reserve(patch.edges.size());
  for (const auto& e : patch.edges)
    es.emplace_back(e.source, e.target, patch.labels[e.label].text());
  return SimpleGraph::from_edges(patch.size(), es);
}

inline bool is_forest(const SimpleGraph& g) {
  UnionFind uf(g.vertex_count);
  for (const auto& e : g.edges)
    if (!uf.unite(e.u, e.v)) return false;
  return true;
}

inline bool is_connected(const SimpleGraph& g) {
  if (g.vertex_count == 0) return true;
  UnionFind uf(g.vertex_count);
  for (const auto& e : g.edges) uf.unite(e.u, e.v);
  return uf.components() == 1;
}

}  // namespace tarski
