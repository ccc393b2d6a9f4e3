#pragma once

// The doubling condition |A1 S1 u A2 S2| >= |A1| + |A2| restricted to subsets
// of a finite domain D, decided through one bipartite matching:
//
//   left  = D x {1, 2}
//   right = D S1 u D S2, computed exactly in the group
//   edges = (g, i) -- g s  for s in S_i
//
// A left-saturating matching is a pair of injections phi_i(g) in g S_i with
// disjoint images (a certificate). Otherwise Hall's theorem yields a deficient
// left set, i.e. subsets A1, A2 of D violating the inequality.
//
// All products are right products A S. Definition-style left translates
// g P correspond to these through x -> x^-1.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tarski/cayley.hpp"
#include "tarski/error.hpp"
#include "tarski/group.hpp"
#include "tarski/matching.hpp"

namespace tarski {

struct TranslatingSets {
  std::vector<Element> s1;
  std::vector<Element> s2;

  TranslatingSets() = default;
  TranslatingSets(std::vector<Element> first, std::vector<Element> second)
      : s1(std::move(first)), s2(std::move(second)) {
    auto check = [](const std::vector<Element>& s, const char* name) {
      if (s.empty()) throw PreconditionError(std::string(name) + " is empty");
      std::vector<Element> sorted = s;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw PreconditionError(std::string(name) + " has repeated elements");
    };
    check(s1, "S1");
    check(s2, "S2");
  }

  std::size_t total() const noexcept { return s1.size() + s2.size(); }
  const std::vector<Element>& family(int i) const { return i == 1 ? s1 : s2; }
};

/// Injections phi1, phi2 as (g, phi(g)) pairs in domain order.
struct Certificate {
  std::vector<std::pair<Element, Element>> phi1;
  std::vector<std::pair<Element, Element>> phi2;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct Violator {
  ElementSet a1;
  ElementSet a2;
  std::size_t union_size = 0;

  friend bool operator==(const Violator&, const Violator&) = default;
};

using DoublingVerdict = std::variant<Certificate, Violator>;

inline bool is_certificate(const DoublingVerdict& v) {
  return std::holds_alternative<Certificate>(v);
}

inline std::size_t doubling_union_size(const GroupSpec& spec, const TranslatingSets& ts,
                                       const ElementSet& a1, const ElementSet& a2) {
  ElementSet u = product_set(spec, a1, std::span<const Element>(ts.s1));
  u.merge(product_set(spec, a2, std::span<const Element>(ts.s2)));
  return u.size();
}

/// Builds a violator after recomputing the union size; throws if (a1, a2)
/// does not actually violate the inequality.
inline Violator make_violator(const GroupSpec& spec, const TranslatingSets& ts,
                              ElementSet a1, ElementSet a2) {
  const std::size_t u = doubling_union_size(spec, ts, a1, a2);
  if (u >= a1.size() + a2.size())
    throw PreconditionError("sets do not violate the doubling inequality");
  return {std::move(a1), std::move(a2), u};
}

/// Checks membership phi_i(g) in g S_i, totality over the domain, injectivity
/// and disjoint images. Returns an empty string on success, else the reason.
inline std::string certificate_problem(const GroupSpec& spec, const TranslatingSets& ts,
                                       std::span<const Element> domain,
                                       const Certificate& cert) {
  ElementSet dom(domain.begin(), domain.end());
  ElementSet images;
  for (int i : {1, 2}) {
    const auto& phi = i == 1 ? cert.phi1 : cert.phi2;
    const auto& S = ts.family(i);
    ElementSet covered;
    for (const auto& [g, img] : phi) {
      if (!dom.contains(g)) return "phi" + std::to_string(i) + " maps an element outside the domain";
      if (!covered.insert(g).second) return "phi" + std::to_string(i) + " lists an element twice";
      bool member = false;
      for (const Element& s : S) member = member || multiply(spec, g, s) == img;
      if (!member) return "phi" + std::to_string(i) + "(g) is not in g S" + std::to_string(i);
      if (!images.insert(img).second)
        return "images of phi1 and phi2 are not injective and disjoint";
    }
    if (covered.size() != dom.size()) return "phi" + std::to_string(i) + " is not total";
  }
  return {};
}

namespace detail {

inline std::vector<Element> sorted_unique(std::span<const Element> d) {
  std::vector<Element> out(d.begin(), d.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct DoublingGraph {
  std::vector<Element> domain;
  std::vector<Element> right;  // right vertex values
  BipartiteGraph graph;
};

inline DoublingGraph build_doubling_graph(const GroupSpec& spec, const TranslatingSets& ts,
                                          std::vector<Element> domain) {
  DoublingGraph dg;
  dg.domain = std::move(domain);
  const std::size_t n = dg.domain.size();
  std::unordered_map<Element, std::size_t, ElementHash> right_index;
  dg.graph.adjacency.resize(2 * n);
  for (int i : {1, 2}) {
    for (std::size_t k = 0; k < n; ++k) {
      auto& adj = dg.graph.adjacency[(i - 1) * n + k];
      for (const Element& s : ts.family(i)) {
        Element p = multiply(spec, dg.domain[k], s);
        auto [it, fresh] = right_index.try_emplace(p, dg.right.size());
        if (fresh) dg.right.push_back(std::move(p));
        adj.push_back(it->second);
      }
    }
  }
  dg.graph.right_count = dg.right.size();
  return dg;
}

// Greedy shrink of a deficient left set. Elements far from the identity are
// peeled first (height descending, normal form ascending); first from both
// copies at once, then from each copy separately. The union size is tracked
// with per-right-vertex multiplicities.
inline void shrink_violator(const GroupSpec& spec, const DoublingGraph& dg,
                            std::vector<bool>& in_left) {
  const std::size_t n = dg.domain.size();
  std::vector<std::size_t> mult(dg.graph.right_count, 0);
  std::size_t union_size = 0, left_size = 0;
  auto add = [&](std::size_t u, int delta) {
    for (std::size_t v : dg.graph.adjacency[u]) {
      if (delta > 0) {
        if (mult[v]++ == 0) ++union_size;
      } else {
        if (--mult[v] == 0) --union_size;
      }
    }
    left_size += delta > 0 ? 1 : std::size_t(-1);
    in_left[u] = delta > 0;
  };
  for (std::size_t u = 0; u < 2 * n; ++u) {
    if (in_left[u]) {
      in_left[u] = false;
      add(u, +1);
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::vector<std::int64_t> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = height(spec, dg.domain[k]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return h[x] > h[y]; });

  auto try_remove = [&](std::vector<std::size_t> us) {
    for (auto u : us)
      if (!in_left[u]) return;
    for (auto u : us) add(u, -1);
    if (union_size < left_size) return;
    for (auto u : us) add(u, +1);
  };
  for (std::size_t k : order) try_remove({k, n + k});
  for (std::size_t k : order) try_remove({k});
  for (std::size_t k : order) try_remove({n + k});
}

}  // namespace detail

/// Decides the doubling inequality for all A1, A2 contained in `domain`.
inline DoublingVerdict check_domain(const GroupSpec& spec, const TranslatingSets& ts,
                                    std::span<const Element> domain) {
  if (domain.empty()) throw PreconditionError("check_domain needs a nonempty domain");
  auto dg = detail::build_doubling_graph(spec, ts, detail::sorted_unique(domain));
  const std::size_t n = dg.domain.size();
  const Matching m = hopcroft_karp(dg.graph);

  if (m.size == 2 * n) {
    Certificate c;
    for (std::size_t k = 0; k < n; ++k) {
      c.phi1.emplace_back(dg.domain[k], dg.right[m.left_mate[k]]);
      c.phi2.emplace_back(dg.domain[k], dg.right[m.left_mate[n + k]]);
    }
    return c;
  }

  std::vector<bool> in_left = alternating_reachable(dg.graph, m);
  detail::shrink_violator(spec, dg, in_left);
  ElementSet a1, a2;
  for (std::size_t k = 0; k < n; ++k) {
    if (in_left[k]) a1.insert(dg.domain[k]);
    if (in_left[n + k]) a2.insert(dg.domain[k]);
  }
  return make_violator(spec, ts, std::move(a1), std::move(a2));
}

inline constexpr std::size_t kBruteForceMaxDomain = 14;

/// Exhaustive oracle over all 4^|D| pairs (A1, A2). Returns a violator of
/// minimum |A1| + |A2| (ties: lexicographically least sorted A1, then A2),
/// or nothing when the inequality holds on the whole domain.
inline std::optional<Violator> brute_force_check(const GroupSpec& spec,
                                                 const TranslatingSets& ts,
                                                 std::span<const Element> domain) {
  const std::vector<Element> dom = detail::sorted_unique(domain);
  const std::size_t n = dom.size();
  if (n == 0) throw PreconditionError("brute_force_check needs a nonempty domain");
  if (n > kBruteForceMaxDomain)
    throw BudgetError("brute_force_check domain has " + std::to_string(n) +
                      " elements; limit is " + std::to_string(kBruteForceMaxDomain));

  // Index all products independently of the matching graph.
  std::vector<Element> universe;
  std::unordered_map<Element, std::size_t, ElementHash> uidx;
  std::vector<std::vector<std::size_t>> hits[2];
  for (int i : {0, 1}) {
    hits[i].resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (const Element& s : ts.family(i + 1)) {
        Element p = multiply(spec, dom[k], s);
        auto [it, fresh] = uidx.try_emplace(p, universe.size());
        if (fresh) universe.push_back(p);
        hits[i][k].push_back(it->second);
      }
    }
  }
  const std::size_t words = (universe.size() + 63) / 64;
  const std::size_t masks = std::size_t{1} << n;
  std::vector<std::uint64_t> bits[2];
  for (int i : {0, 1}) {
    bits[i].assign(masks * words, 0);
    for (std::size_t mask = 1; mask < masks; ++mask) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
      const std::size_t rest = mask & (mask - 1);
      std::copy_n(&bits[i][rest * words], words, &bits[i][mask * words]);
      for (std::size_t u : hits[i][low]) bits[i][mask * words + u / 64] |= 1ULL << (u % 64);
    }
  }

  auto as_list = [&](std::size_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1) out.push_back(k);
    return out;
  };

  std::optional<std::pair<std::size_t, std::size_t>> best;
  std::size_t best_total = 0;
  for (std::size_t m1 = 0; m1 < masks; ++m1) {
    const std::size_t c1 = static_cast<std::size_t>(__builtin_popcountll(m1));
    const std::uint64_t* b1 = &bits[0][m1 * words];
    for (std::size_t m2 = 0; m2 < masks; ++m2) {
      const std::size_t total = c1 + static_cast<std::size_t>(__builtin_popcountll(m2));
      if (best && total > best_total) continue;
      const std::uint64_t* b2 = &bits[1][m2 * words];
      std::size_t u = 0;
      for (std::size_t w = 0; w < words; ++w)
        u += static_cast<std::size_t>(__builtin_popcountll(b1[w] | b2[w]));
      if (u >= total) continue;
      if (best && total == best_total) {
        auto cand = std::pair{as_list(m1), as_list(m2)};
        auto cur = std::pair{as_list(best->first), as_list(best->second)};
        if (!(cand < cur)) continue;
      }
      best = {m1, m2};
      best_total = total;
    }
  }
  if (!best) return std::nullopt;
  ElementSet a1, a2;
  for (auto k : as_list(best->first)) a1.insert(dom[k]);
  for (auto k : as_list(best->second)) a2.insert(dom[k]);
  return make_violator(spec, ts, std::move(a1), std::move(a2));
}

struct RadiusViolator {
  std::size_t radius = 0;
  Violator violator;
};

/// Smallest ball radius in [0, max_radius] whose domain admits a violator.
inline std::optional<RadiusViolator> minimal_violating_radius(
    const GroupSpec& spec, const GeneratingSet& gens, const TranslatingSets& ts,
    std::size_t max_radius, std::size_t vertex_budget = kDefaultVertexBudget) {
  for (std::size_t r = 0; r <= max_radius; ++r) {
    const CayleyPatch ball = enumerate_ball(spec, gens, r, vertex_budget);
    DoublingVerdict v = check_domain(spec, ts, ball.vertices);
    if (auto* viol = std::get_if<Violator>(&v)) return RadiusViolator{r, std::move(*viol)};
  }
  return std::nullopt;
}

}  // namespace tarski
