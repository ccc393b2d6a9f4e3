#pragma once

// Maximum bipartite matching (Hopcroft-Karp) and the alternating-path
// deficiency witness used to extract Hall violators.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace tarski {

/// Bipartite graph given by left adjacency lists into [0, right_count).
/// Adjacency order is respected, so results are deterministic.
struct BipartiteGraph {
  std::size_t right_count = 0;
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t left_count() const noexcept { return adjacency.size(); }
};

inline constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

struct Matching {
  std::vector<std::size_t> left_mate;   // right vertex or kUnmatched
  std::vector<std::size_t> right_mate;  // left vertex or kUnmatched
  std::size_t size = 0;
};

inline Matching hopcroft_karp(const BipartiteGraph& g) {
  const std::size_t nl = g.left_count();
  Matching m;
  m.left_mate.assign(nl, kUnmatched);
  m.right_mate.assign(g.right_count, kUnmatched);

  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(nl);
  std::vector<std::size_t> cursor(nl);

  auto bfs = [&]() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t u = 0; u < nl; ++u) {
      if (m.left_mate[u] == kUnmatched) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = inf;
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : g.adjacency[u]) {
        const std::size_t w = m.right_mate[v];
        if (w == kUnmatched) {
          found = true;
        } else if (dist[w] == inf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  // Iterative DFS along the layered graph; one augmenting path per call.
  std::vector<std::size_t> stack;
  auto dfs = [&](std::size_t root) {
    stack.clear();
    stack.push_back(root);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      bool advanced = false;
      while (cursor[u] < g.adjacency[u].size()) {
        const std::size_t v = g.adjacency[u][cursor[u]];
        const std::size_t w = m.right_mate[v];
        if (w == kUnmatched) {
          // Augment along the stack: each stacked left vertex takes the right
          // vertex its cursor points at.
          for (std::size_t i = stack.size(); i-- > 0;) {
            const std::size_t lu = stack[i];
            const std::size_t rv = g.adjacency[lu][cursor[lu]];
            m.left_mate[lu] = rv;
            m.right_mate[rv] = lu;
          }
          return true;
        }
        if (dist[w] == dist[u] + 1) {
          stack.push_back(w);
          advanced = true;
          break;
        }
        ++cursor[u];
      }
      if (!advanced) {
        dist[u] = inf;
        stack.pop_back();
        if (!stack.empty()) ++cursor[stack.back()];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(cursor.begin(), cursor.end(), 0);
    for (std::size_t u = 0; u < nl; ++u) {
      if (m.left_mate[u] == kUnmatched && dfs(u)) ++m.size;
    }
  }
  return m;
}

/// Left vertices reachable from unmatched left vertices by alternating paths
/// (non-matching edge to the right, matching edge back). For a maximum
/// matching the reachable set L has |N(L)| = |L| - #unmatched, i.e. it is a
/// Hall-deficient set.
inline std::vector<bool> alternating_reachable(const BipartiteGraph& g,
                                               const Matching& m) {
  std::vector<bool> left_seen(g.left_count(), false);
  std::vector<bool> right_seen(g.right_count, false);
  std::queue<std::size_t> q;
  for (std::size_t u = 0; u < g.left_count(); ++u) {
    if (m.left_mate[u] == kUnmatched) {
      left_seen[u] = true;
      q.push(u);
    }
  }
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : g.adjacency[u]) {
      if (right_seen[v]) continue;
      right_seen[v] = true;
      const std::size_t w = m.right_mate[v];
      if (w != kUnmatched && !left_seen[w]) {
        left_seen[w] = true;
        q.push(w);
      }
    }
  }
  return left_seen;
}

}  // namespace tarski
