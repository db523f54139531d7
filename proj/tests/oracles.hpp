#ifndef QSD_TESTS_ORACLES_HPP
#define QSD_TESTS_ORACLES_HPP

// Independent reference implementations used to freeze expected values.
// Everything here is deliberately naive and shares no code with the library
// paths it checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "qsd/graph.hpp"

namespace oracle {

/// Plain BFS distance, independent of WeightedGraph::bfs_from.
inline int bfs_distance(const qsd::WeightedGraph& g, qsd::Vertex s, qsd::Vertex t) {
  std::map<int, int> dist{{s, 0}};
  std::queue<int> q;
  q.push(s);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (x == t) return dist[x];
    for (auto& [y, w] : g.neighbors(x))
      if (!dist.count(y)) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
  }
  return -1;
}

/// BFS restricted to a vertex set.
inline int bfs_distance_within(const qsd::WeightedGraph& g, const std::set<int>& allowed, int s, int t) {
  if (!allowed.count(s) || !allowed.count(t)) return -1;
  std::map<int, int> dist{{s, 0}};
  std::queue<int> q;
  q.push(s);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (x == t) return dist[x];
    for (auto& [y, w] : g.neighbors(x))
      if (allowed.count(y) && !dist.count(y)) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
  }
  return -1;
}

/// Exhaustive John feasibility by path enumeration (paths may revisit
/// vertices, lengths up to max_len). Exponential; only for tiny domains.
inline bool john_feasible_brute(const qsd::DomainView& dom, qsd::Vertex o, double alpha, int max_len) {
  const auto& g = dom.graph();
  for (qsd::Vertex x : dom.members()) {
    // DFS over (vertex, index) with the delta constraint enforced per step
    bool found = false;
    std::vector<std::pair<int, int>> stack{{x, 0}};
    std::set<std::pair<int, int>> seen;
    if (dom.delta(x) < alpha * 1.0 - 1e-12) return false;
    while (!stack.empty() && !found) {
      auto [v, i] = stack.back();
      stack.pop_back();
      if (seen.count({v, i})) continue;
      seen.insert({v, i});
      if (v == o) {
        found = true;
        break;
      }
      if (i == max_len) continue;
      for (auto& [w, mu] : g.neighbors(v)) {
        if (!dom.contains(w)) continue;
        if (dom.delta(w) >= alpha * (2.0 + i) - 1e-12) stack.push_back({w, i + 1});
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Dense matrix power by repeated multiplication (row-major, no Eigen).
inline std::vector<std::vector<double>> mat_power(const std::vector<std::vector<double>>& m, int t) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) out[i][i] = 1.0;
  for (int step = 0; step < t; ++step) {
    std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int kk = 0; kk < n; ++kk) {
        if (out[i][kk] == 0.0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += out[i][kk] * m[kk][j];
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace oracle

#endif
