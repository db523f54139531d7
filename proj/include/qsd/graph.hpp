#ifndef QSD_GRAPH_HPP
#define QSD_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsd {

using Vertex = int;

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sentinel used for delta when the domain has no exterior boundary.
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// The ambient weighted structure (X, E, pi, mu). Vertices are dense integer
/// ids. mu is stored once per unordered pair and mirrored into adjacency
/// lists; mu > 0 exactly on edges (adapted), pi > 0 everywhere. Immutable
/// after construction; all queries are read-only.
class WeightedGraph {
 public:
  struct Edge {
    Vertex u, v;
    double mu;
  };

  WeightedGraph(int n_vertices, std::vector<Edge> edges, std::vector<double> pi,
                std::vector<std::array<int, 3>> coords = {}, int coord_dim = 0)
      : n_(n_vertices),
        edges_(std::move(edges)),
        pi_(std::move(pi)),
        coords_(std::move(coords)),
        coord_dim_(coord_dim) {
    if (n_ <= 0) throw GraphError("graph must have at least one vertex");
    if (static_cast<int>(pi_.size()) != n_) throw GraphError("pi size mismatch");
    for (double w : pi_)
      if (!(w > 0.0)) throw GraphError("vertex weight pi must be positive");
    adj_.assign(n_, {});
    for (auto& e : edges_) {
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) throw GraphError("edge endpoint out of range");
      if (e.u == e.v) throw GraphError("self-loops are not allowed in the edge set");
      if (!(e.mu > 0.0)) throw GraphError("edge weight mu must be positive on edges");
      adj_[e.u].push_back({e.v, e.mu});
      adj_[e.v].push_back({e.u, e.mu});
    }
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i].first == a[i - 1].first) throw GraphError("duplicate edge");
    }
    if (!connected()) throw GraphError("graph must be connected");
    if (coord_dim_ > 0)
      for (Vertex v = 0; v < n_; ++v) coord_index_[coords_[v]] = v;
  }

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& pi() const { return pi_; }
  double pi(Vertex x) const { return pi_[x]; }
  const std::vector<std::pair<Vertex, double>>& neighbors(Vertex x) const { return adj_[x]; }
  int degree(Vertex x) const { return static_cast<int>(adj_[x].size()); }

  bool has_coords() const { return coord_dim_ > 0; }
  int coord_dim() const { return coord_dim_; }
  const std::array<int, 3>& coord(Vertex x) const { return coords_[x]; }
  /// Vertex lookup by lattice coordinate; -1 if absent.
  Vertex vertex_at(const std::array<int, 3>& c) const {
    auto it = coord_index_.find(c);
    return it == coord_index_.end() ? -1 : it->second;
  }

  double mu(Vertex x, Vertex y) const {
    for (auto& [z, w] : adj_[x])
      if (z == y) return w;
    return 0.0;
  }

  /// Sum of mu over edges at x.
  double mu_row_sum(Vertex x) const {
    double s = 0.0;
    for (auto& [y, w] : adj_[x]) s += w;
    return s;
  }

  /// BFS distances from a single source over the ambient graph.
  std::vector<int> bfs_from(Vertex s) const {
    check_vertex(s);
    std::vector<int> dist(n_, -1);
    std::queue<Vertex> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto& [y, w] : adj_[x])
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          q.push(y);
        }
    }
    return dist;
  }

  void check_vertex(Vertex x) const {
    if (x < 0 || x >= n_) throw GraphError("unknown vertex id " + std::to_string(x));
  }

 private:
  bool connected() const {
    if (n_ == 1) return true;
    auto d = bfs_from(0);
    return std::all_of(d.begin(), d.end(), [](int v) { return v >= 0; });
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<double> pi_;
  std::vector<std::vector<std::pair<Vertex, double>>> adj_;
  std::vector<std::array<int, 3>> coords_;
  int coord_dim_ = 0;
  std::map<std::array<int, 3>, Vertex> coord_index_;
};

/// Graph distance d(x,y): minimal number of edges on a path.
inline int graph_distance(const WeightedGraph& g, Vertex x, Vertex y) {
  g.check_vertex(x);
  g.check_vertex(y);
  if (x == y) return 0;
  auto d = g.bfs_from(x);
  return d[y];
}

/// Closed metric ball B(x,r) in the ambient graph; {x} for r in [0,1).
inline std::vector<Vertex> ball(const WeightedGraph& g, Vertex x, double r) {
  g.check_vertex(x);
  std::vector<Vertex> out;
  if (r < 0) return out;
  auto d = g.bfs_from(x);
  for (Vertex v = 0; v < g.size(); ++v)
    if (d[v] >= 0 && d[v] <= r) out.push_back(v);
  return out;
}

/// Diagnostics of the weight pair (pi, mu): subordination, laziness margin
/// and the ellipticity constant P_e = max over edges of max(pi(x),pi(y))/mu_xy.
struct WeightDiagnostics {
  bool subordinated = true;
  Vertex worst_vertex = -1;     // vertex maximizing sum_y mu_xy / pi(x)
  double worst_ratio = 0.0;
  double laziness_margin = 1.0; // min_x (1 - sum_y mu_xy/pi(x))
  double ellipticity_constant = 1.0;
};

inline WeightDiagnostics weight_diagnostics(const WeightedGraph& g) {
  WeightDiagnostics d;
  d.laziness_margin = 1.0;
  for (Vertex x = 0; x < g.size(); ++x) {
    double ratio = g.mu_row_sum(x) / g.pi(x);
    if (ratio > d.worst_ratio) {
      d.worst_ratio = ratio;
      d.worst_vertex = x;
    }
    d.laziness_margin = std::min(d.laziness_margin, 1.0 - ratio);
  }
  d.subordinated = d.worst_ratio <= 1.0 + 1e-12;
  double pe = 0.0;
  for (auto& e : g.edges()) pe = std::max(pe, std::max(g.pi(e.u), g.pi(e.v)) / e.mu);
  d.ellipticity_constant = std::max(pe, 1.0);
  return d;
}

using GraphPtr = std::shared_ptr<const WeightedGraph>;

/// A finite connected subset U of the ambient graph, with its exterior
/// boundary, boundary distance delta, inner metric d_U and center o.
/// delta(x) = d(x, X\U); when U = X the sentinel +inf is stored and killed
/// chain constructors must reject the domain. Holds shared ownership of the
/// ambient graph, so views stay valid wherever they are passed.
class DomainView {
 public:
  DomainView(GraphPtr graph, std::vector<Vertex> members, Vertex center = -1,
             int all_pairs_cap = 5000)
      : g_(std::move(graph)), members_(std::move(members)) {
    if (!g_) throw GraphError("domain needs an ambient graph");
    const WeightedGraph& g = *g_;
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw GraphError("domain must be nonempty");
    local_.assign(g.size(), -1);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      g.check_vertex(members_[i]);
      local_[members_[i]] = static_cast<int>(i);
    }
    if (!induced_connected()) throw GraphError("domain members must be connected in the induced subgraph");

    // exterior boundary
    for (Vertex x : members_)
      for (auto& [y, w] : g.neighbors(x))
        if (local_[y] < 0) boundary_.push_back(y);
    std::sort(boundary_.begin(), boundary_.end());
    boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());

    compute_delta();

    if (center >= 0) {
      if (local_[center] < 0) throw GraphError("center must belong to the domain");
      center_ = center;
    } else {
      // o = argmax delta, ties by lowest vertex id
      double best = -1.0;
      for (Vertex x : members_)
        if (delta_of(x) > best) {
          best = delta_of(x);
          center_ = x;
        }
    }
    auto d = inner_distances_from(center_);
    internal_radius_ = 0;
    for (Vertex x : members_) internal_radius_ = std::max(internal_radius_, d[local_[x]]);
    all_pairs_cap_ = all_pairs_cap;
  }

  const WeightedGraph& graph() const { return *g_; }
  const GraphPtr& graph_ptr() const { return g_; }
  const std::vector<Vertex>& members() const { return members_; }
  const std::vector<Vertex>& boundary() const { return boundary_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(Vertex x) const { return x >= 0 && x < static_cast<int>(local_.size()) && local_[x] >= 0; }
  /// Index of x inside members() (-1 if absent).
  int local_index(Vertex x) const { return local_[x]; }
  Vertex center() const { return center_; }
  int internal_radius() const { return internal_radius_; }
  bool has_boundary() const { return !boundary_.empty(); }

  double delta(Vertex x) const {
    if (local_[x] < 0) throw GraphError("delta queried outside the domain");
    return boundary_.empty() ? kInfiniteDistance : static_cast<double>(delta_[local_[x]]);
  }

  /// Inner distances d_U(source, .) indexed by local index; -1 marks
  /// unreachable (cannot happen for a connected domain).
  std::vector<int> inner_distances_from(Vertex source) const {
    if (local_[source] < 0) throw GraphError("inner distance source outside the domain");
    {
      std::lock_guard<std::mutex> lock(memo_->mutex);
      auto it = memo_->rows.find(source);
      if (it != memo_->rows.end()) return it->second;
    }
    std::vector<int> dist(members_.size(), -1);
    std::queue<Vertex> q;
    dist[local_[source]] = 0;
    q.push(source);
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto& [y, w] : g_->neighbors(x))
        if (local_[y] >= 0 && dist[local_[y]] < 0) {
          dist[local_[y]] = dist[local_[x]] + 1;
          q.push(y);
        }
    }
    std::lock_guard<std::mutex> lock(memo_->mutex);
    if (static_cast<int>(memo_->rows.size()) < all_pairs_cap_) memo_->rows.emplace(source, dist);
    return dist;
  }

  int inner_distance(Vertex x, Vertex y) const {
    auto d = inner_distances_from(x);
    if (local_[y] < 0) throw GraphError("inner distance target outside the domain");
    return d[local_[y]];
  }

  /// Closed inner ball B_U(x,r).
  std::vector<Vertex> inner_ball(Vertex x, double r) const {
    auto d = inner_distances_from(x);
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (d[i] >= 0 && d[i] <= r) out.push_back(members_[i]);
    return out;
  }

  /// d_U-diameter (exact; runs one BFS per member, memo-capped).
  int inner_diameter() const {
    int diam = 0;
    for (Vertex x : members_) {
      auto d = inner_distances_from(x);
      for (int v : d) diam = std::max(diam, v);
    }
    return diam;
  }

 private:
  bool induced_connected() const {
    std::vector<char> seen(members_.size(), 0);
    std::queue<Vertex> q;
    q.push(members_[0]);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto& [y, w] : g_->neighbors(x))
        if (local_[y] >= 0 && !seen[local_[y]]) {
          seen[local_[y]] = 1;
          ++count;
          q.push(y);
        }
    }
    return count == members_.size();
  }

  void compute_delta() {
    delta_.assign(members_.size(), -1);
    if (boundary_.empty()) return;
    // multi-source BFS from X\U over the ambient graph
    std::vector<int> dist(g_->size(), -1);
    std::queue<Vertex> q;
    for (Vertex v = 0; v < g_->size(); ++v)
      if (local_[v] < 0) {
        dist[v] = 0;
        q.push(v);
      }
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto& [y, w] : g_->neighbors(x))
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          q.push(y);
        }
    }
    for (std::size_t i = 0; i < members_.size(); ++i) delta_[i] = dist[members_[i]];
  }

  double delta_of(Vertex x) const {
    return boundary_.empty() ? kInfiniteDistance : static_cast<double>(delta_[local_[x]]);
  }

  struct Memo {
    std::mutex mutex;
    std::map<Vertex, std::vector<int>> rows;
  };

  GraphPtr g_;
  std::vector<Vertex> members_;
  std::vector<Vertex> boundary_;
  std::vector<int> local_;
  std::vector<int> delta_;
  Vertex center_ = -1;
  int internal_radius_ = 0;
  int all_pairs_cap_ = 5000;
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

inline DomainView carve_domain(GraphPtr g, std::vector<Vertex> members, Vertex center = -1) {
  return DomainView(std::move(g), std::move(members), center);
}

/// Inner ball for a domain (same contract as ball() but in d_U).
inline std::vector<Vertex> ball(const DomainView& dom, Vertex x, double r) {
  return dom.inner_ball(x, r);
}

// ---------------------------------------------------------------------------
// Elementary builders. Families from the worked examples live in families.hpp;
// these two cover ad-hoc constructions and tests.

/// Path on n vertices with pi == 1 and constant edge weight mu_edge.
inline GraphPtr path_graph(int n, double mu_edge = 0.5) {
  std::vector<WeightedGraph::Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, mu_edge});
  std::vector<std::array<int, 3>> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = {i, 0, 0};
  return std::make_shared<WeightedGraph>(n, std::move(edges), std::vector<double>(n, 1.0),
                                         std::move(coords), 1);
}

/// Rectangular slice [0,nx] x [0,ny] (x [0,nz]) of Z^d with uniform weights.
inline GraphPtr lattice_box(std::vector<int> upper, double mu_edge, double pi_vertex = 1.0) {
  int d = static_cast<int>(upper.size());
  if (d < 1 || d > 3) throw GraphError("lattice_box supports d in {1,2,3}");
  std::array<int, 3> hi = {0, 0, 0};
  for (int i = 0; i < d; ++i) {
    if (upper[i] < 0) throw GraphError("box upper corner must be nonnegative");
    hi[i] = upper[i];
  }
  std::vector<std::array<int, 3>> coords;
  std::map<std::array<int, 3>, Vertex> index;
  for (int x = 0; x <= hi[0]; ++x)
    for (int y = 0; y <= hi[1]; ++y)
      for (int z = 0; z <= hi[2]; ++z) {
        index[{x, y, z}] = static_cast<Vertex>(coords.size());
        coords.push_back({x, y, z});
      }
  std::vector<WeightedGraph::Edge> edges;
  for (auto& [c, v] : index)
    for (int axis = 0; axis < d; ++axis) {
      auto c2 = c;
      c2[axis] += 1;
      auto it = index.find(c2);
      if (it != index.end()) edges.push_back({v, it->second, mu_edge});
    }
  int n = static_cast<int>(coords.size());
  return std::make_shared<WeightedGraph>(n, std::move(edges), std::vector<double>(n, pi_vertex),
                                         std::move(coords), d);
}

}  // namespace qsd

#endif
