#ifndef QSD_GEOMETRY_HPP
#define QSD_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "qsd/graph.hpp"
#include "qsd/rng.hpp"

namespace qsd {

// ---------------------------------------------------------------------------
// John domains
//
// Feasibility is decided by an exact dynamic program over states
// (vertex, step index). T(v,i) holds iff some path v = z_i, ..., z_m = o
// satisfies delta(z_j) >= alpha(1+j) for every j in [i,m]; paths may revisit
// vertices. T is monotone in i, so the table is filled from the largest
// useful index downward and witness paths of minimal length fall out of the
// companion table of remaining lengths.

struct JohnCertificate {
  Vertex center = -1;
  double alpha = 0.0;
  int john_radius = -1;                 // max over x of the minimal witness length
  bool feasible = false;
  std::vector<std::vector<Vertex>> paths;  // indexed by local index; path[0] = x, back() = o
  std::vector<Vertex> unreachable;         // witnesses when infeasible
};

namespace detail {

constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Core DP. `ok(v, i)` decides delta(v) >= alpha(1+i); exactness of the
/// decision is delegated to the predicate so rational alphas can be handled
/// without floating error.
template <class Ok>
inline JohnCertificate john_dp(const DomainView& dom, Vertex o, double alpha_for_record, int i_top,
                               Ok&& ok, bool want_paths) {
  const auto& g = dom.graph();
  const int n = dom.size();
  const int oi = dom.local_index(o);
  std::vector<std::vector<int>> len(i_top + 2, std::vector<int>(n, kUnreachable));
  for (int i = i_top; i >= 0; --i) {
    for (int li = 0; li < n; ++li) {
      Vertex v = dom.members()[li];
      if (!ok(v, i)) continue;
      int best = kUnreachable;
      if (li == oi) best = 0;
      for (auto& [w, mu] : g.neighbors(v)) {
        if (!dom.contains(w)) continue;
        int next = len[i + 1][dom.local_index(w)];
        if (next != kUnreachable && next + 1 < best) best = next + 1;
      }
      len[i][li] = best;
    }
  }

  JohnCertificate cert;
  cert.center = o;
  cert.alpha = alpha_for_record;
  cert.feasible = true;
  int radius = 0;
  for (int li = 0; li < n; ++li) {
    if (len[0][li] == kUnreachable) {
      cert.feasible = false;
      cert.unreachable.push_back(dom.members()[li]);
    } else {
      radius = std::max(radius, len[0][li]);
    }
  }
  cert.john_radius = cert.feasible ? radius : -1;

  if (cert.feasible && want_paths) {
    cert.paths.resize(n);
    for (int li = 0; li < n; ++li) {
      std::vector<Vertex> path;
      int cur = li, i = 0;
      path.push_back(dom.members()[cur]);
      while (len[i][cur] != 0) {
        int target = len[i][cur] - 1;
        Vertex chosen = -1;
        for (auto& [w, mu] : g.neighbors(dom.members()[cur])) {
          if (!dom.contains(w)) continue;
          if (len[i + 1][dom.local_index(w)] == target) {
            chosen = w;
            break;  // neighbors sorted by id: deterministic tie-break
          }
        }
        if (chosen < 0) throw GraphError("John path reconstruction lost the witness");
        cur = dom.local_index(chosen);
        ++i;
        path.push_back(chosen);
      }
      cert.paths[li] = std::move(path);
    }
  }
  return cert;
}

inline int john_index_cap(const DomainView& dom, Vertex o, double alpha, int r_max) {
  double d_o = dom.delta(o);
  int cap = r_max;
  if (std::isfinite(d_o) && alpha > 0) cap = std::min(cap, static_cast<int>(std::floor(d_o / alpha - 1.0 + 1e-9)));
  return std::max(cap, 0);
}

}  // namespace detail

/// Exact decision for U in J(o, alpha, r_max), with witness paths on success.
inline JohnCertificate john_feasible(const DomainView& dom, Vertex o, double alpha, int r_max,
                                     bool want_paths = true) {
  if (!(alpha > 0.0) || alpha > 1.0) throw GraphError("John parameter alpha must lie in (0,1]");
  if (!dom.contains(o)) throw GraphError("John center must belong to the domain");
  int i_top = detail::john_index_cap(dom, o, alpha, r_max);
  auto ok = [&](Vertex v, int i) {
    double d = dom.delta(v);
    return !std::isfinite(d) || d >= alpha * (1.0 + i) - 1e-9;
  };
  return detail::john_dp(dom, o, alpha, i_top, ok, want_paths);
}

/// Largest alpha for which john_feasible holds with paths of length <= r_max.
/// Exact: feasibility flips only at the finitely many candidates
/// delta(v)/(1+i), and each candidate is tested with integer arithmetic.
inline double best_john_alpha(const DomainView& dom, Vertex o, int r_max = -1) {
  if (!dom.contains(o)) throw GraphError("John center must belong to the domain");
  if (!dom.has_boundary()) return 1.0;  // delta == +inf: every alpha works
  if (r_max < 0) r_max = 4 * dom.internal_radius() + 8;

  std::set<long long> deltas;
  for (Vertex v : dom.members()) deltas.insert(static_cast<long long>(dom.delta(v)));

  // candidates p/q in (0,1], p a delta value, q = 1+i
  struct Frac {
    long long p, q;
    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    bool operator<(const Frac& other) const { return p * other.q < other.p * q; }
    bool operator==(const Frac& other) const { return p * other.q == other.p * q; }
  };
  std::vector<Frac> cand;
  for (long long p : deltas)
    for (long long q = std::max<long long>(1, p); q <= r_max + 1; ++q) {
      if (p > q) continue;  // alpha <= 1
      long long g = std::gcd(p, q);
      cand.push_back({p / g, q / g});
    }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  auto feasible_at = [&](const Frac& f) {
    // delta(v) >= (p/q)(1+i)  <=>  delta(v) * q >= p * (1+i), exact in int64
    int i_top = detail::john_index_cap(dom, o, f.value(), r_max);
    auto ok = [&](Vertex v, int i) {
      long long d = static_cast<long long>(dom.delta(v));
      return d * f.q >= f.p * (1 + static_cast<long long>(i));
    };
    return detail::john_dp(dom, o, f.value(), i_top, ok, false).feasible;
  };

  // monotone: feasible for all alpha below some threshold
  int lo = -1, hi = static_cast<int>(cand.size());
  if (hi == 0 || !feasible_at(cand[0])) return 0.0;
  lo = 0;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (feasible_at(cand[mid]))
      lo = mid;
    else
      hi = mid;
  }
  return cand[lo].value();
}

// ---------------------------------------------------------------------------
// Inner-uniform certification
//
// For a pair (x,y) and a trial length k, conditions (1)-(2) hold iff the
// alpha-constrained forward reach sets F_j meet across an edge of E_U at the
// split index: F_j(v) is the set of endpoints of paths of length j from v
// along which delta >= alpha(1 + position). Both halves face constraints
// alpha(1+l) with l <= k/2, which matches min(j, k-j) exactly.

struct InnerUniformCertificate {
  double alpha = 0.0;
  double big_a = 1.0;
  bool all_pairs = false;            // exhaustive vs sampled
  long long pairs_tested = 0;
  long long pairs_certified = 0;
  double pair_coverage = 0.0;        // certified fraction
  std::vector<std::pair<Vertex, Vertex>> failures;
  std::map<std::pair<Vertex, Vertex>, std::vector<Vertex>> witness_paths;  // sampled
  bool certified() const { return pairs_tested > 0 && pairs_certified == pairs_tested; }
};

namespace detail {

class ReachSets {
 public:
  ReachSets(const DomainView& dom, double alpha) : dom_(dom), alpha_(alpha) {
    n_ = dom.size();
    words_ = (n_ + 63) / 64;
  }

  using Row = std::vector<std::uint64_t>;

  /// F_j(v) as a bitset over local indices.
  const Row& forward(int v_local, int j) {
    auto& levels = cache_[v_local];
    while (static_cast<int>(levels.size()) <= j) grow(v_local, levels);
    return levels[j];
  }

  bool delta_ok(int local, int pos) const {
    double d = dom_.delta(dom_.members()[local]);
    return !std::isfinite(d) || d >= alpha_ * (1.0 + pos) - 1e-9;
  }

  /// Edge meet: exists {u,w} in E_U with u set in a, w set in b.
  bool edge_meet(const Row& a, const Row& b) const {
    for (int li = 0; li < n_; ++li) {
      if (!(a[li >> 6] >> (li & 63) & 1)) continue;
      Vertex u = dom_.members()[li];
      for (auto& [w, mu] : dom_.graph().neighbors(u)) {
        int lw = dom_.local_index(w);
        if (lw >= 0 && (b[lw >> 6] >> (lw & 63) & 1)) return true;
      }
    }
    return false;
  }

  /// Recover one meeting edge (u local, w local), or (-1,-1).
  std::pair<int, int> meeting_edge(const Row& a, const Row& b) const {
    for (int li = 0; li < n_; ++li) {
      if (!(a[li >> 6] >> (li & 63) & 1)) continue;
      Vertex u = dom_.members()[li];
      for (auto& [w, mu] : dom_.graph().neighbors(u)) {
        int lw = dom_.local_index(w);
        if (lw >= 0 && (b[lw >> 6] >> (lw & 63) & 1)) return {li, lw};
      }
    }
    return {-1, -1};
  }

  int size() const { return n_; }

 private:
  void grow(int v_local, std::vector<Row>& levels) {
    if (levels.empty()) {
      Row r(words_, 0);
      if (delta_ok(v_local, 0)) r[v_local >> 6] |= 1ull << (v_local & 63);
      levels.push_back(std::move(r));
      return;
    }
    int j = static_cast<int>(levels.size());
    const Row& prev = levels.back();
    Row next(words_, 0);
    for (int li = 0; li < n_; ++li) {
      if (!(prev[li >> 6] >> (li & 63) & 1)) continue;
      for (auto& [w, mu] : dom_.graph().neighbors(dom_.members()[li])) {
        int lw = dom_.local_index(w);
        if (lw >= 0 && delta_ok(lw, j)) next[lw >> 6] |= 1ull << (lw & 63);
      }
    }
    levels.push_back(std::move(next));
  }

  const DomainView& dom_;
  double alpha_;
  int n_ = 0, words_ = 0;
  std::map<int, std::vector<Row>> cache_;
};

/// Backtrack a witness path through the reach sets given the meeting edge.
inline std::vector<Vertex> reconstruct_path(const DomainView& dom, ReachSets& rs, int x_local,
                                            int y_local, int k, int u_local, int w_local) {
  auto back_half = [&](int start_local, int end_local, int steps) {
    // walk from end (at level `steps`) back to start (level 0)
    std::vector<int> seq{end_local};
    int cur = end_local;
    for (int j = steps; j > 0; --j) {
      const auto& prev = rs.forward(start_local, j - 1);
      for (auto& [w, mu] : dom.graph().neighbors(dom.members()[cur])) {
        int lw = dom.local_index(w);
        if (lw >= 0 && (prev[lw >> 6] >> (lw & 63) & 1)) {
          cur = lw;
          break;
        }
      }
      seq.push_back(cur);
    }
    std::reverse(seq.begin(), seq.end());  // start .. end
    return seq;
  };
  int jstar = k / 2, istar = k - jstar - 1;
  auto fwd = back_half(x_local, u_local, jstar);       // x .. u
  auto bwd = back_half(y_local, w_local, istar);       // y .. w
  std::vector<Vertex> path;
  for (int li : fwd) path.push_back(dom.members()[li]);
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) path.push_back(dom.members()[*it]);
  return path;
}

}  // namespace detail

struct PairSelection {
  bool all = true;
  int sample_size = 0;
  std::uint64_t seed = 0;
};

/// Decision for a single pair: conditions (1)-(2) with parameters alpha, A.
inline bool inner_uniform_certify_pair(const DomainView& dom, double alpha, double big_a, Vertex x,
                                       Vertex y) {
  detail::ReachSets rs(dom, alpha);
  int xl = dom.local_index(x), yl = dom.local_index(y);
  if (xl < 0 || yl < 0) throw GraphError("pair outside the domain");
  if (xl == yl) return rs.delta_ok(xl, 0);
  int d = dom.inner_distance(x, y);
  int kmax = static_cast<int>(std::floor(big_a * d + 1e-9));
  for (int k = d; k <= kmax; ++k) {
    int jstar = k / 2, istar = k - jstar - 1;
    if (rs.edge_meet(rs.forward(xl, jstar), rs.forward(yl, istar))) return true;
  }
  return false;
}

inline InnerUniformCertificate inner_uniform_certify(const DomainView& dom, double alpha, double big_a,
                                                     const PairSelection& pairs = {},
                                                     int witness_cap = 16) {
  if (!(alpha > 0.0) || alpha > 1.0) throw GraphError("inner-uniform alpha must lie in (0,1]");
  if (big_a < 1.0) throw GraphError("inner-uniform A must be >= 1");
  InnerUniformCertificate cert;
  cert.alpha = alpha;
  cert.big_a = big_a;
  cert.all_pairs = pairs.all;

  detail::ReachSets rs(dom, alpha);
  const int n = dom.size();

  auto test_pair = [&](int xl, int yl) -> bool {
    Vertex x = dom.members()[xl], y = dom.members()[yl];
    if (xl == yl) return rs.delta_ok(xl, 0);
    int d = dom.inner_distance(x, y);
    int kmax = static_cast<int>(std::floor(big_a * d + 1e-9));
    for (int k = d; k <= kmax; ++k) {
      int jstar = k / 2, istar = k - jstar - 1;
      const auto& fx = rs.forward(xl, jstar);
      const auto& fy = rs.forward(yl, istar);
      auto [u, w] = rs.meeting_edge(fx, fy);
      if (u >= 0) {
        if (static_cast<int>(cert.witness_paths.size()) < witness_cap)
          cert.witness_paths[{x, y}] = detail::reconstruct_path(dom, rs, xl, yl, k, u, w);
        return true;
      }
    }
    return false;
  };

  auto record = [&](int xl, int yl) {
    ++cert.pairs_tested;
    if (test_pair(xl, yl))
      ++cert.pairs_certified;
    else if (cert.failures.size() < 64)
      cert.failures.push_back({dom.members()[xl], dom.members()[yl]});
  };

  if (pairs.all) {
    for (int xl = 0; xl < n; ++xl)
      for (int yl = xl + 1; yl < n; ++yl) record(xl, yl);
  } else {
    // stratified by d_U decile with a fixed seed
    int diam = dom.inner_diameter();
    SplitRng rng(pairs.seed, 0xd0c1);
    int per_band = std::max(1, pairs.sample_size / 10);
    for (int band = 0; band < 10; ++band) {
      int lo = 1 + band * diam / 10, hi = std::max(lo, (band + 1) * diam / 10);
      int found = 0, attempts = 0;
      while (found < per_band && attempts < 200 * per_band) {
        ++attempts;
        int xl = rng.next_u32_below(n), yl = rng.next_u32_below(n);
        if (xl == yl) continue;
        int d = dom.inner_distance(dom.members()[xl], dom.members()[yl]);
        if (d < lo || d > hi) continue;
        record(xl, yl);
        ++found;
      }
    }
  }
  cert.pair_coverage = cert.pairs_tested ? static_cast<double>(cert.pairs_certified) / cert.pairs_tested : 0.0;
  return cert;
}

// ---------------------------------------------------------------------------
// Whitney coverings and local s-chains

struct WhitneyBall {
  Vertex center = -1;
  double radius = 0.0;
  bool at_scale = false;              // radius == s exactly
  std::vector<Vertex> members;        // the ball itself (pairwise disjoint family)
  std::vector<Vertex> triple;         // 3E; triples cover U
};

struct WhitneyCover {
  double eta = 0.0;
  double scale = std::numeric_limits<double>::infinity();
  std::vector<WhitneyBall> balls;
  int anchor = -1;                    // ball with o in its triple
  std::vector<int> selection;         // per local vertex: E(s,x) ball id
  std::vector<int> averaging_ball;    // per local vertex: F(s,x) ball id (triple-averaging set)
  std::vector<std::vector<int>> chains;  // per ball: local s-chain as ball ids, F_0 = self
  std::vector<int> chain_stop;        // q*_s(E) per ball
};

inline WhitneyCover whitney_cover(const DomainView& dom, double eta,
                                  double scale = std::numeric_limits<double>::infinity(),
                                  const JohnCertificate* cert = nullptr) {
  if (!(eta > 0.0 && eta < 1.0)) throw GraphError("Whitney parameter eta must lie in (0,1)");
  if (!dom.has_boundary()) throw GraphError("Whitney covering requires a domain with boundary");
  WhitneyCover cover;
  cover.eta = eta;
  cover.scale = scale;
  const int n = dom.size();

  auto radius_of = [&](Vertex x) { return std::min(scale, eta * dom.delta(x) / 4.0); };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    double ra = radius_of(dom.members()[a]), rb = radius_of(dom.members()[b]);
    if (ra != rb) return ra > rb;
    return dom.members()[a] < dom.members()[b];
  });

  std::vector<char> taken(n, 0);
  for (int li : order) {
    Vertex x = dom.members()[li];
    double r = radius_of(x);
    auto bus = ball(dom.graph(), x, r);
    bool free = true;
    for (Vertex v : bus)
      if (taken[dom.local_index(v)]) {
        free = false;
        break;
      }
    if (!free) continue;
    WhitneyBall b;
    b.center = x;
    b.radius = r;
    b.at_scale = std::isfinite(scale) && r == scale;
    b.members = bus;
    b.triple = ball(dom.graph(), x, 3.0 * r);
    for (Vertex v : bus) taken[dom.local_index(v)] = 1;
    cover.balls.push_back(std::move(b));
  }

  // selection map: per vertex the covering triple of maximal radius (tie: center id)
  cover.selection.assign(n, -1);
  for (int bi = 0; bi < static_cast<int>(cover.balls.size()); ++bi)
    for (Vertex v : cover.balls[bi].triple) {
      int lv = dom.local_index(v);
      int cur = cover.selection[lv];
      if (cur < 0 || cover.balls[bi].radius > cover.balls[cur].radius ||
          (cover.balls[bi].radius == cover.balls[cur].radius &&
           cover.balls[bi].center < cover.balls[cur].center))
        cover.selection[lv] = bi;
    }

  // anchor: triple containing o, largest radius
  Vertex o = dom.center();
  cover.anchor = cover.selection[dom.local_index(o)];

  // local s-chains along John paths
  if (cert && cert->feasible) {
    cover.chains.resize(cover.balls.size());
    cover.chain_stop.assign(cover.balls.size(), 0);
    for (int bi = 0; bi < static_cast<int>(cover.balls.size()); ++bi) {
      std::vector<int> chain{bi};
      if (!cover.balls[bi].at_scale) {
        const auto& path = cert->paths[dom.local_index(cover.balls[bi].center)];
        std::map<int, int> seen{{bi, 0}};
        std::vector<char> in_triple(n, 0);
        auto load = [&](int id) {
          std::fill(in_triple.begin(), in_triple.end(), 0);
          for (Vertex v : cover.balls[id].triple) in_triple[dom.local_index(v)] = 1;
        };
        load(bi);
        std::size_t pos = 0;
        int guard = 0;
        while (guard++ < 16 * n) {
          while (pos < path.size() && in_triple[dom.local_index(path[pos])]) ++pos;
          if (pos >= path.size()) break;
          int next = cover.selection[dom.local_index(path[pos])];
          auto it = seen.find(next);
          if (it != seen.end()) {
            // collapse the cycle and drop stale bookkeeping
            chain.resize(it->second + 1);
            for (auto sit = seen.begin(); sit != seen.end();)
              sit = sit->second >= static_cast<int>(chain.size()) ? seen.erase(sit) : std::next(sit);
          } else {
            seen[next] = static_cast<int>(chain.size());
            chain.push_back(next);
          }
          load(chain.back());
          if (cover.balls[chain.back()].at_scale) break;  // local s-chain stops at radius s
        }
        if (!cover.balls[chain.back()].at_scale && chain.back() != cover.anchor &&
            !seen.count(cover.anchor))
          chain.push_back(cover.anchor);
      }
      cover.chain_stop[bi] = static_cast<int>(chain.size()) - 1;
      cover.chains[bi] = std::move(chain);
    }
  }

  // F(s,x): the triple of E(s,x) when that ball sits at radius s (or the cover
  // is unscaled); otherwise the last ball of E(s,x)'s local s-chain.
  cover.averaging_ball.assign(n, -1);
  for (int lv = 0; lv < n; ++lv) {
    int e = cover.selection[lv];
    if (!std::isfinite(scale) || cover.balls[e].at_scale || cover.chains.empty())
      cover.averaging_ball[lv] = e;
    else
      cover.averaging_ball[lv] = cover.chains[e][cover.chain_stop[e]];
  }
  return cover;
}

// ---------------------------------------------------------------------------
// The x_r map

/// Follows the certified path from x toward the center: x_r = gamma[floor(r)]
/// when the path is long enough, the center otherwise. Without a certificate
/// the map falls back to greedy delta-ascent and is flagged heuristic.
class XrMap {
 public:
  XrMap(const DomainView& dom, const JohnCertificate& cert)
      : dom_(&dom), paths_(&cert.paths), center_(cert.center), heuristic_(false) {
    if (!cert.feasible || cert.paths.empty())
      throw GraphError("x_r map needs a feasible certificate with stored paths");
  }

  explicit XrMap(const DomainView& dom)
      : dom_(&dom), paths_(nullptr), center_(dom.center()), heuristic_(true) {}

  bool heuristic() const { return heuristic_; }
  Vertex center() const { return center_; }

  Vertex operator()(Vertex x, double r) const {
    int steps = static_cast<int>(std::floor(r));
    if (steps <= 0) return x;
    if (!heuristic_) {
      const auto& path = (*paths_)[dom_->local_index(x)];
      int k = static_cast<int>(path.size()) - 1;
      if (static_cast<double>(k) < r) return center_;
      return path[steps];
    }
    Vertex cur = x;
    for (int s = 0; s < steps; ++s) {
      Vertex best = cur;
      double bd = dom_->delta(cur);
      for (auto& [w, mu] : dom_->graph().neighbors(cur))
        if (dom_->contains(w) && dom_->delta(w) > bd) {
          bd = dom_->delta(w);
          best = w;
        }
      cur = best;
    }
    return cur;
  }

 private:
  const DomainView* dom_;
  const std::vector<std::vector<Vertex>>* paths_;
  Vertex center_;
  bool heuristic_;
};

}  // namespace qsd

#endif
