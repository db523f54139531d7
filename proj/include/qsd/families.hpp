#ifndef QSD_FAMILIES_HPP
#define QSD_FAMILIES_HPP

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsd/graph.hpp"

namespace qsd {

enum class GeometricClass { InnerUniform, John, Neither };

/// One worked family instance: the ambient graph, the carved domain, the
/// expected geometric class (used to route tests), and optional closed forms.
struct FamilyInstance {
  std::string family;
  GraphPtr graph;
  DomainView domain;
  GeometricClass expected_class = GeometricClass::InnerUniform;
  bool lazy = false;
};

struct FamilySpec {
  std::string family;       // cone45 | diamond_ball | punctured_ball_d | annulus_round |
                            // annulus_diamond | box | box_poles | fig_d3_nonconvex |
                            // fig_d4_dumbbell | fig_iuj_john_not_iu | five_path
  int N = 0;
  int L = 0;
  int d = 2;
  bool lazy = false;        // halve mu: K -> (I+K)/2, breaks periodicity
  std::vector<std::array<int, 3>> poles;  // for box_poles
};

namespace detail {

inline long long l1norm(const std::array<int, 3>& c) {
  return std::abs(static_cast<long long>(c[0])) + std::abs(static_cast<long long>(c[1])) +
         std::abs(static_cast<long long>(c[2]));
}

inline double l2norm(const std::array<int, 3>& c) {
  return std::sqrt(static_cast<double>(c[0]) * c[0] + static_cast<double>(c[1]) * c[1] +
                   static_cast<double>(c[2]) * c[2]);
}

/// Builds a graph from an explicit coordinate set with uniform weights and
/// nearest-neighbor lattice edges.
inline GraphPtr lattice_graph(const std::vector<std::array<int, 3>>& pts, int dim, double mu_edge) {
  std::map<std::array<int, 3>, Vertex> index;
  for (std::size_t i = 0; i < pts.size(); ++i) index[pts[i]] = static_cast<Vertex>(i);
  std::vector<WeightedGraph::Edge> edges;
  for (auto& [c, v] : index)
    for (int axis = 0; axis < dim; ++axis) {
      auto c2 = c;
      c2[axis] += 1;
      auto it = index.find(c2);
      if (it != index.end()) edges.push_back({v, it->second, mu_edge});
    }
  int n = static_cast<int>(pts.size());
  return std::make_shared<WeightedGraph>(n, std::move(edges), std::vector<double>(n, 1.0), pts, dim);
}

}  // namespace detail

/// The forty-five degree cone: X = {(p,q): 0<=q<=p<=N}, U = {0<q<p<=N},
/// simple random walk with mu = 1/4; the missing neighbors along the right
/// edge become holding (the loops of the construction).
inline FamilyInstance make_cone45(int N, bool lazy = false) {
  if (N < 3) throw GraphError("cone45 needs N >= 3");
  std::vector<std::array<int, 3>> pts;
  for (int p = 0; p <= N; ++p)
    for (int q = 0; q <= p; ++q) pts.push_back({p, q, 0});
  double mu = lazy ? 0.125 : 0.25;
  GraphPtr g = detail::lattice_graph(pts, 2, mu);
  std::vector<Vertex> members;
  for (int p = 0; p <= N; ++p)
    for (int q = 0; q <= p; ++q)
      if (0 < q && q < p) members.push_back(g->vertex_at({p, q, 0}));
  Vertex o = g->vertex_at({N, N / 2, 0});
  DomainView dom(g, members, o);
  return {"cone45", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

/// Graph-distance ball B(N) in Z^2 under the lazy walk (mu = 1/8, holding
/// 1/2); the ambient graph carries a one-layer collar so the boundary is the
/// sphere of radius N+1.
inline FamilyInstance make_diamond_ball(int N, bool lazy = false) {
  if (N < 2) throw GraphError("diamond_ball needs N >= 2");
  std::vector<std::array<int, 3>> pts;
  for (int p = -N - 1; p <= N + 1; ++p)
    for (int q = -N - 1; q <= N + 1; ++q)
      if (std::abs(p) + std::abs(q) <= N + 1) pts.push_back({p, q, 0});
  double mu = lazy ? 0.0625 : 0.125;
  GraphPtr g = detail::lattice_graph(pts, 2, mu);
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (detail::l1norm(c) <= N) members.push_back(g->vertex_at(c));
  Vertex o = g->vertex_at({0, 0, 0});
  DomainView dom(g, members, o);
  return {"diamond_ball", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

/// B(N) \ {0} inside X = B(N) in Z^d: reflecting outer boundary via holding
/// nu(x)/(2d), killed at the single pole at the origin.
inline FamilyInstance make_punctured_ball(int N, int d, bool lazy = false) {
  if (N < 3 || d < 2 || d > 3) throw GraphError("punctured_ball needs N >= 3 and d in {2,3}");
  std::vector<std::array<int, 3>> pts;
  int zlo = d == 3 ? -N : 0, zhi = d == 3 ? N : 0;
  for (int p = -N; p <= N; ++p)
    for (int q = -N; q <= N; ++q)
      for (int z = zlo; z <= zhi; ++z)
        if (std::abs(p) + std::abs(q) + std::abs(z) <= N) pts.push_back({p, q, z});
  double mu = (lazy ? 0.5 : 1.0) / (2.0 * d);
  GraphPtr g = detail::lattice_graph(pts, d, mu);
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (detail::l1norm(c) > 0) members.push_back(g->vertex_at(c));
  DomainView dom(g, members);
  return {"punctured_ball_d", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

/// B(N) \ B_2(L) inside X = B(N): Euclidean hole of radius L (lattice points
/// with |x|_2 <= L, ties on the sphere included), reflecting outer boundary.
inline FamilyInstance make_annulus_round(int N, int L, int d, bool lazy = false) {
  if (N < 3 || L < 1 || L >= N || d < 2 || d > 3) throw GraphError("annulus_round needs 1 <= L < N, d in {2,3}");
  std::vector<std::array<int, 3>> pts;
  int zlo = d == 3 ? -N : 0, zhi = d == 3 ? N : 0;
  for (int p = -N; p <= N; ++p)
    for (int q = -N; q <= N; ++q)
      for (int z = zlo; z <= zhi; ++z)
        if (std::abs(p) + std::abs(q) + std::abs(z) <= N) pts.push_back({p, q, z});
  double mu = (lazy ? 0.5 : 1.0) / (2.0 * d);
  GraphPtr g = detail::lattice_graph(pts, d, mu);
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (detail::l2norm(c) > static_cast<double>(L)) members.push_back(g->vertex_at(c));
  DomainView dom(g, members);
  return {"annulus_round", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

/// B(N) \ B(L) in Z^2: diamond hole with corners at (+-L,0),(0,+-L).
inline FamilyInstance make_annulus_diamond(int N, int L, bool lazy = false) {
  if (N < 3 || L < 1 || 2 * L >= N) throw GraphError("annulus_diamond needs 1 <= L < N/2");
  std::vector<std::array<int, 3>> pts;
  for (int p = -N; p <= N; ++p)
    for (int q = -N; q <= N; ++q)
      if (std::abs(p) + std::abs(q) <= N) pts.push_back({p, q, 0});
  double mu = (lazy ? 0.5 : 1.0) / 4.0;
  GraphPtr g = detail::lattice_graph(pts, 2, mu);
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (detail::l1norm(c) > L) members.push_back(g->vertex_at(c));
  DomainView dom(g, members);
  return {"annulus_diamond", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

/// Box [-N,N]^d killed at a one-layer collar (the natural boundary).
inline FamilyInstance make_box(int N, int d, bool lazy = false) {
  if (N < 1 || d < 1 || d > 3) throw GraphError("box needs N >= 1 and d in {1,2,3}");
  std::vector<std::array<int, 3>> pts;
  int lo = -N - 1, hi = N + 1;
  for (int p = lo; p <= hi; ++p)
    for (int q = d >= 2 ? lo : 0; q <= (d >= 2 ? hi : 0); ++q)
      for (int z = d >= 3 ? lo : 0; z <= (d >= 3 ? hi : 0); ++z) pts.push_back({p, q, z});
  double mu = (lazy ? 0.5 : 1.0) / (2.0 * d);
  GraphPtr g = detail::lattice_graph(pts, d, mu);
  std::vector<Vertex> members;
  for (auto& c : pts) {
    bool inside = std::abs(c[0]) <= N && (d < 2 || std::abs(c[1]) <= N) && (d < 3 || std::abs(c[2]) <= N);
    if (inside) members.push_back(g->vertex_at(c));
  }
  DomainView dom(g, members);
  return {"box", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

/// Box [-N,N]^d with reflecting outer boundary, killed at the given poles.
inline FamilyInstance make_box_poles(int N, int d, std::vector<std::array<int, 3>> poles, bool lazy = false) {
  if (N < 2 || d < 1 || d > 3) throw GraphError("box_poles needs N >= 2 and d in {1,2,3}");
  if (poles.empty()) poles.push_back({0, 0, 0});
  std::vector<std::array<int, 3>> pts;
  for (int p = -N; p <= N; ++p)
    for (int q = d >= 2 ? -N : 0; q <= (d >= 2 ? N : 0); ++q)
      for (int z = d >= 3 ? -N : 0; z <= (d >= 3 ? N : 0); ++z) pts.push_back({p, q, z});
  double mu = (lazy ? 0.5 : 1.0) / (2.0 * d);
  GraphPtr g = detail::lattice_graph(pts, d, mu);
  std::set<std::array<int, 3>> pole_set(poles.begin(), poles.end());
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (!pole_set.count(c)) members.push_back(g->vertex_at(c));
  DomainView dom(g, members);
  GeometricClass cls = d >= 2 ? GeometricClass::InnerUniform : GeometricClass::Neither;
  return {"box_poles", g, std::move(dom), cls, lazy};
}

/// The non-convex family of the worked figures: a box with an interior
/// diagonal wall, two slits hanging from the top, and one lone killed vertex.
/// Uniform (hence John) with an N-independent alpha, but not convex in any sense.
inline FamilyInstance make_fig_d3(int N, bool lazy = false) {
  if (N < 10) throw GraphError("fig_d3_nonconvex needs N >= 10");
  std::vector<std::array<int, 3>> pts;
  for (int p = 0; p <= N; ++p)
    for (int q = 0; q <= N; ++q) pts.push_back({p, q, 0});
  double mu = (lazy ? 0.5 : 1.0) / 4.0;
  GraphPtr g = detail::lattice_graph(pts, 2, mu);
  std::set<std::array<int, 3>> blocked;
  for (int p = 0; p <= N; ++p) {
    blocked.insert({p, 0, 0});
    blocked.insert({p, N, 0});
    blocked.insert({0, p, 0});
    blocked.insert({N, p, 0});
  }
  for (int i = 1; i <= 3 * N / 7; ++i) blocked.insert({i, i, 0});
  for (int j = 1; j <= 2 * N / 7; ++j) {
    blocked.insert({N / 3, N - j, 0});
    blocked.insert({2 * N / 3, N - j, 0});
  }
  blocked.insert({2 * N / 3, 2 * N / 7, 0});
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (!blocked.count(c)) members.push_back(g->vertex_at(c));
  Vertex o = g->vertex_at({2 * N / 3, N / 2, 0});
  DomainView dom(g, members, o);
  return {"fig_d3_nonconvex", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

/// Dumbbell: two triangles joined by a passage of width ~ sqrt(N); not
/// uniformly John (best alpha decays with N).
inline FamilyInstance make_fig_d4(int N, bool lazy = false) {
  if (N < 6) throw GraphError("fig_d4_dumbbell needs N >= 6");
  std::vector<std::array<int, 3>> pts;
  for (int p = 0; p <= N; ++p)
    for (int q = 0; q <= N; ++q) pts.push_back({p, q, 0});
  double mu = (lazy ? 0.5 : 1.0) / 4.0;
  GraphPtr g = detail::lattice_graph(pts, 2, mu);
  std::set<std::array<int, 3>> blocked;
  for (int p = 0; p <= N; ++p) {
    blocked.insert({p, 0, 0});
    blocked.insert({p, N, 0});
    blocked.insert({0, p, 0});
    blocked.insert({N, p, 0});
  }
  int wall_top = N - static_cast<int>(std::floor(std::sqrt(static_cast<double>(N))));
  for (int i = 1; i <= wall_top; ++i) blocked.insert({i, i, 0});
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (!blocked.count(c)) members.push_back(g->vertex_at(c));
  DomainView dom(g, members);
  return {"fig_d4_dumbbell", g, std::move(dom), GeometricClass::Neither, lazy};
}

/// John-but-not-inner-uniform: a box with a one-in-two comb of killed
/// vertices on the middle column up to height ~ 5N/8.
inline FamilyInstance make_fig_iuj(int N, bool lazy = false) {
  if (N < 8) throw GraphError("fig_iuj_john_not_iu needs N >= 8");
  std::vector<std::array<int, 3>> pts;
  for (int p = 0; p <= N; ++p)
    for (int q = 0; q <= N; ++q) pts.push_back({p, q, 0});
  double mu = (lazy ? 0.5 : 1.0) / 4.0;
  GraphPtr g = detail::lattice_graph(pts, 2, mu);
  std::set<std::array<int, 3>> blocked;
  for (int p = 0; p <= N; ++p) {
    blocked.insert({p, 0, 0});
    blocked.insert({p, N, 0});
    blocked.insert({0, p, 0});
    blocked.insert({N, p, 0});
  }
  for (int q = 0; q <= 5 * N / 8; q += 2) blocked.insert({N / 2, q, 0});
  std::vector<Vertex> members;
  for (auto& c : pts)
    if (!blocked.count(c)) members.push_back(g->vertex_at(c));
  DomainView dom(g, members);
  return {"fig_iuj_john_not_iu", g, std::move(dom), GeometricClass::John, lazy};
}

/// Simple random walk on five vertices, killed outside the middle three.
inline FamilyInstance make_five_path(bool lazy = false) {
  GraphPtr g = path_graph(5, lazy ? 0.25 : 0.5);
  DomainView dom(g, {1, 2, 3});
  return {"five_path", g, std::move(dom), GeometricClass::InnerUniform, lazy};
}

inline FamilyInstance generate(const FamilySpec& spec) {
  const std::string& f = spec.family;
  if (f == "cone45") return make_cone45(spec.N, spec.lazy);
  if (f == "diamond_ball") return make_diamond_ball(spec.N, spec.lazy);
  if (f == "punctured_ball_d") return make_punctured_ball(spec.N, spec.d, spec.lazy);
  if (f == "annulus_round") return make_annulus_round(spec.N, spec.L, spec.d, spec.lazy);
  if (f == "annulus_diamond") return make_annulus_diamond(spec.N, spec.L, spec.lazy);
  if (f == "box") return make_box(spec.N, spec.d, spec.lazy);
  if (f == "box_poles") return make_box_poles(spec.N, spec.d, spec.poles, spec.lazy);
  if (f == "fig_d3_nonconvex") return make_fig_d3(spec.N, spec.lazy);
  if (f == "fig_d4_dumbbell") return make_fig_d4(spec.N, spec.lazy);
  if (f == "fig_iuj_john_not_iu") return make_fig_iuj(spec.N, spec.lazy);
  if (f == "five_path") return make_five_path(spec.lazy);
  throw GraphError("unknown family: " + f);
}

// ---------------------------------------------------------------------------
// Closed forms (cone45 and diamond_ball only)

inline double cone45_beta0(int N) {
  return 0.5 * (std::cos(M_PI / (2 * N + 1)) + std::cos(3 * M_PI / (2 * N + 1)));
}

inline double cone45_kappa(int N) {
  return std::sqrt(8.0 * N * (N - 1)) / (2 * N + 1);
}

inline double cone45_phi0(int N, int p, int q) {
  double a = M_PI / (2 * N + 1);
  double sp = std::sin(a * p), sq = std::sin(a * q);
  return 4.0 * cone45_kappa(N) * sp * sq * (sp * sp - sq * sq);
}

inline double diamond_beta0(int N) {
  double c = std::cos(M_PI / (2.0 * (N + 1)));
  return 0.5 * (1.0 + c * c);
}

/// Diamond phi0 up to the normalizing constant kappa_N (order 1, computed
/// numerically from pi_U(phi0^2) = 1).
inline double diamond_phi0_shape(int N, int p, int q) {
  double a = M_PI / (2.0 * (N + 1));
  return std::cos(a * (p + q)) * std::cos(a * (p - q));
}

/// Closed-form phi0 evaluated at a domain vertex; cone values include the
/// stated normalization, diamond values are normalized against the instance.
inline std::vector<double> closed_form_phi0(const FamilyInstance& inst, int N) {
  const auto& dom = inst.domain;
  std::vector<double> out(dom.size());
  if (inst.family == "cone45") {
    for (int i = 0; i < dom.size(); ++i) {
      auto c = inst.graph->coord(dom.members()[i]);
      out[i] = cone45_phi0(N, c[0], c[1]);
    }
    return out;
  }
  if (inst.family == "diamond_ball") {
    double norm2 = 0.0;
    for (int i = 0; i < dom.size(); ++i) {
      auto c = inst.graph->coord(dom.members()[i]);
      out[i] = diamond_phi0_shape(N, c[0], c[1]);
      norm2 += out[i] * out[i];
    }
    double kappa = 1.0 / std::sqrt(norm2 / dom.size());  // pi_U uniform
    for (double& v : out) v *= kappa;
    return out;
  }
  throw GraphError("closed-form phi0 available only for cone45 and diamond_ball");
}

/// Stated asymptotic profile of phi0 for the punctured/annulus families,
/// compared against a solved eigenfunction over the family's natural zone.
struct ProfileReport {
  std::string zone;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  long long vertices_in_zone = 0;
  double fitted_corner_exponent = 0.0;  // annulus_diamond only
  bool has_ratio_window() const { return vertices_in_zone > 0; }
};

inline ProfileReport asymptotic_phi0_profile(const FamilyInstance& inst, int N, int L,
                                             const std::vector<double>& phi0) {
  ProfileReport rep;
  const auto& dom = inst.domain;
  auto track = [&](double ratio) {
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    ++rep.vertices_in_zone;
  };
  if (inst.family == "punctured_ball_d" && inst.graph->coord_dim() == 2) {
    rep.zone = "|x| in [N^0.2, N/2], profile log|x|/log N";
    for (int i = 0; i < dom.size(); ++i) {
      auto c = inst.graph->coord(dom.members()[i]);
      double ax = std::hypot(c[0], c[1]);
      if (ax < std::pow(N, 0.2) || ax > N / 2.0) continue;
      track(phi0[i] / (std::log(ax) / std::log(static_cast<double>(N))));
    }
    return rep;
  }
  if (inst.family == "punctured_ball_d") {
    rep.zone = "|x| >= N/4, profile 1";
    for (int i = 0; i < dom.size(); ++i) {
      auto c = inst.graph->coord(dom.members()[i]);
      double ax = std::sqrt(static_cast<double>(c[0]) * c[0] + static_cast<double>(c[1]) * c[1] +
                            static_cast<double>(c[2]) * c[2]);
      if (ax < N / 4.0) continue;
      track(phi0[i]);
    }
    return rep;
  }
  if (inst.family == "annulus_round" && inst.graph->coord_dim() == 2) {
    rep.zone = "|x| in [2L, N/2], profile log|x|/log N";
    for (int i = 0; i < dom.size(); ++i) {
      auto c = inst.graph->coord(dom.members()[i]);
      double ax = std::hypot(c[0], c[1]);
      if (ax < 2.0 * L || ax > N / 2.0) continue;
      track(phi0[i] / (std::log(ax) / std::log(static_cast<double>(N))));
    }
    return rep;
  }
  if (inst.family == "annulus_diamond") {
    rep.zone = "median axis from the tip (L,0), rho in [1, L], exponent 2/3";
    std::vector<double> xs, ys;
    for (int j = 1; j <= L; ++j) {
      Vertex v = inst.graph->vertex_at({L + j, 0, 0});
      if (v < 0 || !dom.contains(v)) continue;
      xs.push_back(std::log(static_cast<double>(j)));
      ys.push_back(std::log(phi0[dom.local_index(v)]));
      track(phi0[dom.local_index(v)] / std::pow(static_cast<double>(j) / L, 2.0 / 3.0));
    }
    if (xs.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0, n = static_cast<double>(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      rep.fitted_corner_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
  }
  throw GraphError("no stated profile for family " + inst.family);
}

/// The coordinate-shift recipe for the cone's x_{sqrt t} map:
/// p -> (p + 2 floor(sqrt(t/4))) ∧ N, q -> (q + floor(sqrt(t/4))) ∧ floor(N/2).
inline Vertex cone45_xsqrt(const FamilyInstance& inst, int N, Vertex x, double t) {
  auto c = inst.graph->coord(x);
  int m = static_cast<int>(std::floor(std::sqrt(t / 4.0)));
  int p = std::min(c[0] + 2 * m, N);
  int q = std::min(c[1] + m, N / 2);
  q = std::max(1, std::min(q, p - 1));  // keep the image inside U
  Vertex v = inst.graph->vertex_at({p, q, 0});
  return v;
}

/// Analogous recipe for the diamond: move sqrt(t/4) steps toward the center
/// along each coordinate.
inline Vertex diamond_xsqrt(const FamilyInstance& inst, int N, Vertex x, double t) {
  auto c = inst.graph->coord(x);
  int m = static_cast<int>(std::floor(std::sqrt(t / 4.0)));
  auto pull = [&](int v) {
    if (v > 0) return std::max(0, v - m);
    if (v < 0) return std::min(0, v + m);
    return 0;
  };
  int p = pull(c[0]), q = pull(c[1]);
  while (std::abs(p) + std::abs(q) > N) {  // cannot happen, guard anyway
    if (std::abs(p) > std::abs(q)) p -= (p > 0 ? 1 : -1);
    else q -= (q > 0 ? 1 : -1);
  }
  return inst.graph->vertex_at({p, q, 0});
}

}  // namespace qsd

#endif
