#ifndef QSD_INEQUALITIES_HPP
#define QSD_INEQUALITIES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "qsd/geometry.hpp"
#include "qsd/graph.hpp"
#include "qsd/kernels.hpp"
#include "qsd/linalg.hpp"
#include "qsd/rng.hpp"

namespace qsd {

// ---------------------------------------------------------------------------
// Volume doubling

struct DoublingReport {
  double constant = 1.0;         // max V(x,2r)/V(x,r)
  Vertex worst_vertex = -1;
  double worst_radius = 0.0;
  std::vector<double> radii;
  long long centers_tested = 0;
};

struct SampleSpec {
  bool all = true;
  int count = 0;
  std::uint64_t seed = 0;
};

namespace detail {

/// Doubling over an arbitrary center set with distances supplied by `dist`.
template <class DistFn>
DoublingReport doubling_impl(const std::vector<Vertex>& centers, const std::vector<double>& measure,
                             DistFn&& dist, const std::vector<double>& radii, const SampleSpec& sample) {
  if (radii.empty()) throw GraphError("doubling needs a nonempty radius grid");
  DoublingReport rep;
  rep.radii = radii;
  std::vector<Vertex> chosen;
  if (sample.all || static_cast<int>(centers.size()) <= sample.count) {
    chosen = centers;
  } else {
    SplitRng rng(sample.seed, 0xd0b1);
    for (int i = 0; i < sample.count; ++i) chosen.push_back(centers[rng.next_u32_below(static_cast<std::uint32_t>(centers.size()))]);
  }
  for (Vertex x : chosen) {
    auto d = dist(x);  // distances indexed like `measure`; -1 unreachable
    double maxr = *std::max_element(radii.begin(), radii.end());
    std::vector<double> vol(static_cast<std::size_t>(2 * maxr) + 2, 0.0);
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] >= 0 && d[i] < static_cast<int>(vol.size())) vol[d[i]] += measure[i];
    for (std::size_t i = 1; i < vol.size(); ++i) vol[i] += vol[i - 1];
    auto volume = [&](double r) {
      if (r < 0) return 0.0;
      std::size_t idx = std::min(vol.size() - 1, static_cast<std::size_t>(std::floor(r)));
      return vol[idx];
    };
    for (double r : radii) {
      double v1 = volume(r), v2 = volume(2 * r);
      if (v1 <= 0) continue;
      double ratio = v2 / v1;
      if (ratio > rep.constant) {
        rep.constant = ratio;
        rep.worst_vertex = x;
        rep.worst_radius = r;
      }
    }
    ++rep.centers_tested;
  }
  return rep;
}

}  // namespace detail

/// Doubling of a vertex measure over ambient balls.
inline DoublingReport doubling_constant(const WeightedGraph& g, const std::vector<double>& measure,
                                        const std::vector<double>& radii, const SampleSpec& sample = {}) {
  std::vector<Vertex> centers(g.size());
  std::iota(centers.begin(), centers.end(), 0);
  return detail::doubling_impl(centers, measure, [&](Vertex x) { return g.bfs_from(x); }, radii, sample);
}

/// Doubling of a measure on U over inner balls B_U; `measure` is indexed by
/// local domain index.
inline DoublingReport doubling_constant(const DomainView& dom, const std::vector<double>& measure,
                                        const std::vector<double>& radii, const SampleSpec& sample = {}) {
  return detail::doubling_impl(
      dom.members(), measure, [&](Vertex x) { return dom.inner_distances_from(x); }, radii, sample);
}

// ---------------------------------------------------------------------------
// Poincare inequalities

/// Smallest nonzero eigenvalue of the Neumann form on a vertex set B:
/// sum_B |f - f_B|^2 pi <= (1/lambda1) * sum_{x,y in B, x~y} |f(x)-f(y)|^2 mu.
/// Returns 0 when the form is disconnected on B (infinite constant).
inline double neumann_lambda1(const WeightedGraph& g, const std::vector<Vertex>& bset,
                              const std::vector<double>* pi_override = nullptr,
                              const std::function<double(Vertex, Vertex)>* mu_override = nullptr) {
  const int nb = static_cast<int>(bset.size());
  if (nb < 2) throw GraphError("Poincare ball needs at least 2 vertices");
  std::map<Vertex, int> local;
  for (int i = 0; i < nb; ++i) local[bset[i]] = i;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::VectorXd pi(nb);
  bool any_edge = false;
  for (int i = 0; i < nb; ++i) {
    Vertex x = bset[i];
    pi[i] = pi_override ? (*pi_override)[i] : g.pi(x);
    for (auto& [y, w] : g.neighbors(x)) {
      auto it = local.find(y);
      if (it == local.end()) continue;
      double m = mu_override ? (*mu_override)(x, y) : w;
      l(i, i) += m;
      l(i, it->second) -= m;
      any_edge = true;
    }
  }
  if (!any_edge) return 0.0;
  // generalized problem L f = lambda Pi f via Pi^{-1/2} L Pi^{-1/2}
  Eigen::VectorXd s = pi.array().sqrt().inverse();
  Eigen::MatrixXd a = s.asDiagonal() * l * s.asDiagonal();
  auto se = dense_sym_eig(a);
  // eigenvalues ascending; lambda0 ~ 0 (constants); zero multiplicity > 1
  // means a disconnected form
  double lam1 = se.values[1];
  if (lam1 < 1e-12) return 0.0;
  return lam1;
}

/// Tightest constant P(B) = 1/lambda1 for one ball; infinite constants are
/// reported as +inf.
inline double ball_poincare_constant(const WeightedGraph& g, const std::vector<Vertex>& bset,
                                     const std::vector<double>* pi_override = nullptr,
                                     const std::function<double(Vertex, Vertex)>* mu_override = nullptr) {
  double lam = neumann_lambda1(g, bset, pi_override, mu_override);
  return lam > 0 ? 1.0 / lam : std::numeric_limits<double>::infinity();
}

struct PoincareReport {
  double theta = 2.0;
  double constant = 0.0;  // max over balls of lambda1(B)^{-1} / r^theta
  Vertex worst_vertex = -1;
  double worst_radius = 0.0;
  long long balls_tested = 0;
};

inline PoincareReport poincare_report(const WeightedGraph& g, const std::vector<double>& radii,
                                      double theta = 2.0, const SampleSpec& sample = {}) {
  PoincareReport rep;
  rep.theta = theta;
  std::vector<Vertex> centers(g.size());
  std::iota(centers.begin(), centers.end(), 0);
  std::vector<Vertex> chosen;
  if (sample.all || static_cast<int>(centers.size()) <= sample.count) {
    chosen = centers;
  } else {
    SplitRng rng(sample.seed, 0xb411);
    for (int i = 0; i < sample.count; ++i) chosen.push_back(centers[rng.next_u32_below(static_cast<std::uint32_t>(centers.size()))]);
  }
  for (Vertex x : chosen)
    for (double r : radii) {
      auto b = ball(g, x, r);
      if (b.size() < 2) continue;
      double p = ball_poincare_constant(g, b);
      if (!std::isfinite(p)) continue;
      double scaled = p / std::pow(r, theta);
      ++rep.balls_tested;
      if (scaled > rep.constant) {
        rep.constant = scaled;
        rep.worst_vertex = x;
        rep.worst_radius = r;
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// The averaging operator Q_s and the Q-Poincare check

/// Q_s f(x) = pi(F(s,x))^{-1} sum_{F(s,x)} f pi, identity for s in [0,1].
inline std::vector<double> q_operator(const DomainView& dom, const WhitneyCover& cover,
                                      const std::vector<double>& f, double s) {
  if (s <= 1.0) return f;
  const auto& g = dom.graph();
  std::vector<double> out(dom.size());
  std::map<int, std::pair<double, double>> cache;  // ball id -> (sum f pi, sum pi)
  for (int lv = 0; lv < dom.size(); ++lv) {
    int fb = cover.averaging_ball[lv];
    auto it = cache.find(fb);
    if (it == cache.end()) {
      double num = 0, den = 0;
      for (Vertex v : cover.balls[fb].triple) {
        num += f[dom.local_index(v)] * g.pi(v);
        den += g.pi(v);
      }
      it = cache.emplace(fb, std::make_pair(num, den)).first;
    }
    out[lv] = it->second.first / it->second.second;
  }
  return out;
}

/// Dirichlet energy restricted to U: (1/2) sum_{x,y in U} |f(x)-f(y)|^2 mu_xy.
inline double dirichlet_energy(const DomainView& dom, const std::vector<double>& f) {
  const auto& g = dom.graph();
  double e = 0.0;
  for (auto& edge : g.edges()) {
    if (!dom.contains(edge.u) || !dom.contains(edge.v)) continue;
    double diff = f[dom.local_index(edge.u)] - f[dom.local_index(edge.v)];
    e += diff * diff * edge.mu;
  }
  return e;
}

struct QPoincareReport {
  double theta = 2.0;
  double constant = 0.0;  // max over (f,s) of sum |f-Q_s f|^2 pi / (s^theta E(f,f))
  double worst_scale = 0.0;
  int functions_tested = 0;
};

inline QPoincareReport q_poincare_check(const DomainView& dom,
                                        const std::vector<std::pair<double, const WhitneyCover*>>& covers,
                                        const std::vector<std::vector<double>>& funcs, double theta = 2.0) {
  QPoincareReport rep;
  rep.theta = theta;
  const auto& g = dom.graph();
  for (const auto& f : funcs) {
    double energy = dirichlet_energy(dom, f);
    if (energy <= 1e-300) continue;  // constants: zero on both sides
    ++rep.functions_tested;
    for (auto& [s, cover] : covers) {
      auto qf = q_operator(dom, *cover, f, s);
      double lhs = 0.0;
      for (int lv = 0; lv < dom.size(); ++lv) {
        double diff = f[lv] - qf[lv];
        lhs += diff * diff * g.pi(dom.members()[lv]);
      }
      double c = lhs / (std::pow(s, theta) * energy);
      if (c > rep.constant) {
        rep.constant = c;
        rep.worst_scale = s;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Nash inequality

struct NashReport {
  double theta = 2.0, nu = 2.0;
  double big_n = 0.0;
  double constant = 0.0;           // smallest C making the inequality hold on the suite
  double decay_bound_max_ratio = 0.0;  // max over n of measured / bound, with C above
  bool decay_bound_holds = false;
  int decay_horizon = 0;
};

/// Tests ||f||_2^{2(1+theta/nu)} <= C [E(f,f) + ||f||_2^2 / N] ||f||_1^{2theta/nu}
/// over the suite, then checks the kernel-decay conclusion
/// sup_x K^{2n}(x,x)/pi(x) <= 2 (8C(1+nu/theta)/(n+1))^{nu/theta}
/// against the exact spectral sum sum_j beta_j^{2n} psi_j(x)^2.
inline NashReport nash_verify(const WeightedGraph& g, const KernelMatrix& kernel, const SpectralPair& sp,
                              double theta, double nu, double big_n,
                              const std::vector<std::vector<double>>& funcs, int decay_horizon) {
  NashReport rep;
  rep.theta = theta;
  rep.nu = nu;
  rep.big_n = big_n;
  rep.decay_horizon = decay_horizon;
  const int n = g.size();
  for (const auto& f : funcs) {
    double l1 = 0, l2 = 0;
    for (int i = 0; i < n; ++i) {
      l1 += std::abs(f[i]) * g.pi(i);
      l2 += f[i] * f[i] * g.pi(i);
    }
    if (l1 <= 0 || l2 <= 0) continue;
    double energy = 0.0;
    for (auto& e : g.edges()) {
      double diff = f[e.u] - f[e.v];
      energy += diff * diff * e.mu;
    }
    double lhs = std::pow(l2, 1.0 + theta / nu);
    double rhs_core = (energy + l2 / big_n) * std::pow(l1, 2.0 * theta / nu);
    if (rhs_core > 0) rep.constant = std::max(rep.constant, lhs / rhs_core);
  }

  if (!sp.full_spectrum) throw SolverError("nash_verify needs the dense spectral path");
  const auto& se = *sp.full_spectrum;
  const auto& m = kernel.reversing_measure();
  rep.decay_bound_holds = true;
  for (int t = 0; t <= decay_horizon; ++t) {
    double sup = 0.0;
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        double psi = se.vectors(x, j) / std::sqrt(m[x]);
        s += std::pow(se.values[j], 2.0 * t) * psi * psi;
      }
      sup = std::max(sup, s);
    }
    double bound = 2.0 * std::pow(8.0 * rep.constant * (1.0 + nu / theta) / (t + 1.0), nu / theta);
    double ratio = sup / bound;
    rep.decay_bound_max_ratio = std::max(rep.decay_bound_max_ratio, ratio);
    if (ratio > 1.0) rep.decay_bound_holds = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Moderate growth

struct ModerateGrowthReport {
  double a = 0.0;
  double nu = 0.0;
  int diameter = 0;
};

/// Fits nu by log-log regression of the worst-case volume profile, then sets
/// a to the exact worst-case residual so the defining inequality holds on
/// every tested (x,r).
inline ModerateGrowthReport moderate_growth(const DomainView& dom) {
  ModerateGrowthReport rep;
  const auto& g = dom.graph();
  double total = 0.0;
  for (Vertex x : dom.members()) total += g.pi(x);
  int diam = dom.inner_diameter();
  rep.diameter = diam;
  if (diam == 0) {
    rep.a = 1.0;
    rep.nu = 0.0;
    return rep;
  }
  // worst-case (over x) volume at each radius
  std::vector<double> vmin(diam + 1, std::numeric_limits<double>::infinity());
  for (Vertex x : dom.members()) {
    auto d = dom.inner_distances_from(x);
    std::vector<double> vol(diam + 1, 0.0);
    for (int i = 0; i < dom.size(); ++i)
      if (d[i] >= 0 && d[i] <= diam) vol[d[i]] += g.pi(dom.members()[i]);
    for (int r = 1; r <= diam; ++r) vol[r] += vol[r - 1];
    for (int r = 0; r <= diam; ++r) vmin[r] = std::min(vmin[r], vol[r]);
  }
  std::vector<double> xs, ys;
  for (int r = 1; r <= diam; ++r) {
    xs.push_back(std::log((1.0 + r) / diam));
    ys.push_back(std::log(vmin[r] / total));
  }
  if (xs.size() < 2) {
    rep.nu = 0.0;
  } else {
    rep.nu = std::max(0.0, fit_line(xs, ys).slope);
  }
  double worst = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= diam; ++r)
    worst = std::min(worst, (vmin[r] / total) / std::pow((1.0 + r) / diam, rep.nu));
  rep.a = worst;
  return rep;
}

// ---------------------------------------------------------------------------
// Weight regularity and control along local s-chains

struct WeightRegularityReport {
  double eta = 0.0;
  double regularity = 1.0;           // smallest A for (eta,A)-regular
  double omega = 0.0;                // fitted control exponent
  double a1 = 1.0;                   // exact envelope constant at that omega
  double psi_pi_doubling = 1.0;      // doubling constant of psi*pi on (U, d_U)
  bool doubling_sampled = false;
};

inline WeightRegularityReport weight_regularity(
    const DomainView& dom, const std::vector<double>& psi, double eta,
    const std::vector<std::pair<double, const WhitneyCover*>>& covers_for_control = {},
    const std::vector<double>& doubling_radii = {}) {
  for (double v : psi)
    if (!(v > 0.0)) throw GraphError("weight psi must be positive");
  WeightRegularityReport rep;
  rep.eta = eta;
  const auto& g = dom.graph();

  // edge condition
  for (auto& e : g.edges()) {
    if (!dom.contains(e.u) || !dom.contains(e.v)) continue;
    double a = psi[dom.local_index(e.u)], b = psi[dom.local_index(e.v)];
    rep.regularity = std::max({rep.regularity, a / b, b / a});
  }
  // ball condition over B(z,r) subset U with r <= 6 eta delta(z)
  for (Vertex z : dom.members()) {
    int rmax = static_cast<int>(std::floor(6.0 * eta * dom.delta(z)));
    for (int r = 1; r <= rmax; ++r) {
      auto b = ball(g, z, r);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      bool inside = true;
      for (Vertex v : b) {
        if (!dom.contains(v)) {
          inside = false;
          break;
        }
        lo = std::min(lo, psi[dom.local_index(v)]);
        hi = std::max(hi, psi[dom.local_index(v)]);
      }
      if (inside && lo > 0) rep.regularity = std::max(rep.regularity, hi / lo);
    }
  }

  // control envelope psi(x0) <= A1 s^omega psi(x_i) along stored local s-chains
  if (!covers_for_control.empty()) {
    std::map<double, double> worst_by_scale;  // s -> max ratio
    for (auto& [s, cover] : covers_for_control) {
      double worst = 1.0;
      for (std::size_t bi = 0; bi < cover->chains.size(); ++bi) {
        double psi0 = psi[dom.local_index(cover->balls[bi].center)];
        const auto& chain = cover->chains[bi];
        for (int ci = 0; ci <= cover->chain_stop[bi]; ++ci) {
          double psii = psi[dom.local_index(cover->balls[chain[ci]].center)];
          worst = std::max(worst, psi0 / psii);
        }
      }
      worst_by_scale[s] = worst;
    }
    std::vector<double> xs, ys;
    for (auto& [s, w] : worst_by_scale)
      if (s > 1.0) {
        xs.push_back(std::log(s));
        ys.push_back(std::log(w));
      }
    rep.omega = xs.size() >= 2 ? std::max(0.0, fit_line(xs, ys).slope) : 0.0;
    double a1 = 1.0;
    for (auto& [s, w] : worst_by_scale) a1 = std::max(a1, w / std::pow(std::max(s, 1.0), rep.omega));
    rep.a1 = a1;
  }

  // doubling of psi*pi over inner balls
  if (!doubling_radii.empty()) {
    std::vector<double> meas(dom.size());
    for (int i = 0; i < dom.size(); ++i) meas[i] = psi[i] * g.pi(dom.members()[i]);
    auto d = doubling_constant(dom, meas, doubling_radii);
    rep.psi_pi_doubling = d.constant;
  }
  return rep;
}

/// Seeded suite of test functions on U: standard normal values plus the
/// structured ones the inequality checks care about (coordinates, distance
/// to the boundary, eigenfunctions if supplied).
inline std::vector<std::vector<double>> test_function_suite(const DomainView& dom, int random_count,
                                                            std::uint64_t seed,
                                                            const std::vector<std::vector<double>>& extra = {}) {
  std::vector<std::vector<double>> funcs;
  const auto& g = dom.graph();
  for (int k = 0; k < random_count; ++k) {
    SplitRng rng(seed, static_cast<std::uint64_t>(k));
    std::vector<double> f(dom.size());
    for (auto& v : f) v = rng.next_normal();
    funcs.push_back(std::move(f));
  }
  if (g.has_coords()) {
    for (int axis = 0; axis < g.coord_dim(); ++axis) {
      std::vector<double> f(dom.size());
      for (int i = 0; i < dom.size(); ++i) f[i] = g.coord(dom.members()[i])[axis];
      funcs.push_back(std::move(f));
    }
  }
  {
    std::vector<double> f(dom.size());
    for (int i = 0; i < dom.size(); ++i) {
      double d = dom.delta(dom.members()[i]);
      f[i] = std::isfinite(d) ? d : 1.0;
    }
    funcs.push_back(std::move(f));
  }
  for (auto& f : extra) funcs.push_back(f);
  return funcs;
}

}  // namespace qsd

#endif
