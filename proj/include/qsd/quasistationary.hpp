#ifndef QSD_QUASISTATIONARY_HPP
#define QSD_QUASISTATIONARY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "qsd/geometry.hpp"
#include "qsd/graph.hpp"
#include "qsd/kernels.hpp"
#include "qsd/linalg.hpp"
#include "qsd/rng.hpp"

namespace qsd {

inline int kernel_local_index(const KernelMatrix& k, Vertex global) {
  const auto& d = k.domain();
  auto it = std::lower_bound(d.begin(), d.end(), global);
  if (it == d.end() || *it != global) throw GraphError("vertex not in kernel domain");
  return static_cast<int>(it - d.begin());
}

// ---------------------------------------------------------------------------
// Survival and conditional laws

/// P_x(tau_U > t) for t = 0..horizon via iterated substochastic matvec, with
/// a parallel log-domain track so long horizons never underflow.
struct SurvivalCurve {
  Vertex start = -1;
  std::vector<double> values;      // may underflow to 0 for very large t
  std::vector<double> log_values;  // always finite while mass remains
};

inline SurvivalCurve survival(const KernelMatrix& k, Vertex x, int horizon) {
  if (horizon < 0) throw GraphError("survival horizon must be >= 0");
  SurvivalCurve out;
  out.start = x;
  const int n = k.size();
  std::vector<double> v(n, 0.0), w;
  v[kernel_local_index(k, x)] = 1.0;
  double log_scale = 0.0;
  out.values.push_back(1.0);
  out.log_values.push_back(0.0);
  for (int t = 1; t <= horizon; ++t) {
    k.apply_left(v, w);
    double mass = std::accumulate(w.begin(), w.end(), 0.0);
    if (mass <= 0.0) {
      // absorbed with certainty (impossible for irreducible K_U, guarded anyway)
      out.values.resize(horizon + 1, 0.0);
      out.log_values.resize(horizon + 1, -std::numeric_limits<double>::infinity());
      return out;
    }
    if (mass < 1e-280) {
      for (auto& e : w) e /= mass;
      log_scale += std::log(mass);
      mass = 1.0;
    }
    v.swap(w);
    double logp = log_scale + std::log(mass);
    out.log_values.push_back(logp);
    out.values.push_back(std::exp(logp));
  }
  return out;
}

/// nu_x^t(y) = P_x(X_t = y | tau_U > t). Computed both by normalizing the
/// x-row of K_U^t and through the Doob-kernel expression; the two routes are
/// cross-asserted to 1e-10.
inline std::vector<double> conditional_law(const KernelMatrix& k, const KernelMatrix& doob,
                                           const SpectralPair& sp, Vertex x, int t) {
  if (t < 1) throw GraphError("conditional law needs t >= 1");
  const int n = k.size();
  std::vector<double> v(n, 0.0), w;
  int xl = kernel_local_index(k, x);
  v[xl] = 1.0;
  for (int s = 0; s < t; ++s) {
    k.apply_left(v, w);
    double mass = std::accumulate(w.begin(), w.end(), 0.0);
    if (mass <= 0.0) throw SolverError("survival vanished before t");
    if (mass < 1e-280)
      for (auto& e : w) e /= mass;
    v.swap(w);
  }
  double z = std::accumulate(v.begin(), v.end(), 0.0);
  std::vector<double> direct(n);
  for (int i = 0; i < n; ++i) direct[i] = v[i] / z;

  // Doob route: K_phi0^t(x,.) phi0^{-1} normalized
  std::vector<double> u(n, 0.0), u2;
  u[xl] = 1.0;
  for (int s = 0; s < t; ++s) {
    doob.apply_left(u, u2);
    u.swap(u2);
  }
  double z2 = 0.0;
  for (int i = 0; i < n; ++i) z2 += u[i] / sp.phi0[i];
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double alt = (u[i] / sp.phi0[i]) / z2;
    worst = std::max(worst, std::abs(alt - direct[i]));
  }
  if (worst > 1e-10) throw SolverError("conditional law routes disagree by " + std::to_string(worst));
  return direct;
}

/// The two quasi-stationary objects, clearly labeled: pi_phi0 (the invariant
/// measure of the Doob chain) and the conditional-law limit phi0*/sum phi0*.
struct QsdLimits {
  std::vector<double> pi_phi0;
  std::vector<double> conditional_limit;
};

inline QsdLimits qsd_limit(const SpectralPair& sp) {
  QsdLimits q;
  q.pi_phi0 = sp.pi_phi0;
  q.conditional_limit = sp.phi0_star;
  double z = std::accumulate(q.conditional_limit.begin(), q.conditional_limit.end(), 0.0);
  for (auto& v : q.conditional_limit) v /= z;
  return q;
}

// ---------------------------------------------------------------------------
// Convergence of the Doob chain

struct ConvergenceProfile {
  std::vector<int> times;
  std::vector<double> sup_ratio;  // max_{x,y} |K^t(x,y)/pi(y) - 1|
  double fitted_rate = 0.0;
  double spectral_rate = 0.0;     // -log max(beta1/beta0, |beta_min|/beta0) of the base kernel
};

/// Sup-ratio ergodicity profile of the Doob kernel over a time grid.
inline ConvergenceProfile convergence_profile(const KernelMatrix& doob, const SpectralPair& doob_sp,
                                              const std::vector<int>& times) {
  if (doob_sp.period != 1) throw SolverError("convergence profile requires an aperiodic kernel");
  ConvergenceProfile out;
  out.times = times;
  const int n = doob.size();
  auto pi = doob.stationary_weight();
  for (int t : times) {
    Eigen::MatrixXd kt = kernel_power(doob, doob_sp, t);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(kt(i, j) / pi[j] - 1.0));
    out.sup_ratio.push_back(worst);
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (out.sup_ratio[i] > 1e-12 && out.sup_ratio[i] < 0.5) {
      xs.push_back(times[i]);
      ys.push_back(std::log(out.sup_ratio[i]));
    }
  if (xs.size() >= 2) out.fitted_rate = -fit_line(xs, ys).slope;
  double b = std::max(doob_sp.beta1, std::abs(doob_sp.beta_min)) / doob_sp.beta0;
  out.spectral_rate = -std::log(b);
  return out;
}

struct NuControlReport {
  double epsilon = 0.0;
  int n_epsilon = -1;       // first time the sup-ratio for row x drops below eps
  double bound = 0.0;       // 2 eps / (1 - eps)
  double worst_deviation = 0.0;
  bool holds = false;
};

/// Verifies |(sum phi0*) nu_x^t(y) / phi0*(y) - 1| < 2eps/(1-eps) for all
/// t >= N_eps, where N_eps comes from the Doob kernel's row-x profile.
inline NuControlReport nu_control_check(const KernelMatrix& k, const KernelMatrix& doob,
                                        const SpectralPair& sp, const SpectralPair& doob_sp,
                                        double epsilon, Vertex x, int horizon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw GraphError("epsilon must lie in (0,1)");
  NuControlReport rep;
  rep.epsilon = epsilon;
  rep.bound = 2.0 * epsilon / (1.0 - epsilon);
  const int n = doob.size();
  auto pi = doob.stationary_weight();
  int xl = kernel_local_index(doob, x);

  // row-x deviation profile of the Doob kernel
  std::vector<double> row_dev(horizon + 1, 0.0);
  {
    std::vector<double> v(n, 0.0), w;
    v[xl] = 1.0;
    for (int t = 1; t <= horizon; ++t) {
      doob.apply_left(v, w);
      v.swap(w);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(v[i] / pi[i] - 1.0));
      row_dev[t] = worst;
    }
  }
  for (int t = horizon; t >= 1; --t) {
    if (row_dev[t] < epsilon)
      rep.n_epsilon = t;
    else
      break;
  }
  if (rep.n_epsilon < 0) return rep;  // never reached eps within horizon

  double zstar = std::accumulate(sp.phi0_star.begin(), sp.phi0_star.end(), 0.0);
  rep.holds = true;
  for (int t = rep.n_epsilon; t <= horizon; ++t) {
    auto nu = conditional_law(k, doob, sp, x, t);
    for (int i = 0; i < n; ++i) {
      double dev = std::abs(zstar * nu[i] / sp.phi0_star[i] - 1.0);
      rep.worst_deviation = std::max(rep.worst_deviation, dev);
      if (dev >= rep.bound) rep.holds = false;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Two-sided bound reports

struct BoundRow {
  Vertex x = -1, y = -1;
  double t = 0.0;
  double measured = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  std::string check_id;
  std::vector<BoundRow> rows;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  void add(BoundRow row) {
    min_ratio = std::min(min_ratio, row.ratio);
    max_ratio = std::max(max_ratio, row.ratio);
    rows.push_back(std::move(row));
  }
};

/// Exit-time two-sided bound: ratios P_x(tau>t) / (beta0^t phi0(x)/phi0(x_sqrt(t))).
inline BoundReport exit_time_bound_check(const KernelMatrix& k, const SpectralPair& sp,
                                         const std::function<Vertex(Vertex, double)>& xr,
                                         const std::vector<Vertex>& starts, const std::vector<int>& times) {
  BoundReport rep;
  rep.check_id = "exit_time";
  int horizon = *std::max_element(times.begin(), times.end());
  for (Vertex x : starts) {
    auto curve = survival(k, x, horizon);
    int xl = kernel_local_index(k, x);
    for (int t : times) {
      Vertex xs = xr(x, std::sqrt(static_cast<double>(t)));
      int xsl = kernel_local_index(k, xs);
      double log_env = t * std::log(sp.beta0) + std::log(sp.phi0[xl]) - std::log(sp.phi0[xsl]);
      double log_ratio = curve.log_values[t] - log_env;
      BoundRow row;
      row.x = x;
      row.t = t;
      row.measured = curve.log_values[t];
      row.envelope = log_env;
      row.ratio = std::exp(log_ratio);
      rep.add(std::move(row));
    }
  }
  return rep;
}

struct GaussianEnvelopeReport {
  double c_lower = 0.0, big_c_lower = 0.0;  // measured >= C1 exp(-c1 d^2/t)/denominator
  double c_upper = 0.0, big_c_upper = 0.0;  // measured <= C2 exp(-c2 d^2/t)/denominator
  long long triples = 0;
  long long skipped = 0;      // d_U(x,y) > t pairs, outside the envelope range
  bool lower_violations = false;
};

/// Two-sided Gaussian envelope for K_phi0^t(x,y)/(phi0(y)^2 pi(y)); the decay
/// constants are fitted on log-ratios and the multipliers are set to the
/// exact extreme residuals, so the fitted envelope has no violations by
/// construction and the report records the constants themselves.
inline GaussianEnvelopeReport gaussian_bound_check(
    const KernelMatrix& k, const KernelMatrix& doob, const SpectralPair& doob_sp, const SpectralPair& sp,
    const DomainView& dom, const std::function<Vertex(Vertex, double)>& xr,
    const std::vector<std::pair<Vertex, Vertex>>& pairs, const std::vector<int>& times) {
  GaussianEnvelopeReport rep;
  const auto& g = dom.graph();
  std::vector<double> us, logm_minus_logden;  // u = d_U^2/t
  for (int t : times) {
    Eigen::MatrixXd kt = kernel_power(doob, doob_sp, t);
    double sqt = std::sqrt(static_cast<double>(t));
    for (auto& [x, y] : pairs) {
      int du = dom.inner_distance(x, y);
      if (du > t) {
        ++rep.skipped;
        continue;
      }
      int xl = kernel_local_index(k, x), yl = kernel_local_index(k, y);
      double measured = kt(xl, yl) / (sp.phi0[yl] * sp.phi0[yl] * k.reversing_measure()[yl]);
      if (measured <= 0) continue;
      double vx = 0, vy = 0;
      for (Vertex v : ball(g, x, sqt)) vx += g.pi(v);
      for (Vertex v : ball(g, y, sqt)) vy += g.pi(v);
      Vertex xs = xr(x, sqt), ys = xr(y, sqt);
      double den = std::sqrt(vx * vy) * sp.phi0[kernel_local_index(k, xs)] * sp.phi0[kernel_local_index(k, ys)];
      us.push_back(static_cast<double>(du) * du / t);
      logm_minus_logden.push_back(std::log(measured) + std::log(den));
      ++rep.triples;
    }
  }
  if (us.size() < 2) throw SolverError("gaussian check needs at least two usable triples");
  auto fit = fit_line(us, logm_minus_logden);
  double c = std::max(0.0, -fit.slope);
  rep.c_lower = rep.c_upper = c;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < us.size(); ++i) {
    double resid = logm_minus_logden[i] + c * us[i];
    lo = std::min(lo, resid);
    hi = std::max(hi, resid);
  }
  rep.big_c_lower = std::exp(lo);
  rep.big_c_upper = std::exp(hi);
  for (std::size_t i = 0; i < us.size(); ++i)
    if (logm_minus_logden[i] + rep.c_lower * us[i] < lo - 1e-9) rep.lower_violations = true;
  return rep;
}

struct CarlesonReport {
  double c0 = 0.0;                 // max phi0(z)/phi0(x_r), z in B_U(x, r/2)
  Vertex worst_x = -1, worst_z = -1;
  double worst_r = 0.0;
  double phi0_regularity = 1.0;    // (1/8, .)-regularity constant of phi0
  double pi_phi0_doubling = 1.0;   // doubling constant of pi_phi0 over inner balls
};

inline CarlesonReport carleson_check(const DomainView& dom, const KernelMatrix& k, const SpectralPair& sp,
                                     const std::function<Vertex(Vertex, double)>& xr,
                                     const std::vector<double>& radii,
                                     const std::vector<double>& doubling_radii = {}) {
  CarlesonReport rep;
  for (Vertex x : dom.members()) {
    int xl = kernel_local_index(k, x);
    (void)xl;
    for (double r : radii) {
      Vertex anchor = xr(x, r);
      double ref = sp.phi0[kernel_local_index(k, anchor)];
      for (Vertex z : dom.inner_ball(x, r / 2.0)) {
        double ratio = sp.phi0[kernel_local_index(k, z)] / ref;
        if (ratio > rep.c0) {
          rep.c0 = ratio;
          rep.worst_x = x;
          rep.worst_z = z;
          rep.worst_r = r;
        }
      }
    }
  }
  // (1/8, A)-regularity of phi0 (edge + small-ball comparability)
  const auto& g = dom.graph();
  double eta = 1.0 / 8.0;
  for (auto& e : g.edges()) {
    if (!dom.contains(e.u) || !dom.contains(e.v)) continue;
    double a = sp.phi0[kernel_local_index(k, e.u)], b = sp.phi0[kernel_local_index(k, e.v)];
    rep.phi0_regularity = std::max({rep.phi0_regularity, a / b, b / a});
  }
  for (Vertex z : dom.members()) {
    int rmax = static_cast<int>(std::floor(6.0 * eta * dom.delta(z)));
    for (int r = 1; r <= rmax; ++r) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (Vertex v : ball(g, z, r)) {
        if (!dom.contains(v)) { lo = -1; break; }
        double p = sp.phi0[kernel_local_index(k, v)];
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
      if (lo > 0) rep.phi0_regularity = std::max(rep.phi0_regularity, hi / lo);
    }
  }
  if (!doubling_radii.empty()) {
    // pi_phi0 as a measure on local indices
    std::vector<double> meas(dom.size());
    for (int i = 0; i < dom.size(); ++i) meas[i] = sp.pi_phi0[i];
    double worst = 1.0;
    for (Vertex x : dom.members()) {
      auto d = dom.inner_distances_from(x);
      double maxr = *std::max_element(doubling_radii.begin(), doubling_radii.end());
      std::vector<double> vol(static_cast<std::size_t>(2 * maxr) + 2, 0.0);
      for (int i = 0; i < dom.size(); ++i)
        if (d[i] >= 0 && d[i] < static_cast<int>(vol.size())) vol[d[i]] += meas[i];
      for (std::size_t i = 1; i < vol.size(); ++i) vol[i] += vol[i - 1];
      for (double r : doubling_radii) {
        double v1 = vol[static_cast<std::size_t>(r)], v2 = vol[static_cast<std::size_t>(2 * r)];
        if (v1 > 0) worst = std::max(worst, v2 / v1);
      }
    }
    rep.pi_phi0_doubling = worst;
  }
  return rep;
}

struct HarmonicRatioReport {
  double c1 = 0.0;  // max over y,z in B_U(x,r/2) of phi0(y) h(z) / (phi0(z) h(y))
  double harmonicity_defect = 0.0;
};

/// phi0(y)/phi0(z) <= C1 h(y)/h(z) on the half ball, for h positive and
/// K_U-harmonic on B_U(x,r). The harmonicity precondition is verified to
/// 1e-10 before any ratio is formed.
inline HarmonicRatioReport harmonic_ratio_check(const DomainView& dom, const KernelMatrix& k,
                                                const SpectralPair& sp, Vertex x, double r,
                                                const std::vector<double>& h) {
  const int n = k.size();
  if (static_cast<int>(h.size()) != n) throw GraphError("h must be defined on U");
  for (double v : h)
    if (!(v > 0.0)) throw GraphError("h must be positive on U");
  auto bu = dom.inner_ball(x, r);
  if (static_cast<int>(bu.size()) == dom.size()) throw GraphError("harmonic comparison ball must be a proper subset of U");
  std::vector<double> kh;
  k.apply_right(h, kh);
  HarmonicRatioReport rep;
  for (Vertex v : bu) {
    int vl = kernel_local_index(k, v);
    rep.harmonicity_defect = std::max(rep.harmonicity_defect, std::abs(kh[vl] - h[vl]) / std::max(std::abs(h[vl]), 1e-30));
  }
  if (rep.harmonicity_defect > 1e-10)
    throw GraphError("h is not K_U-harmonic on the ball (defect " + std::to_string(rep.harmonicity_defect) + ")");
  auto half = dom.inner_ball(x, r / 2.0);
  for (Vertex y : half)
    for (Vertex z : half) {
      int yl = kernel_local_index(k, y), zl = kernel_local_index(k, z);
      rep.c1 = std::max(rep.c1, sp.phi0[yl] * h[zl] / (sp.phi0[zl] * h[yl]));
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo cross-validation

struct SimulationResult {
  double survival = 0.0;
  double std_error = 0.0;
  long long survivors = 0;
  long long trials = 0;
  std::vector<double> occupancy;  // conditional on survival, by local index
};

/// Samples killed trajectories. The RNG stream is keyed by (seed, trial), so
/// results are identical for any thread count.
inline SimulationResult simulate_killed(const KernelMatrix& k, Vertex x, int t, long long trials,
                                        std::uint64_t seed, int threads = 0) {
  if (trials < 1) throw GraphError("simulate_killed needs at least one trial");
  const int n = k.size();
  // per-row sampling tables: cumulative probabilities, survivor entries first
  std::vector<std::vector<double>> cum(n);
  std::vector<std::vector<int>> tgt(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (auto& [j, v] : k.row(i)) {
      acc += v;
      cum[i].push_back(acc);
      tgt[i].push_back(j);
    }
  }
  int xl = kernel_local_index(k, x);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = static_cast<int>(std::max<long long>(1, std::min<long long>(threads, trials)));

  std::vector<long long> alive_by_thread(threads, 0);
  std::vector<std::vector<long long>> occ_by_thread(threads, std::vector<long long>(n, 0));
  auto worker = [&](int w) {
    for (long long trial = w; trial < trials; trial += threads) {
      SplitRng rng(seed, static_cast<std::uint64_t>(trial));
      int cur = xl;
      bool alive = true;
      for (int step = 0; step < t; ++step) {
        double u = rng.next_double();
        const auto& c = cum[cur];
        auto it = std::lower_bound(c.begin(), c.end(), u);
        if (it == c.end()) {
          alive = false;  // fell into the kill deficiency
          break;
        }
        cur = tgt[cur][it - c.begin()];
      }
      if (alive) {
        ++alive_by_thread[w];
        ++occ_by_thread[w][cur];
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& th : pool) th.join();

  SimulationResult res;
  res.trials = trials;
  std::vector<long long> occ(n, 0);
  for (int w = 0; w < threads; ++w) {
    res.survivors += alive_by_thread[w];
    for (int i = 0; i < n; ++i) occ[i] += occ_by_thread[w][i];
  }
  res.survival = static_cast<double>(res.survivors) / trials;
  res.std_error = std::sqrt(std::max(res.survival * (1.0 - res.survival), 1e-300) / trials);
  res.occupancy.assign(n, 0.0);
  if (res.survivors > 0)
    for (int i = 0; i < n; ++i) res.occupancy[i] = static_cast<double>(occ[i]) / res.survivors;
  return res;
}

// ---------------------------------------------------------------------------
// Path-weight eigenvalue bound

struct PathBoundReport {
  double c_w = 0.0;          // 2d max_e w(e) sum_{x: gamma_x ∋ e} |gamma_x|_w
  double lower_bound = 0.0;  // 1/C_w <= 1 - beta0, certified
};

/// Exact evaluation of the weighted-path bound from per-vertex escape paths
/// (each path starts at x in U and ends at its first vertex outside U).
/// Requires pi == 1 and mu == 1/(2d) as in the lattice setting.
inline PathBoundReport eigenvalue_path_bound(const DomainView& dom,
                                             const std::vector<std::vector<Vertex>>& paths,
                                             const std::function<double(Vertex, Vertex)>& edge_weight) {
  const auto& g = dom.graph();
  if (!g.has_coords()) throw GraphError("path bound needs lattice coordinates");
  int d = g.coord_dim();
  double mu_expected = 1.0 / (2.0 * d);
  for (auto& e : g.edges())
    if (std::abs(e.mu - mu_expected) > 1e-12)
      throw GraphError("path bound is stated for mu = 1/(2d) with pi = 1");

  std::map<std::pair<Vertex, Vertex>, double> load;  // sum of |gamma_x|_w over paths through e
  auto key = [](Vertex a, Vertex b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
  for (const auto& path : paths) {
    if (path.size() < 2) continue;
    double len_w = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      len_w += 1.0 / edge_weight(path[i], path[i + 1]);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) load[key(path[i], path[i + 1])] += len_w;
  }
  PathBoundReport rep;
  for (auto& [e, l] : load) rep.c_w = std::max(rep.c_w, edge_weight(e.first, e.second) * l);
  rep.c_w *= 2.0 * d;
  rep.lower_bound = rep.c_w > 0 ? 1.0 / rep.c_w : 0.0;
  return rep;
}

/// Digital straight-line escape paths toward a coordinate target (typically
/// the origin pole), stopping at the first vertex outside U.
inline std::vector<std::vector<Vertex>> radial_escape_paths(const DomainView& dom,
                                                            const std::array<int, 3>& target = {0, 0, 0}) {
  const auto& g = dom.graph();
  if (!g.has_coords()) throw GraphError("radial paths need lattice coordinates");
  int d = g.coord_dim();
  std::vector<std::vector<Vertex>> paths;
  for (Vertex x : dom.members()) {
    auto c = g.coord(x);
    long long total = 0;
    for (int a = 0; a < d; ++a) total += std::abs(c[a] - target[a]);
    std::vector<Vertex> path{x};
    auto cur = c;
    bool escaped = false;
    for (long long step = 1; step <= total && !escaped; ++step) {
      // aim at the straight segment: target point after `step` unit moves
      double frac = static_cast<double>(step) / static_cast<double>(total);
      int axis = -1;
      double worst = -1.0;
      for (int a = 0; a < d; ++a) {
        double want = c[a] + (target[a] - c[a]) * frac;
        double err = std::abs(cur[a] - want);
        bool movable = cur[a] != target[a];
        if (movable && err > worst) {
          worst = err;
          axis = a;
        }
      }
      if (axis < 0) break;
      cur[axis] += target[axis] > cur[axis] ? 1 : -1;
      Vertex v = g.vertex_at(cur);
      if (v < 0) break;  // left the ambient graph; path unusable
      path.push_back(v);
      if (!dom.contains(v)) escaped = true;
    }
    if (escaped) paths.push_back(std::move(path));
  }
  return paths;
}

/// Default edge weight for the path bound: Euclidean distance of the edge to
/// the target raised to d-1 (floored at 1).
inline std::function<double(Vertex, Vertex)> radial_edge_weight(const WeightedGraph& g,
                                                                const std::array<int, 3>& target = {0, 0, 0}) {
  int d = g.coord_dim();
  return [&g, target, d](Vertex a, Vertex b) {
    auto ca = g.coord(a), cb = g.coord(b);
    double da = 0, db = 0;
    for (int i = 0; i < 3; ++i) {
      da += static_cast<double>(ca[i] - target[i]) * (ca[i] - target[i]);
      db += static_cast<double>(cb[i] - target[i]) * (cb[i] - target[i]);
    }
    double dist = std::min(std::sqrt(da), std::sqrt(db));
    return std::pow(std::max(1.0, dist), d - 1);
  };
}

}  // namespace qsd

#endif
