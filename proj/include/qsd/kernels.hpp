#ifndef QSD_KERNELS_HPP
#define QSD_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "qsd/graph.hpp"
#include "qsd/linalg.hpp"

namespace qsd {

enum class KernelKind { Global, Neumann, Dirichlet, Metropolis, Doob };

inline const char* kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::Global: return "global";
    case KernelKind::Neumann: return "neumann";
    case KernelKind::Dirichlet: return "dirichlet";
    case KernelKind::Metropolis: return "metropolis";
    case KernelKind::Doob: return "doob";
  }
  return "?";
}

/// Sparse row-major substochastic/stochastic kernel together with its
/// reversing measure. `domain` maps local row/col indices to global vertex
/// ids. row_deficiency(x) = 1 - row sum is the per-step kill probability.
class KernelMatrix {
 public:
  KernelMatrix(KernelKind kind, std::vector<Vertex> domain, std::vector<double> reversing)
      : kind_(kind), domain_(std::move(domain)), reversing_(std::move(reversing)) {
    n_ = static_cast<int>(domain_.size());
    rows_.assign(n_, {});
  }

  void add_entry(int i, int j, double value) {
    if (value != 0.0) rows_[i].push_back({j, value});
  }

  void finalize() {
    deficiency_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      std::sort(rows_[i].begin(), rows_[i].end());
      double s = 0.0;
      for (auto& [j, v] : rows_[i]) s += v;
      deficiency_[i] = 1.0 - s;
      if (deficiency_[i] < 0 && deficiency_[i] > -1e-13) deficiency_[i] = 0.0;
    }
  }

  KernelKind kind() const { return kind_; }
  int size() const { return n_; }
  const std::vector<Vertex>& domain() const { return domain_; }
  const std::vector<double>& reversing_measure() const { return reversing_; }
  const std::vector<std::pair<int, double>>& row(int i) const { return rows_[i]; }
  double row_deficiency(int i) const { return deficiency_[i]; }

  double entry(int i, int j) const {
    for (auto& [k, v] : rows_[i])
      if (k == j) return v;
    return 0.0;
  }

  /// Probability-normalized reversing measure.
  std::vector<double> stationary_weight() const {
    double z = std::accumulate(reversing_.begin(), reversing_.end(), 0.0);
    std::vector<double> out(reversing_);
    for (double& v : out) v /= z;
    return out;
  }

  /// y = x K (row vector times kernel).
  void apply_left(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      if (x[i] == 0.0) continue;
      for (auto& [j, v] : rows_[i]) y[j] += x[i] * v;
    }
  }

  /// y = K x (kernel times column vector).
  void apply_right(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (auto& [j, v] : rows_[i]) s += v * x[j];
      y[i] = s;
    }
  }

  /// Max over rows of |sum_y m(x)K(x,y) - m(y)K(y,x)| scaled by entries;
  /// exact zero for kernels built from symmetric weights.
  double reversibility_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
      for (auto& [j, v] : rows_[i]) {
        double other = entry(j, i);
        double lhs = reversing_[i] * v, rhs = reversing_[j] * other;
        double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
      }
    return worst;
  }

  /// Period of the kernel's support graph (gcd of closed-walk lengths).
  int period() const {
    std::vector<int> depth(n_, -1);
    std::queue<int> q;
    depth[0] = 0;
    q.push(0);
    long long g = 0;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (auto& [y, v] : rows_[x]) {
        if (depth[y] < 0) {
          depth[y] = depth[x] + 1;
          q.push(y);
        } else {
          g = std::gcd(g, static_cast<long long>(std::abs(depth[x] + 1 - depth[y])));
        }
      }
    }
    return g == 0 ? 0 : static_cast<int>(g);
  }

  bool irreducible() const {
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (auto& [y, v] : rows_[x])
        if (!seen[y]) {
          seen[y] = 1;
          ++count;
          q.push(y);
        }
    }
    // symmetric support (reversible), so forward reachability suffices
    return count == n_;
  }

  Eigen::SparseMatrix<double> symmetrized() const {
    // A = D^{1/2} K D^{-1/2}, D = diag(reversing measure)
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n_; ++i)
      for (auto& [j, v] : rows_[i])
        trip.emplace_back(i, j, v * std::sqrt(reversing_[i] / reversing_[j]));
    Eigen::SparseMatrix<double> a(n_, n_);
    a.setFromTriplets(trip.begin(), trip.end());
    // enforce exact symmetry against roundoff
    Eigen::SparseMatrix<double> at = a.transpose();
    a = 0.5 * (a + at);
    return a;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (auto& [j, v] : rows_[i]) m(i, j) = v;
    return m;
  }

 private:
  KernelKind kind_;
  int n_ = 0;
  std::vector<Vertex> domain_;
  std::vector<double> reversing_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> deficiency_;
};

// ---------------------------------------------------------------------------
// Kernel constructors

/// Global kernel K_mu on all of X: off-diagonal mu_xy/pi(x), holding
/// 1 - sum_y mu_xy/pi(x). Requires mu subordinated to pi.
inline KernelMatrix global_kernel(const WeightedGraph& g) {
  auto diag = weight_diagnostics(g);
  if (!diag.subordinated)
    throw GraphError("mu is not subordinated to pi (worst vertex " + std::to_string(diag.worst_vertex) +
                     ", ratio " + std::to_string(diag.worst_ratio) + ")");
  std::vector<Vertex> dom(g.size());
  std::iota(dom.begin(), dom.end(), 0);
  KernelMatrix k(KernelKind::Global, dom, g.pi());
  for (Vertex x = 0; x < g.size(); ++x) {
    double hold = 1.0 - g.mu_row_sum(x) / g.pi(x);
    k.add_entry(x, x, hold);
    for (auto& [y, w] : g.neighbors(x)) k.add_entry(x, y, w / g.pi(x));
  }
  k.finalize();
  return k;
}

/// Neumann kernel on U: edges leaving U are converted into extra holding.
inline KernelMatrix neumann_kernel(const DomainView& dom) {
  const auto& g = dom.graph();
  std::vector<double> rev;
  for (Vertex x : dom.members()) rev.push_back(g.pi(x));
  KernelMatrix k(KernelKind::Neumann, dom.members(), rev);
  for (int i = 0; i < dom.size(); ++i) {
    Vertex x = dom.members()[i];
    double inside = 0.0;
    for (auto& [y, w] : g.neighbors(x))
      if (dom.contains(y)) {
        k.add_entry(i, dom.local_index(y), w / g.pi(x));
        inside += w;
      }
    k.add_entry(i, i, 1.0 - inside / g.pi(x));
  }
  k.finalize();
  return k;
}

/// Dirichlet (killed) kernel K_U = 1_U K 1_U. Substochastic: the diagonal
/// keeps the global holding, rows at the inner boundary sum to < 1.
inline KernelMatrix dirichlet_kernel(const DomainView& dom) {
  if (!dom.has_boundary())
    throw GraphError("dirichlet kernel requires a nonempty exterior boundary");
  const auto& g = dom.graph();
  auto diag = weight_diagnostics(g);
  if (!diag.subordinated) throw GraphError("mu is not subordinated to pi");
  std::vector<double> rev;
  for (Vertex x : dom.members()) rev.push_back(g.pi(x));
  KernelMatrix k(KernelKind::Dirichlet, dom.members(), rev);
  for (int i = 0; i < dom.size(); ++i) {
    Vertex x = dom.members()[i];
    double hold = 1.0 - g.mu_row_sum(x) / g.pi(x);
    if (hold > 1e-15) k.add_entry(i, i, hold);
    for (auto& [y, w] : g.neighbors(x))
      if (dom.contains(y)) k.add_entry(i, dom.local_index(y), w / g.pi(x));
  }
  k.finalize();
  if (!k.irreducible()) throw GraphError("killed kernel is reducible on U");
  return k;
}

enum class MetropolisRule { Min, Max, Geometric };

/// Metropolis-type kernel on U with target weight psi: pi~ = psi*pi,
/// mu~_xy = mu_xy * h(psi(x), psi(y)). The min rule is the classical
/// Metropolis chain and is always subordinated.
inline KernelMatrix metropolis_kernel(const DomainView& dom, const std::vector<double>& psi,
                                      MetropolisRule rule = MetropolisRule::Min) {
  const auto& g = dom.graph();
  if (static_cast<int>(psi.size()) != dom.size()) throw GraphError("psi must be defined on U");
  for (double v : psi)
    if (!(v > 0.0)) throw GraphError("psi must be positive");
  auto h = [&](double a, double b) {
    switch (rule) {
      case MetropolisRule::Min: return std::min(a, b);
      case MetropolisRule::Max: return std::max(a, b);
      case MetropolisRule::Geometric: return std::sqrt(a * b);
    }
    return std::min(a, b);
  };
  std::vector<double> rev(dom.size());
  for (int i = 0; i < dom.size(); ++i) rev[i] = psi[i] * g.pi(dom.members()[i]);
  // subordination check for the tilted weights
  for (int i = 0; i < dom.size(); ++i) {
    Vertex x = dom.members()[i];
    double s = 0.0;
    for (auto& [y, w] : g.neighbors(x))
      if (dom.contains(y)) s += w * h(psi[i], psi[dom.local_index(y)]);
    if (s > rev[i] * (1 + 1e-12))
      throw GraphError("tilted weights not subordinated under the chosen rule (vertex " +
                       std::to_string(x) + ")");
  }
  KernelMatrix k(KernelKind::Metropolis, dom.members(), rev);
  for (int i = 0; i < dom.size(); ++i) {
    Vertex x = dom.members()[i];
    double inside = 0.0;
    for (auto& [y, w] : g.neighbors(x))
      if (dom.contains(y)) {
        double m = w * h(psi[i], psi[dom.local_index(y)]);
        k.add_entry(i, dom.local_index(y), m / rev[i]);
        inside += m;
      }
    k.add_entry(i, i, 1.0 - inside / rev[i]);
  }
  k.finalize();
  return k;
}

// ---------------------------------------------------------------------------
// Spectral data

/// Perron data of a reversible (sub)stochastic kernel: beta0 with its positive
/// right eigenfunction phi0 normalized by pi_U(phi0^2) = 1, the left
/// eigenfunction phi0* = phi0 * pi_U, the second largest and smallest
/// eigenvalues, and the Doob invariant measure pi_phi0 = phi0^2 pi_U.
struct SpectralPair {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta_min = 0.0;
  std::vector<double> phi0;
  std::vector<double> phi0_star;
  std::vector<double> pi_phi0;
  double residual = 0.0;
  int period = 1;
  bool dense_path = true;
  std::optional<SymEigen> full_spectrum;  // kept on the dense path
  std::vector<double> pi_u;               // normalized reversing measure
};

struct SolverOptions {
  int dense_threshold = 4000;
  double tol = 1e-13;
  int max_iter = 200000;
};

inline SpectralPair perron_pair(const KernelMatrix& k, const SolverOptions& opt = {}) {
  if (!k.irreducible()) throw SolverError("kernel is reducible; Perron data undefined");
  const int n = k.size();
  auto a = k.symmetrized();
  SpectralPair sp;
  sp.period = k.period();
  sp.pi_u = k.stationary_weight();

  Eigen::VectorXd u0;
  if (n <= opt.dense_threshold) {
    SymEigen se = dense_sym_eig(Eigen::MatrixXd(a));
    sp.beta0 = se.values[n - 1];
    sp.beta1 = n >= 2 ? se.values[n - 2] : se.values[n - 1];
    sp.beta_min = se.values[0];
    u0 = se.vectors.col(n - 1);
    sp.full_spectrum = std::move(se);
    sp.dense_path = true;
  } else {
    auto top = sparse_extremal_eigenpair(a, false, {}, opt.tol, opt.max_iter);
    sp.beta0 = top.value;
    u0 = top.vector;
    auto second = sparse_extremal_eigenpair(a, false, {top.vector}, opt.tol, opt.max_iter);
    sp.beta1 = second.value;
    auto bottom = sparse_extremal_eigenpair(a, true, {}, opt.tol, opt.max_iter);
    sp.beta_min = bottom.value;
    sp.dense_path = false;
  }

  // phi0 = D^{-1/2} u0, oriented positive, normalized pi_U(phi0^2) = 1
  if (u0.sum() < 0) u0 = -u0;
  const auto& m = k.reversing_measure();
  sp.phi0.resize(n);
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    sp.phi0[i] = u0[i] / std::sqrt(m[i]);
    norm2 += sp.phi0[i] * sp.phi0[i] * sp.pi_u[i];
  }
  double scale = 1.0 / std::sqrt(norm2);
  for (double& v : sp.phi0) v *= scale;
  for (double v : sp.phi0)
    if (!(v > 0.0)) throw SolverError("Perron eigenfunction is not strictly positive");

  sp.phi0_star.resize(n);
  sp.pi_phi0.resize(n);
  for (int i = 0; i < n; ++i) {
    sp.phi0_star[i] = sp.phi0[i] * sp.pi_u[i];
    sp.pi_phi0[i] = sp.phi0[i] * sp.phi0[i] * sp.pi_u[i];
  }

  // residual ||K phi0 - beta0 phi0||_inf / ||phi0||_inf
  std::vector<double> kphi;
  k.apply_right(sp.phi0, kphi);
  double worst = 0.0, amp = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(kphi[i] - sp.beta0 * sp.phi0[i]));
    amp = std::max(amp, std::abs(sp.phi0[i]));
  }
  sp.residual = worst / amp;
  return sp;
}

/// Doob transform K_phi0(x,y) = beta0^{-1} phi0(x)^{-1} K_U(x,y) phi0(y).
/// Also realized through the weight pair (mu~, pi~) = (beta0^{-1} phi0 phi0 mu,
/// phi0^2 pi|_U); the two constructions are asserted equal.
inline KernelMatrix doob_transform(const KernelMatrix& k, const SpectralPair& sp) {
  const int n = k.size();
  std::vector<double> rev(n);
  const auto& m = k.reversing_measure();
  for (int i = 0; i < n; ++i) rev[i] = sp.phi0[i] * sp.phi0[i] * m[i];
  KernelMatrix out(KernelKind::Doob, k.domain(), rev);
  for (int i = 0; i < n; ++i)
    for (auto& [j, v] : k.row(i)) {
      double direct = v * sp.phi0[j] / (sp.beta0 * sp.phi0[i]);
      // weight-pair route: mu~_ij / pi~(i) with mu~_ij = beta0^{-1} phi_i phi_j mu_ij
      double mu_ij = v * m[i];  // mu recovered from the kernel entry
      double via_weights = sp.phi0[i] * sp.phi0[j] * mu_ij / (sp.beta0 * rev[i]);
      if (std::abs(direct - via_weights) > 1e-12 * std::max(1.0, std::abs(direct)))
        throw SolverError("Doob kernel constructions disagree");
      out.add_entry(i, j, direct);
    }
  out.finalize();
  return out;
}

/// Ordered spectrum plus the gap report used by the scaling checks.
struct SpectrumSummary {
  std::vector<double> eigenvalues;  // descending
  double beta0 = 0, beta1 = 0, beta_min = 0;
  double gap0 = 0;       // 1 - beta0
  double gap01 = 0;      // beta0 - beta1
  double gap_low = 0;    // 1 + beta_min
  double scaled_gap0 = 0, scaled_gap01 = 0, scaled_gap_low = 0;  // times R^theta
};

inline SpectrumSummary spectrum_summary(const KernelMatrix& k, double radius = 0.0, double theta = 2.0,
                                        const SolverOptions& opt = {}) {
  SpectrumSummary s;
  const int n = k.size();
  if (n <= opt.dense_threshold) {
    auto se = dense_sym_eig(Eigen::MatrixXd(k.symmetrized()));
    s.eigenvalues.assign(se.values.data(), se.values.data() + n);
    std::reverse(s.eigenvalues.begin(), s.eigenvalues.end());
  } else {
    auto sp = perron_pair(k, opt);
    s.eigenvalues = {sp.beta0, sp.beta1, sp.beta_min};
  }
  s.beta0 = s.eigenvalues.front();
  s.beta1 = n >= 2 ? s.eigenvalues[1] : s.eigenvalues[0];
  s.beta_min = s.eigenvalues.back();
  s.gap0 = 1 - s.beta0;
  s.gap01 = s.beta0 - s.beta1;
  s.gap_low = 1 + s.beta_min;
  if (radius > 0) {
    double rt = std::pow(radius, theta);
    s.scaled_gap0 = s.gap0 * rt;
    s.scaled_gap01 = s.gap01 * rt;
    s.scaled_gap_low = s.gap_low * rt;
  }
  return s;
}

/// K^t as a dense matrix. On the dense path the stored eigendecomposition
/// turns this into one triple product; otherwise t sparse sweeps.
inline Eigen::MatrixXd kernel_power(const KernelMatrix& k, const SpectralPair& sp, int t) {
  const int n = k.size();
  const auto& m = k.reversing_measure();
  if (sp.full_spectrum) {
    const auto& se = *sp.full_spectrum;
    Eigen::VectorXd lt = se.values.array().pow(static_cast<double>(t));
    Eigen::MatrixXd at = se.vectors * lt.asDiagonal() * se.vectors.transpose();
    // K^t = D^{-1/2} A^t D^{1/2}
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = at(i, j) * std::sqrt(m[j] / m[i]);
    return out;
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd dense = k.dense();
  for (int step = 0; step < t; ++step) out = dense * out;
  return out;
}

}  // namespace qsd

#endif
