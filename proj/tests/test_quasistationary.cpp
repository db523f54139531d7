#include <catch2/catch_amalgamated.hpp>

#include "qsd/families.hpp"
#include "qsd/quasistationary.hpp"
#include "oracles.hpp"

using namespace qsd;
using Catch::Approx;

namespace {

struct FivePath {
  FamilyInstance inst;
  KernelMatrix k;
  FivePath() : inst(make_five_path()), k(dirichlet_kernel(inst.domain)) {}
};

}  // namespace

TEST_CASE("survival on the five-path") {
  FivePath fp;
  auto curve = survival(fp.k, 2, 6);
  REQUIRE(curve.values[0] == 1.0);
  REQUIRE(curve.values[1] == Approx(1.0));
  REQUIRE(curve.values[2] == Approx(0.5));
  // nonincreasing
  for (std::size_t t = 1; t < curve.values.size(); ++t) REQUIRE(curve.values[t] <= curve.values[t - 1]);
  // asymptotic slope log beta0
  auto sp = perron_pair(fp.k);
  auto longcurve = survival(fp.k, 2, 400);
  double slope = (longcurve.log_values[400] - longcurve.log_values[300]) / 100.0;
  REQUIRE(slope == Approx(std::log(sp.beta0)).epsilon(1e-6));
}

TEST_CASE("log-domain survival survives deep horizons") {
  FivePath fp;
  auto curve = survival(fp.k, 2, 3000);
  REQUIRE(std::isfinite(curve.log_values[3000]));
  REQUIRE(curve.log_values[3000] < -500.0);
  REQUIRE(curve.values[3000] == 0.0);  // double underflow is expected and harmless
}

TEST_CASE("conditional law routes agree and match hand values") {
  FivePath fp;
  auto sp = perron_pair(fp.k);
  auto kd = doob_transform(fp.k, sp);
  auto nu1 = conditional_law(fp.k, kd, sp, 2, 1);
  REQUIRE(nu1[0] == Approx(0.5));
  REQUIRE(nu1[1] == Approx(0.0).margin(1e-15));
  REQUIRE(nu1[2] == Approx(0.5));
}

TEST_CASE("qsd limits on the lazified five-path") {
  auto inst = make_five_path(true);
  auto k = dirichlet_kernel(inst.domain);
  auto sp = perron_pair(k);
  auto kd = doob_transform(k, sp);
  auto limits = qsd_limit(sp);
  // conditional limit proportional to phi0 under uniform pi: (0.2929, 0.4142, 0.2929)
  REQUIRE(limits.conditional_limit[0] == Approx(0.29289321881345).epsilon(1e-10));
  REQUIRE(limits.conditional_limit[1] == Approx(0.41421356237309).epsilon(1e-10));
  REQUIRE(limits.conditional_limit[2] == Approx(0.29289321881345).epsilon(1e-10));
  // nu_x^t converges to it
  auto nu = conditional_law(k, kd, sp, 1, 60);
  for (int i = 0; i < 3; ++i) REQUIRE(nu[i] == Approx(limits.conditional_limit[i]).margin(1e-8));
  // pi_phi0 differs from the conditional limit (the two QSD forms)
  REQUIRE(limits.pi_phi0[1] == Approx(0.5).epsilon(1e-10));
}

TEST_CASE("convergence profile matches the spectral rate") {
  auto inst = make_cone45(8);
  auto k = dirichlet_kernel(inst.domain);
  auto sp = perron_pair(k);
  auto kd = doob_transform(k, sp);
  auto spd = perron_pair(kd);
  std::vector<int> times;
  for (int t = 64; t <= 400; t += 24) times.push_back(t);
  auto prof = convergence_profile(kd, spd, times);
  REQUIRE(prof.fitted_rate == Approx(prof.spectral_rate).epsilon(0.02));
  // t = 0 sup ratio would be 1/min pi - 1; check the defining quantity at t member
  REQUIRE(prof.sup_ratio.front() > prof.sup_ratio.back());
}

TEST_CASE("profile refuses periodic kernels") {
  FivePath fp;
  auto sp = perron_pair(fp.k);
  auto kd = doob_transform(fp.k, sp);
  auto spd = perron_pair(kd);
  REQUIRE(spd.period == 2);
  REQUIRE_THROWS_AS(convergence_profile(kd, spd, {4, 8}), SolverError);
}

TEST_CASE("nu control bound") {
  SECTION("epsilon = 0.5 gives the trivially wide bound 2") {
    auto inst = make_five_path(true);
    auto k = dirichlet_kernel(inst.domain);
    auto sp = perron_pair(k);
    auto kd = doob_transform(k, sp);
    auto spd = perron_pair(kd);
    auto rep = nu_control_check(k, kd, sp, spd, 0.5, 1, 200);
    REQUIRE(rep.bound == Approx(2.0));
    REQUIRE(rep.n_epsilon >= 1);
    REQUIRE(rep.holds);
  }

  SECTION("epsilon = 0.01 on the lazified five-path") {
    auto inst = make_five_path(true);
    auto k = dirichlet_kernel(inst.domain);
    auto sp = perron_pair(k);
    auto kd = doob_transform(k, sp);
    auto spd = perron_pair(kd);
    auto rep = nu_control_check(k, kd, sp, spd, 0.01, 1, 400);
    REQUIRE(rep.bound == Approx(0.02020202).epsilon(1e-5));
    REQUIRE(rep.n_epsilon > 0);
    REQUIRE(rep.holds);
    REQUIRE(rep.worst_deviation < rep.bound);
  }

  SECTION("cone N = 10 with epsilon = 0.1") {
    auto inst = make_cone45(10);
    auto k = dirichlet_kernel(inst.domain);
    auto sp = perron_pair(k);
    auto kd = doob_transform(k, sp);
    auto spd = perron_pair(kd);
    auto rep = nu_control_check(k, kd, sp, spd, 0.1, inst.domain.members()[3], 1200);
    REQUIRE(rep.bound == Approx(2.0 * 0.1 / 0.9));
    REQUIRE(rep.n_epsilon > 0);
    REQUIRE(rep.holds);
  }
}

TEST_CASE("exit-time two-sided bound on the diamond") {
  int N = 10;
  auto inst = make_diamond_ball(N);
  const auto& dom = inst.domain;
  auto k = dirichlet_kernel(dom);
  auto sp = perron_pair(k);
  auto cert = john_feasible(dom, dom.center(), 1.0, 4 * dom.internal_radius() + 8);
  XrMap xr(dom, cert);

  std::vector<Vertex> starts;
  for (int p : {0, N / 4, N / 2, 3 * N / 4}) starts.push_back(inst.graph->vertex_at({p, 0, 0}));
  std::vector<int> times{1, N, N * N / 4, N * N};
  auto rep = exit_time_bound_check(k, sp, [&](Vertex v, double r) { return xr(v, r); }, starts, times);
  REQUIRE(rep.min_ratio > 0.05);
  REQUIRE(rep.max_ratio / rep.min_ratio < 100.0);

  SECTION("center start at small t stays near beta0^-t-normalized survival") {
    auto rep_o = exit_time_bound_check(k, sp, [&](Vertex v, double r) { return xr(v, r); },
                                       {dom.center()}, {1, 2});
    REQUIRE(rep_o.min_ratio > 0.5);
    REQUIRE(rep_o.max_ratio < 2.0);
  }

  SECTION("worked closed-form survival approximation") {
    // P_(p,0)(tau > t) ~ ((N-p)/(N-p+sqrt t))^2 within a constant window
    double lo = 1e300, hi = 0;
    for (int p : {0, N / 4, N / 2, 3 * N / 4})
      for (int t : {1, N, N * N / 4, N * N}) {
        auto curve = survival(k, inst.graph->vertex_at({p, 0, 0}), t);
        double approx_val = std::pow((N - p) / (N - p + std::sqrt(static_cast<double>(t))), 2.0);
        double ratio = curve.values[t] / approx_val;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    REQUIRE(hi / lo < 10.0);
  }
}

TEST_CASE("gaussian envelope on the diamond") {
  int N = 10;
  auto inst = make_diamond_ball(N);
  const auto& dom = inst.domain;
  auto k = dirichlet_kernel(dom);
  auto sp = perron_pair(k);
  auto kd = doob_transform(k, sp);
  auto spd = perron_pair(kd);
  auto cert = john_feasible(dom, dom.center(), 1.0, 4 * dom.internal_radius() + 8);
  XrMap xr(dom, cert);

  SplitRng rng(7, 0);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (int i = 0; i < 60; ++i)
    pairs.push_back({dom.members()[rng.next_u32_below(dom.size())],
                     dom.members()[rng.next_u32_below(dom.size())]});
  auto rep = gaussian_bound_check(k, kd, spd, sp, dom, [&](Vertex v, double r) { return xr(v, r); },
                                  pairs, {4, 25, 100});
  REQUIRE(rep.triples > 40);
  REQUIRE(rep.c_upper > 0.0);
  REQUIRE(!rep.lower_violations);
  REQUIRE(rep.big_c_upper >= rep.big_c_lower);

  SECTION("on-diagonal kernel mass at t = 2 is positive") {
    Eigen::MatrixXd k2 = kernel_power(kd, spd, 2);
    for (int i = 0; i < kd.size(); ++i) REQUIRE(k2(i, i) > 0.0);
  }
}

TEST_CASE("carleson scan on the cone is stable") {
  std::vector<double> c0s;
  for (int N : {8, 12, 16}) {
    auto inst = make_cone45(N);
    const auto& dom = inst.domain;
    auto k = dirichlet_kernel(dom);
    auto sp = perron_pair(k);
    auto cert = john_feasible(dom, dom.center(), 1.0 / 3.0, 4 * dom.internal_radius() + 8);
    XrMap xr(dom, cert);
    std::vector<double> radii;
    for (double r = 1; r <= 2 * N; r *= 2) radii.push_back(r);
    auto rep = carleson_check(dom, k, sp, [&](Vertex v, double r) { return xr(v, r); }, radii);
    c0s.push_back(rep.c0);
    REQUIRE(rep.c0 >= 1.0);
  }
  for (std::size_t i = 1; i < c0s.size(); ++i) {
    double ratio = c0s[i] / c0s[i - 1];
    REQUIRE(ratio > 0.5);
    REQUIRE(ratio < 2.0);
  }
}

TEST_CASE("carleson ratio is 1 for r < 1") {
  auto inst = make_cone45(6);
  const auto& dom = inst.domain;
  auto k = dirichlet_kernel(dom);
  auto sp = perron_pair(k);
  auto cert = john_feasible(dom, dom.center(), 1.0 / 3.0, 64);
  XrMap xr(dom, cert);
  auto rep = carleson_check(dom, k, sp, [&](Vertex v, double r) { return xr(v, r); }, {0.5});
  REQUIRE(rep.c0 == Approx(1.0));
}

TEST_CASE("harmonic ratio check") {
  // half-space slice: big box, ball near the flat side, h = distance to it
  auto inst = make_box(8, 2);
  const auto& dom = inst.domain;
  auto k = dirichlet_kernel(dom);
  auto sp = perron_pair(k);
  std::vector<double> h(dom.size());
  for (int i = 0; i < dom.size(); ++i)
    h[i] = inst.graph->coord(dom.members()[i])[0] + 9.0;  // distance to the x = -9 wall
  Vertex c = inst.graph->vertex_at({0, 0, 0});

  SECTION("a linear coordinate is harmonic away from the boundary") {
    auto rep = harmonic_ratio_check(dom, k, sp, c, 6.0, h);
    REQUIRE(rep.harmonicity_defect < 1e-12);
    REQUIRE(rep.c1 >= 1.0);
    REQUIRE(rep.c1 < 50.0);
  }

  SECTION("phi0 itself is not harmonic (it is a beta0-eigenfunction)") {
    REQUIRE_THROWS_AS(harmonic_ratio_check(dom, k, sp, c, 6.0, sp.phi0), GraphError);
  }

  SECTION("nonpositive h is rejected") {
    std::vector<double> bad(dom.size(), -1.0);
    REQUIRE_THROWS_AS(harmonic_ratio_check(dom, k, sp, c, 4.0, bad), GraphError);
  }
}

TEST_CASE("harmonic comparison against the lattice Green function") {
  // h(x) = u(0) - u(x), with u the grounded Poisson solve of the lazy walk
  // on a padded box, is harmonic away from the origin and grows like
  // log(1+|x|); comparing the punctured ball's phi0 against it reproduces
  // the log|x|/log N profile with an O(1) constant.
  int N = 12;
  auto inst = make_punctured_ball(N, 2);
  auto k = dirichlet_kernel(inst.domain);
  auto sp = perron_pair(k);

  int B = 2 * N;
  auto box = lattice_box({2 * B, 2 * B}, 0.125);  // coords shifted by (B,B)
  auto kb = global_kernel(*box);
  const int n = box->size();
  std::vector<Eigen::Triplet<double>> trip;
  Vertex ground = box->vertex_at({0, 0, 0});
  Vertex origin = box->vertex_at({B, B, 0});
  for (int i = 0; i < n; ++i) {
    if (i == ground) {
      trip.emplace_back(i, i, 1.0);
      continue;
    }
    trip.emplace_back(i, i, 1.0);
    for (auto& [j, v] : kb.row(i)) trip.emplace_back(i, j, -v);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[origin] = 1.0;
  Eigen::VectorXd u = lu.solve(rhs);
  std::vector<double> h(inst.domain.size());
  for (int i = 0; i < inst.domain.size(); ++i) {
    auto c = inst.graph->coord(inst.domain.members()[i]);
    h[i] = u[origin] - u[box->vertex_at({c[0] + B, c[1] + B, 0})];
  }

  Vertex x0 = inst.graph->vertex_at({N / 2, 0, 0});
  auto rep = harmonic_ratio_check(inst.domain, k, sp, x0, N / 3.0, h);
  REQUIRE(rep.harmonicity_defect < 1e-12);
  REQUIRE(rep.c1 < 1.2);  // measured 1.05

  double lo = 1e300, hi = 0;
  for (int i = 0; i < inst.domain.size(); ++i) {
    auto c = inst.graph->coord(inst.domain.members()[i]);
    double ax = std::hypot(c[0], c[1]);
    if (ax < 2 || ax > N / 2.0) continue;
    double ratio = sp.phi0[i] / (h[i] / std::log(static_cast<double>(N)));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  REQUIRE(hi / lo < 1.6);  // measured 1.29
}

TEST_CASE("monte carlo simulation") {
  FivePath fp;

  SECTION("neumann kernel misuse gives survival 1") {
    auto kn = neumann_kernel(fp.inst.domain);
    auto res = simulate_killed(kn, 2, 5, 2000, 11);
    REQUIRE(res.survival == 1.0);
  }

  SECTION("five-path t = 2 estimate within 3 sigma of 1/2") {
    auto res = simulate_killed(fp.k, 2, 2, 1000000, 7);
    REQUIRE(std::abs(res.survival - 0.5) < 3.0 * res.std_error);
  }

  SECTION("same seed twice gives identical output, any thread count") {
    auto a = simulate_killed(fp.k, 2, 4, 50000, 99, 1);
    auto b = simulate_killed(fp.k, 2, 4, 50000, 99, 2);
    REQUIRE(a.survival == b.survival);
    REQUIRE(a.occupancy == b.occupancy);
  }

  SECTION("diamond N = 10 within 3 sigma of the exact value") {
    auto inst = make_diamond_ball(10);
    auto k = dirichlet_kernel(inst.domain);
    Vertex x = inst.graph->vertex_at({5, 0, 0});
    auto exact = survival(k, x, 25);
    auto res = simulate_killed(k, x, 25, 200000, 5);
    REQUIRE(std::abs(res.survival - exact.values[25]) < 3.0 * res.std_error);
  }

  SECTION("estimator is unbiased across seeded repetitions") {
    auto exact = survival(fp.k, 2, 4).values[4];
    double zsum = 0;
    int reps = 200;
    for (int r = 0; r < reps; ++r) {
      auto res = simulate_killed(fp.k, 2, 4, 4000, 1000 + r);
      zsum += (res.survival - exact) / res.std_error;
    }
    REQUIRE(std::abs(zsum / reps) < 0.25);
  }

  SECTION("zero trials is an error") {
    REQUIRE_THROWS_AS(simulate_killed(fp.k, 2, 2, 0, 1), GraphError);
  }
}

TEST_CASE("effective omega on a John-but-not-inner-uniform family") {
  // Convergence time of the Doob chain scales like R^(2+omega) on John
  // domains; the effective omega is measured from time-to-epsilon and
  // reported without any tightness claim.
  std::vector<double> xs, ys;
  for (int N : {8, 12, 16}) {
    auto inst = make_fig_iuj(N, true);  // lazified so the chain is aperiodic
    auto k = dirichlet_kernel(inst.domain);
    auto sp = perron_pair(k);
    auto kd = doob_transform(k, sp);
    auto spd = perron_pair(kd);
    // time to sup-ratio 0.5, from the exact asymptotic rate and amplitude
    std::vector<int> times;
    for (int t = N * N / 2; t <= 8 * N * N; t += std::max(1, N * N / 4)) times.push_back(t);
    auto prof = convergence_profile(kd, spd, times);
    int t_mix = times.back();
    for (std::size_t i = 0; i < times.size(); ++i)
      if (prof.sup_ratio[i] < 0.5) {
        t_mix = times[i];
        break;
      }
    xs.push_back(std::log(static_cast<double>(inst.domain.internal_radius())));
    ys.push_back(std::log(static_cast<double>(t_mix)));
  }
  double omega_eff = fit_line(xs, ys).slope - 2.0;
  INFO("effective omega = " << omega_eff);
  REQUIRE(omega_eff > -0.75);
  REQUIRE(omega_eff < 3.0);
}

TEST_CASE("eigenvalue path bound") {
  SECTION("bound always holds against the exact spectrum") {
    for (int N : {10, 14}) {
      auto inst = make_punctured_ball(N, 2);
      auto paths = radial_escape_paths(inst.domain);
      auto w = radial_edge_weight(*inst.graph);
      auto rep = eigenvalue_path_bound(inst.domain, paths, w);
      auto k = dirichlet_kernel(inst.domain);
      auto sp = perron_pair(k);
      REQUIRE(rep.lower_bound > 0.0);
      REQUIRE(1.0 - sp.beta0 >= rep.lower_bound);
    }
  }

  SECTION("d = 2 annulus scaling ~ 1/(N^2 log(N/L))") {
    std::vector<double> xs, ys;
    for (auto [N, L] : std::vector<std::pair<int, int>>{{12, 2}, {18, 3}, {24, 4}, {30, 5}}) {
      auto inst = make_annulus_round(N, L, 2);
      auto paths = radial_escape_paths(inst.domain);
      auto rep = eigenvalue_path_bound(inst.domain, paths, radial_edge_weight(*inst.graph));
      xs.push_back(std::log(N * N * std::log(static_cast<double>(N) / L)));
      ys.push_back(std::log(rep.c_w));
    }
    REQUIRE(fit_line(xs, ys).slope == Approx(1.0).margin(0.2));
  }

  SECTION("d = 3 punctured-ball scaling ~ L^{d-2}/N^d = L/N^3") {
    std::vector<double> xs, ys;
    for (auto [N, L] : std::vector<std::pair<int, int>>{{8, 2}, {11, 3}, {14, 4}}) {
      auto inst = make_annulus_round(N, L, 3);
      auto paths = radial_escape_paths(inst.domain);
      auto rep = eigenvalue_path_bound(inst.domain, paths, radial_edge_weight(*inst.graph));
      xs.push_back(std::log(std::pow(static_cast<double>(N), 3.0) / L));
      ys.push_back(std::log(rep.c_w));
    }
    REQUIRE(fit_line(xs, ys).slope == Approx(1.0).margin(0.2));
  }
}
