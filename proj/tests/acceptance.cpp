#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "midalign/bnk.hpp"
#include "midalign/equilibria.hpp"
#include "midalign/evolution.hpp"
#include "midalign/particles.hpp"
#include "midalign/realline.hpp"
#include "midalign/spectral.hpp"
#include "midalign/stability.hpp"
#include "oracles.hpp"

using namespace midalign;
using std::numbers::pi;

namespace {

const CollisionKernel kMax = CollisionKernel::maxwellian();
const CollisionKernel kHard = CollisionKernel::hard_sphere();
const NoiseFamily kFejer = NoiseFamily::fejer(9, 0.0);
constexpr double kCrit = pi / 4;

// Collects failed conditions and a one-line summary per criterion.
struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StationarySolution solve_at(double gamma1, std::size_t K = 32) {
  const CouplingTable t = make_coupling_table(kMax, kFejer.with_gamma1(gamma1), K);
  return solve_stationary(t, asymptotic_state(gamma1, kFejer, K), 1e-13);
}

void c1(Check& c) {
  const double gc = critical_gamma1(kMax);
  const double lam = uniform_eigenvalue(1, noise_coefficients(kFejer.with_gamma1(kCrit), 9), kMax);
  c.detail << "gamma_c - pi/4 = " << gc - kCrit << ", lambda_1(pi/4) = " << lam;
  c.require(std::abs(gc - kCrit) <= 1e-14, "critical point");
  c.require(std::abs(lam) <= 1e-14, "lambda_1 at the critical point");
}

void c2(Check& c) {
  const double lam = uniform_eigenvalue(1, noise_coefficients(NoiseFamily::explicit_list({1.0}), 1), kHard);
  const double gc = critical_gamma1(kHard);
  auto at = [&](double g) { return uniform_eigenvalue(1, noise_coefficients(NoiseFamily::explicit_list({g}), 1), kHard); };
  const double below = at(2.0 / 3.0 - 1e-6), above = at(2.0 / 3.0 + 1e-6);
  c.detail << "lambda_1(1) - 2/(3 pi) = " << lam - 2.0 / (3.0 * pi) << ", threshold " << gc << ", lambda_1(2/3 -+ 1e-6) = "
           << below << ", " << above;
  c.require(std::abs(lam - 2.0 / (3.0 * pi)) <= 1e-14, "lambda_1 at gamma = 1");
  c.require(below < 0.0 && above > 0.0, "sign change at 2/3");
  c.require(std::abs(gc - 2.0 / 3.0) <= 1e-14, "threshold 2/3");
}

void c3(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const BifurcationDiagram d = continue_branch(kFejer, 0.70, 0.90, 40, BranchConfig{});
  const double elapsed = seconds_since(t0);
  bool below = true, above = true;
  for (const auto& r : d.rows) {
    if (r.gamma1 <= kCrit) {
      below = below && r.state[1] == 0.0 && r.eigen.stable;
    } else {
      above = above && r.nontrivial && r.converged && r.state[1] > 0.0 && r.eigen.stable;
    }
  }
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(kCrit + 1e-4 * std::pow(100.0, i / 20.0));
  const ExponentFit fit = fit_critical_exponent(continue_branch(kFejer, grid, BranchConfig{}), kCrit, 1e-4, 1e-2);
  c.detail << d.rows.size() << " rows in " << elapsed << " s, exponent " << fit.exponent << " over " << fit.points
           << " points";
  c.require(d.rows.size() == 41 && d.fully_converged(), "all rows converged");
  c.require(elapsed < 10.0, "runtime under 10 s");
  c.require(below, "uniform and stable below pi/4");
  c.require(above, "nontrivial and stable above pi/4");
  c.require(std::abs(fit.exponent - 0.5) <= 0.02, "exponent 0.5 +- 0.02");
}

void c4(Check& c) {
  const double g3 = kFejer.with_gamma1(kCrit).coefficient(3);
  const double want2 = 12.0 / pi, want3 = 144.0 * g3 / (4.0 * pi * g3 + 3.0 * pi * pi);
  const double delta = 1e-4;
  // a_2 and a_3 / a_1 vanish at the critical point, so the forward difference is a(delta) / delta.
  const StationarySolution s = solve_at(kCrit + delta);
  const double d2 = s.state[2] / delta, d3 = s.state[3] / s.state[1] / delta;
  c.detail << "da2/dg = " << d2 << " (12/pi = " << want2 << "), d(a3/a1)/dg = " << d3 << " (expected " << want3
           << "), delta = " << delta;
  c.require(std::abs(d2 / want2 - 1.0) <= 0.02, "da2/dgamma1 within 2%");
  c.require(std::abs(d3 / want3 - 1.0) <= 0.02, "d(a3/a1)/dgamma1 within 2%");
}

void c5(Check& c) {
  const std::vector<double> d{0.005, 0.01, 0.02, 0.04};
  const double fejer = eigenvalue_slope(kFejer, d, BranchConfig{});
  const NoiseFamily gauss = NoiseFamily::periodized_gaussian(1.0);
  const double g = eigenvalue_slope(gauss, d, BranchConfig{});
  const auto fs = noise_coefficients(kFejer.with_gamma1(kCrit), 5), gs = noise_coefficients(gauss.with_gamma1(kCrit), 5);
  c.detail << "Fejer " << fejer << ", periodized Gaussian " << g << ", -8/pi = " << -8.0 / pi << "; gamma_3 " << fs.gamma(3)
           << " vs " << gs.gamma(3);
  c.require(std::abs(fejer / (-8.0 / pi) - 1.0) <= 0.05, "Fejer slope within 5%");
  c.require(std::abs(g / (-8.0 / pi) - 1.0) <= 0.05, "Gaussian slope within 5%");
  c.require(std::abs(fs.gamma(3) - gs.gamma(3)) > 0.01, "families differ in gamma_3");
}

void c6(Check& c) {
  double worst = 0.0;
  for (CollisionKernel kernel : {kMax, kHard}) {
    for (double g : {0.5, 0.7, 0.9}) {
      const CouplingTable t = make_coupling_table(kernel, kFejer.with_gamma1(g), 8);
      for (std::size_t k = 1; k <= 3; ++k) {
        FourierState init(8);
        init.set(k, 1e-4);
        const double t_end = 5.0;
        const Trajectory tr = evolve(init, t, t_end);
        const double measured = measure_rate(tr, k, 0.0, t_end);
        const double predicted = uniform_eigenvalue(static_cast<int>(k), t.spectrum(), kernel);
        worst = std::max(worst, std::abs(measured / predicted - 1.0));
      }
    }
  }
  c.detail << "18 rates, worst relative error " << worst;
  c.require(worst <= 0.02, "rates within 2%");
}

void c7(Check& c) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pickK(1, 8);
  std::uniform_real_distribution<double> pickg(0.1, 0.88);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t K = static_cast<std::size_t>(pickK(rng));
    const CollisionKernel kernel = trial % 2 ? kHard : kMax;
    const NoiseFamily f = NoiseFamily::fejer(9, pickg(rng));
    const CouplingTable t = make_coupling_table(kernel, f, K);
    const auto a = oracle::random_modes(rng, K, 0.39);
    const auto r = rhs(FourierState::from_modes(std::span<const double>(a).subspan(1)), t);
    for (std::size_t k = 1; k <= K; ++k) {
      const double ref = oracle::weak_form_rate(a, f.coefficient(static_cast<int>(k)), static_cast<int>(k), kernel);
      worst = std::max(worst, std::abs(r[k - 1] - ref));
    }
  }
  c.detail << "50 random states, max |rhs - quadrature| " << worst;
  c.require(worst <= 1e-6, "within 1e-6");
}

void c8(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  SimulationConfig cfg;
  cfg.particles = 10000;
  cfg.t_end = 200.0;
  cfg.observed_modes = 1;
  cfg.seed = 2024;
  const double g = kCrit + 0.1;
  const ReplicaSummary sup = run_replicas(cfg, noise_coefficients(kFejer.with_gamma1(g), 8), 8, 50.0);
  const double a1 = solve_at(g).state[1];
  cfg.seed = 4048;
  const ReplicaSummary sub = run_replicas(cfg, noise_coefficients(kFejer.with_gamma1(kCrit - 0.1), 8), 8, 50.0);
  const double elapsed = seconds_since(t0);
  const double z = (sup.mean - a1) / sup.standard_error;
  c.detail << "MC " << sup.mean << " +- " << sup.standard_error << " vs spectral " << a1 << " (z = " << z
           << "), subcritical " << sub.mean << ", " << elapsed << " s";
  c.require(std::abs(z) <= 3.0, "within 3 standard errors");
  c.require(sub.mean < 0.03, "subcritical |a1| < 0.03");
  c.require(elapsed < 120.0, "runtime under 2 min");
}

void c9(Check& c) {
  const LineNoise rect = LineNoise::rectangular(1.0);
  const double var_rect = variance_from_log_fhat([&](double xi) { return log_fhat_product(xi, rect); });
  const LineDensity dens = equilibrium_density(rect, 0.5, 8.0, 2049);

  const double sigma2 = 0.7;
  const LineNoise gauss = LineNoise::gaussian(sigma2);
  double sup = 0.0;
  for (int i = -1000; i <= 1000; ++i) {
    const double xi = 5.0 * i / 1000.0;
    sup = std::max(sup, std::abs(fhat_product(xi, gauss).value - std::exp(-xi * xi * sigma2)));
  }
  const double var_gauss = variance_from_log_fhat([&](double xi) { return log_fhat_product(xi, gauss); });

  double mix = 0.0;
  for (double lam : {0.25, 0.5}) {
    for (const LineNoise* n : {&rect, &gauss}) {
      const double v = variance_from_log_fhat([&](double xi) { return log_fhat_product_lambda(xi, *n, lam); });
      mix = std::max(mix, std::abs(v - n->variance() / (2.0 * lam * (1.0 - lam))));
    }
  }
  c.detail << "rect Var " << var_rect << " (x-space " << dens.variance << "), Gaussian sup error " << sup
           << ", Var " << var_gauss << " vs " << 2 * sigma2 << ", lambda-law max error " << mix;
  c.require(std::abs(var_rect - 2.0 / 3.0) <= 1e-6, "rect variance");
  c.require(std::abs(dens.variance - 2.0 / 3.0) <= 1e-6, "rect x-space variance");
  c.require(sup < 1e-8, "Gaussian closed form");
  c.require(std::abs(var_gauss - 2 * sigma2) <= 1e-6, "Gaussian doubled variance");
  c.require(mix <= 1e-5, "lambda-mixing variance law");
}

void c10(Check& c) {
  const double g = kCrit + 0.05;
  const NoiseSpectrum s = noise_coefficients(kFejer.with_gamma1(g), 24);
  const PartitionTable t = build_partition_table(s, 16, 8, Seeding::SelfConsistent);
  bool closed = true;
  for (int m = 1; m <= 4; ++m) {
    double v = 1.0;
    for (int j = 0; j < m; ++j) v *= std::pow(s.gamma(1 << (m - j)), std::ldexp(1.0, j));
    closed = closed && std::abs(t.p(std::size_t{1} << m, 0) - v) <= 1e-14 * std::abs(v);
    for (std::size_t n = 1; n <= 8; ++n) closed = closed && t.p(std::size_t{1} << m, n) == 0.0;
  }
  const bool row1 = t.p(1, 0) == 0.0 && t.p(1, 1) == 0.0 &&
                    t.p(1, 2) == 2.0 * bnk_coupling(3, -2, s) * t.p(3, 0) * t.p(2, 0);

  const double newton = solve_at(g).state[1];
  const PartitionTable r = build_partition_table(noise_coefficients(kFejer.with_gamma1(g), 20), 12, 8,
                                                 Seeding::Response);
  const auto root = consistency_root(r);
  bool none = true;
  for (double gs : {0.5, 0.6, 0.7, kCrit - 0.05, kCrit - 0.005}) {
    none = none && !consistency_root(build_partition_table(noise_coefficients(kFejer.with_gamma1(gs), 20), 12, 8,
                                                           Seeding::Response))
                        .has_value();
  }
  c.detail << "root " << (root ? std::to_string(*root) : "none") << " vs Newton a1 " << newton;
  c.require(closed, "dyadic closed forms");
  c.require(row1, "p_1 row identities");
  c.require(root && std::abs(*root / newton - 1.0) <= 0.10, "root within 10% of Newton");
  c.require(none, "no subcritical root");
}

void c11(Check& c) {
  double lowest = 1e300;
  for (int i = 1; i <= 20; ++i) {
    const double g = kCrit + 0.1 * i / 20.0;
    const BifurcationDiagram d = continue_branch(kFejer, std::vector<double>{g}, BranchConfig{});
    lowest = std::min(lowest, reconstruct_density(d.rows.front().state, 4096).min_value);
  }
  c.detail << "min density over 20 branch points " << lowest;
  c.require(lowest >= 0.0, "nonnegative");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"critical point", c1},     {"hard-sphere rate", c2},   {"pitchfork diagram", c3}, {"slopes at gamma_c", c4},
      {"eigenvalue slope", c5},   {"dynamic rates", c6},      {"quadrature oracle", c7}, {"Monte Carlo", c8},
      {"real line", c9},          {"BnK series", c10},        {"positivity", c11}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    failed += !c.ok;
    std::printf("%s %2zu %s: %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
