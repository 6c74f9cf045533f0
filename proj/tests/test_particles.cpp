#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "midalign/errors.hpp"
#include "midalign/particles.hpp"
#include "midalign/spectral.hpp"

using namespace midalign;
using std::numbers::pi;

namespace {

NoiseSpectrum fejer_at(double gamma1) { return noise_coefficients(NoiseFamily::fejer(9, gamma1), 8); }

double circular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

TEST_CASE("midpoint of the shorter arc") {
  CHECK(midpoint(0.7, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(midpoint(0.0, pi / 2) == doctest::Approx(pi / 4).epsilon(1e-15));
  CHECK(midpoint(3 * pi / 4, -3 * pi / 4) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(midpoint(-0.2, 0.4) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(midpoint(0.0, pi), Antipodal);
  CHECK_THROWS_AS(midpoint(1.0, 1.0 - pi), Antipodal);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-pi, pi);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng), b = u(rng), r = u(rng);
    if (std::abs(std::cos(0.5 * (a - b))) < 1e-6) continue;
    const double m = midpoint(a, b);
    CHECK(m > -pi);
    CHECK(m <= pi);
    worst = std::max(worst, circular_distance(m, midpoint(b, a)));
    worst = std::max(worst, circular_distance(midpoint(a + r, b + r), m + r));
    // Equidistant from both endpoints, on the shorter arc.
    worst = std::max(worst, std::abs(circular_distance(m, a) - circular_distance(m, b)));
    CHECK(circular_distance(m, a) <= pi / 2 + 1e-12);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("wrap_angle range") {
  CHECK(wrap_angle(pi) == pi);
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3 * pi) == doctest::Approx(pi));
  CHECK(wrap_angle(0.5 + 4 * pi) == doctest::Approx(0.5));
}

TEST_CASE("noise sampler moments") {
  const std::size_t n = 1000000;
  SUBCASE("uniform when every gamma_k vanishes") {
    const NoiseSampler s(noise_coefficients(NoiseFamily::explicit_list({0.0, 0.0}), 2));
    CHECK(s.envelope() == doctest::Approx(1.0).epsilon(1e-5));
    std::mt19937_64 rng(1);
    double c = 0.0, sn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s(rng);
      c += std::cos(x);
      sn += std::sin(x);
    }
    CHECK(std::abs(c / n) < 3.0 / std::sqrt(2.0 * n) * 1.5);
    CHECK(std::abs(sn / n) < 3.0 / std::sqrt(2.0 * n) * 1.5);
  }
  SUBCASE("Fejer at pi/4 + 0.1") {
    const NoiseSpectrum spec = fejer_at(pi / 4 + 0.1);
    const NoiseSampler s(spec);
    std::mt19937_64 rng(2);
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s(rng);
      c1 += std::cos(x);
      c2 += std::cos(2 * x);
    }
    const double tol = 3.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(c1 / n - spec.gamma(1)) < tol);
    CHECK(std::abs(c2 / n - spec.gamma(2)) < tol);
  }
  CHECK_THROWS_AS(NoiseSampler(noise_coefficients(NoiseFamily::explicit_list({0.9}), 1)), NonPositiveDensity);
}

TEST_CASE("cosine initial density") {
  std::mt19937_64 rng(3);
  const std::size_t n = 400000;
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) c += std::cos(sample_cosine_density(0.3, rng));
  CHECK(std::abs(c / n - 0.3) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK_THROWS_AS(sample_cosine_density(0.6, rng), InvalidArgument);
}

TEST_CASE("a jump moves exactly two particles") {
  ParticleEnsemble e = ParticleEnsemble::make(50, fejer_at(0.8), CollisionKernel::maxwellian(), 9);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> before = e.angles();
    const double t = e.time();
    e.step();
    CHECK(e.time() > t);
    int moved = 0;
    for (std::size_t j = 0; j < before.size(); ++j) moved += e.angles()[j] != before[j];
    CHECK(moved <= 2);
  }
  CHECK(e.jumps() == 200);

  ParticleEnsemble h = ParticleEnsemble::make(50, fejer_at(0.8), CollisionKernel::hard_sphere(), 9);
  for (int i = 0; i < 2000; ++i) h.step();
  CHECK(h.jumps() < 2000);
  CHECK(h.jumps() > 0);
}

TEST_CASE("clock rate is N/2") {
  ParticleEnsemble e = ParticleEnsemble::make(1000, fejer_at(0.8), CollisionKernel::maxwellian(), 5);
  e.advance_to(100.0);
  const double expected = 0.5 * 1000 * 100.0;
  CHECK(std::abs(static_cast<double>(e.jumps()) - expected) < 4.0 * std::sqrt(expected));
  CHECK(e.time() == 100.0);
}

TEST_CASE("simulation is deterministic in the seed") {
  SimulationConfig c;
  c.particles = 500;
  c.t_end = 5.0;
  c.seed = 42;
  const ModeSeries a = simulate(c, fejer_at(0.85)), b = simulate(c, fejer_at(0.85));
  CHECK(a.modulus == b.modulus);
  CHECK(a.times.size() == 6);
  c.seed = 43;
  CHECK(simulate(c, fejer_at(0.85)).modulus != a.modulus);
  const ReplicaSummary r1 = run_replicas(c, fejer_at(0.85), 3, 1.0), r2 = run_replicas(c, fejer_at(0.85), 3, 1.0);
  CHECK(r1.time_average == r2.time_average);
  CHECK(r1.series[0].modulus == simulate(c, fejer_at(0.85)).modulus);
  c.seed = 44;
  CHECK(r1.series[1].modulus == simulate(c, fejer_at(0.85)).modulus);
}

TEST_CASE("subcritical ensembles stay disordered") {
  SimulationConfig c;
  c.particles = 10000;
  c.t_end = 50.0;
  c.seed = 11;
  const ReplicaSummary r = run_replicas(c, fejer_at(pi / 4 - 0.1), 4, 10.0);
  CHECK(r.mean < 0.03);
}

TEST_CASE("linear decay of a_1 follows the kinetic rate") {
  const double g = 0.5, a0 = 0.05;
  const double lambda1 = 4.0 * g / pi - 1.0;
  SimulationConfig c;
  c.particles = 100000;
  c.t_end = 2.0;
  c.sample_every = 0.5;
  c.seed = 100;
  c.initial_a1 = a0;
  const ReplicaSummary r = run_replicas(c, fejer_at(g), 4, 0.0);
  for (std::size_t s = 0; s < r.series.front().times.size(); ++s) {
    double mean = 0.0;
    for (const auto& ser : r.series) mean += ser.cosine[s][0] / 4.0;
    const double expected = a0 * std::exp(lambda1 * r.series.front().times[s]);
    const double stat = 4.0 / std::sqrt(2.0 * 4.0 * c.particles);
    CHECK(std::abs(mean - expected) < stat + 0.05 * expected);
  }
}

TEST_CASE("particle preconditions") {
  const NoiseSpectrum s = fejer_at(0.8);
  CHECK_THROWS_AS(ParticleEnsemble::make(1, s, CollisionKernel::maxwellian(), 1), InvalidArgument);
  SimulationConfig c;
  c.particles = 1;
  CHECK_THROWS_AS(simulate(c, s), InvalidArgument);
  c.particles = 10;
  CHECK_THROWS_AS(run_replicas(c, s, 0, 0.0), InvalidArgument);
  c.sample_every = 0.0;
  CHECK_THROWS_AS(simulate(c, s), InvalidArgument);
}
