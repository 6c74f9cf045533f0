#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "midalign/kernel.hpp"
#include "midalign/noise.hpp"

namespace midalign {

/// Wraps an angle to (-pi, pi].
double wrap_angle(double x);

/// Arg(e^{i x1} + e^{i x2}), the midpoint of the shorter arc, in (-pi, pi].
/// Throws Antipodal when |e^{i x1} + e^{i x2}| < 1e-12.
double midpoint(double x1, double x2);

/// Rejection sampler for g(x) dx / (2 pi), g = 1 + 2 sum gamma_k cos(kx),
/// against the uniform envelope max g (1 + 1e-6). Throws NonPositiveDensity
/// if g < 0 somewhere on a 4096-point grid.
class NoiseSampler {
 public:
  explicit NoiseSampler(const NoiseSpectrum& spectrum);

  double operator()(std::mt19937_64& rng) const;
  double envelope() const { return envelope_; }

 private:
  std::vector<double> gamma_;  // gamma_1..gamma_K
  double envelope_ = 1.0;
};

/// Draws from (1 + 2 a cos x) dx / (2 pi), |a| <= 1/2.
double sample_cosine_density(double a, std::mt19937_64& rng);

/// N angles with a pair-jump clock of total rate N/2. Each jump picks an
/// ordered pair uniformly (hard sphere: accepted with probability
/// |sin((x_i - x_j)/2)|) and sends both to the midpoint plus independent noise.
class ParticleEnsemble {
 public:
  ParticleEnsemble(std::vector<double> angles, const NoiseSpectrum& spectrum, CollisionKernel kernel,
                   std::uint64_t seed);

  /// Uniform start, or 1 + 2 a cos x when initial_a1 is set.
  static ParticleEnsemble make(std::size_t particles, const NoiseSpectrum& spectrum, CollisionKernel kernel,
                               std::uint64_t seed, std::optional<double> initial_a1 = std::nullopt);

  /// Runs events until the next event time would exceed t.
  void advance_to(double t);
  /// One proposal (accepted or not) and its clock tick.
  void step();

  double time() const { return time_; }
  std::size_t size() const { return angles_.size(); }
  const std::vector<double>& angles() const { return angles_; }
  std::uint64_t jumps() const { return jumps_; }

  /// (1/N) sum_j e^{i k x_j}.
  std::complex<double> mode(int k) const;

 private:
  std::vector<double> angles_;
  NoiseSampler sampler_;
  CollisionKernel kernel_;
  std::mt19937_64 rng_;
  std::exponential_distribution<double> clock_;
  double time_ = 0.0;
  double next_event_ = 0.0;
  std::uint64_t jumps_ = 0;
};

struct SimulationConfig {
  std::size_t particles = 10000;
  double t_end = 100.0;
  double sample_every = 1.0;
  std::size_t observed_modes = 8;
  std::uint64_t seed = 0;
  CollisionKernel kernel = CollisionKernel::maxwellian();
  std::optional<double> initial_a1;
};

struct ModeSeries {
  std::vector<double> times;
  /// modulus[s][k-1] = |a^_k(t_s)| and cosine[s][k-1] = (1/N) sum cos(k x_j).
  std::vector<std::vector<double>> modulus;
  std::vector<std::vector<double>> cosine;
};

ModeSeries simulate(const SimulationConfig& config, const NoiseSpectrum& spectrum);

struct ReplicaSummary {
  std::vector<ModeSeries> series;
  /// Per replica: mean of |a^_1| over samples with t >= burn_in.
  std::vector<double> time_average;
  double mean = 0.0;
  /// Standard error of the mean across replicas.
  double standard_error = 0.0;
  /// Across-replica mean and standard error of |a^_k(t)|, [s][k-1].
  std::vector<std::vector<double>> mean_modulus;
  std::vector<std::vector<double>> stderr_modulus;
};

/// Replica r runs with seed config.seed + r, one thread per replica.
ReplicaSummary run_replicas(const SimulationConfig& config, const NoiseSpectrum& spectrum, std::size_t replicas,
                            double burn_in);

}  // namespace midalign
