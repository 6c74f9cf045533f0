#include "midalign/particles.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "midalign/errors.hpp"

namespace midalign {

namespace {

constexpr double kPi = std::numbers::pi;

// Uniform on (-pi, pi].
double uniform_angle(std::mt19937_64& rng) {
  return kPi - 2.0 * kPi * std::generate_canonical<double, 53>(rng);
}

}  // namespace

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

double midpoint(double x1, double x2) {
  const std::complex<double> z = std::polar(1.0, x1) + std::polar(1.0, x2);
  if (std::abs(z) < 1e-12) throw Antipodal("antipodal pair has no midpoint");
  const double m = std::atan2(z.imag(), z.real());
  return m <= -kPi ? kPi : m;
}

NoiseSampler::NoiseSampler(const NoiseSpectrum& spectrum) {
  const double lo = spectrum.min_density(4096);
  if (lo < 0.0) {
    throw NonPositiveDensity("noise density is negative somewhere (min " + std::to_string(lo) +
                             " on a 4096-point grid)");
  }
  const auto c = spectrum.coefficients();
  gamma_.assign(c.begin() + 1, c.end());
  envelope_ = spectrum.max_density(4096) * (1.0 + 1e-6);
}

double NoiseSampler::operator()(std::mt19937_64& rng) const {
  while (true) {
    const double x = uniform_angle(rng);
    const double u = envelope_ * std::generate_canonical<double, 53>(rng);
    // g(x) with cos(kx) from the Chebyshev recurrence.
    const double c1 = std::cos(x);
    double prev = 1.0, cur = c1, g = 1.0;
    for (double gk : gamma_) {
      g += 2.0 * gk * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    if (u < g) return x;
  }
}

double sample_cosine_density(double a, std::mt19937_64& rng) {
  if (!(std::abs(a) <= 0.5)) throw InvalidArgument("initial a_1 must satisfy |a_1| <= 1/2");
  const double env = 1.0 + 2.0 * std::abs(a);
  while (true) {
    const double x = uniform_angle(rng);
    if (env * std::generate_canonical<double, 53>(rng) < 1.0 + 2.0 * a * std::cos(x)) return x;
  }
}

ParticleEnsemble::ParticleEnsemble(std::vector<double> angles, const NoiseSpectrum& spectrum, CollisionKernel kernel,
                                   std::uint64_t seed)
    : angles_(std::move(angles)),
      sampler_(spectrum),
      kernel_(kernel),
      rng_(seed),
      clock_(0.5 * static_cast<double>(angles_.size())) {
  if (angles_.size() < 2) throw InvalidArgument("particle ensemble needs N >= 2");
  for (double& x : angles_) x = wrap_angle(x);
  next_event_ = clock_(rng_);
}

ParticleEnsemble ParticleEnsemble::make(std::size_t particles, const NoiseSpectrum& spectrum, CollisionKernel kernel,
                                        std::uint64_t seed, std::optional<double> initial_a1) {
  if (particles < 2) throw InvalidArgument("particle ensemble needs N >= 2");
  // Initial positions get their own stream so the dynamics stream is the same
  // for every start.
  std::mt19937_64 init(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> x(particles);
  for (double& v : x) v = initial_a1 ? sample_cosine_density(*initial_a1, init) : uniform_angle(init);
  return ParticleEnsemble(std::move(x), spectrum, kernel, seed);
}

void ParticleEnsemble::step() {
  time_ = next_event_;
  next_event_ = time_ + clock_(rng_);
  const auto n = angles_.size();
  std::uniform_int_distribution<std::size_t> first(0, n - 1), second(0, n - 2);
  while (true) {
    const std::size_t i = first(rng_);
    std::size_t j = second(rng_);
    if (j >= i) ++j;
    const double xi = angles_[i], xj = angles_[j];
    if (kernel_.kind() == KernelKind::HardSphere) {
      const double accept = std::abs(std::sin(0.5 * (xi - xj)));
      if (!(std::generate_canonical<double, 53>(rng_) < accept)) return;
    }
    double m;
    try {
      m = midpoint(xi, xj);
    } catch (const Antipodal&) {
      continue;
    }
    angles_[i] = wrap_angle(m + sampler_(rng_));
    angles_[j] = wrap_angle(m + sampler_(rng_));
    ++jumps_;
    return;
  }
}

void ParticleEnsemble::advance_to(double t) {
  while (next_event_ <= t) step();
  time_ = std::max(time_, t);
}

std::complex<double> ParticleEnsemble::mode(int k) const {
  double c = 0.0, s = 0.0;
  for (double x : angles_) {
    c += std::cos(k * x);
    s += std::sin(k * x);
  }
  const double n = static_cast<double>(angles_.size());
  return {c / n, s / n};
}

ModeSeries simulate(const SimulationConfig& config, const NoiseSpectrum& spectrum) {
  if (config.particles < 2) throw InvalidArgument("simulation needs N >= 2");
  if (!(config.t_end >= 0.0)) throw InvalidArgument("simulation needs t_end >= 0");
  if (!(config.sample_every > 0.0)) throw InvalidArgument("sampling interval must be > 0");
  if (config.observed_modes < 1) throw InvalidArgument("observe at least one mode");
  ParticleEnsemble ens =
      ParticleEnsemble::make(config.particles, spectrum, config.kernel, config.seed, config.initial_a1);
  ModeSeries out;
  const auto samples = static_cast<std::size_t>(std::floor(config.t_end / config.sample_every + 1e-9));
  for (std::size_t s = 0; s <= samples; ++s) {
    const double t = static_cast<double>(s) * config.sample_every;
    ens.advance_to(t);
    std::vector<double> mod(config.observed_modes), cs(config.observed_modes);
    for (std::size_t k = 1; k <= config.observed_modes; ++k) {
      const auto z = ens.mode(static_cast<int>(k));
      mod[k - 1] = std::abs(z);
      cs[k - 1] = z.real();
    }
    out.times.push_back(t);
    out.modulus.push_back(std::move(mod));
    out.cosine.push_back(std::move(cs));
  }
  return out;
}

ReplicaSummary run_replicas(const SimulationConfig& config, const NoiseSpectrum& spectrum, std::size_t replicas,
                            double burn_in) {
  if (replicas < 1) throw InvalidArgument("need at least one replica");
  ReplicaSummary sum;
  sum.series.resize(replicas);
  std::vector<std::exception_ptr> errors(replicas);
  {
    std::vector<std::jthread> pool;
    for (std::size_t r = 0; r < replicas; ++r) {
      pool.emplace_back([&, r] {
        try {
          SimulationConfig c = config;
          c.seed = config.seed + r;
          sum.series[r] = simulate(c, spectrum);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const auto& s : sum.series) {
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      if (s.times[i] < burn_in) continue;
      acc += s.modulus[i][0];
      ++n;
    }
    if (n == 0) throw InsufficientData("no samples after the burn-in time");
    sum.time_average.push_back(acc / static_cast<double>(n));
  }
  const double R = static_cast<double>(replicas);
  for (double v : sum.time_average) sum.mean += v / R;
  if (replicas > 1) {
    double ss = 0.0;
    for (double v : sum.time_average) ss += (v - sum.mean) * (v - sum.mean);
    sum.standard_error = std::sqrt(ss / (R - 1.0) / R);
  }

  const auto& first = sum.series.front();
  sum.mean_modulus.assign(first.times.size(), std::vector<double>(config.observed_modes, 0.0));
  sum.stderr_modulus.assign(first.times.size(), std::vector<double>(config.observed_modes, 0.0));
  for (std::size_t i = 0; i < first.times.size(); ++i) {
    for (std::size_t k = 0; k < config.observed_modes; ++k) {
      double m = 0.0;
      for (const auto& s : sum.series) m += s.modulus[i][k] / R;
      double ss = 0.0;
      for (const auto& s : sum.series) ss += (s.modulus[i][k] - m) * (s.modulus[i][k] - m);
      sum.mean_modulus[i][k] = m;
      sum.stderr_modulus[i][k] = replicas > 1 ? std::sqrt(ss / (R - 1.0) / R) : 0.0;
    }
  }
  return sum;
}

}  // namespace midalign
