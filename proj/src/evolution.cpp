#include "midalign/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "midalign/errors.hpp"

namespace midalign {

namespace {

constexpr double kLinearLo = 1e-8;
constexpr double kLinearHi = 1e-2;

}  // namespace

void rk4_step(std::vector<double>& tail, const CouplingTable& table, double dt) {
  const std::size_t K = tail.size();
  std::vector<double> k1(K), k2(K), k3(K), k4(K), tmp(K);
  rhs_into(tail, table, k1);
  for (std::size_t i = 0; i < K; ++i) tmp[i] = tail[i] + 0.5 * dt * k1[i];
  rhs_into(tmp, table, k2);
  for (std::size_t i = 0; i < K; ++i) tmp[i] = tail[i] + 0.5 * dt * k2[i];
  rhs_into(tmp, table, k3);
  for (std::size_t i = 0; i < K; ++i) tmp[i] = tail[i] + dt * k3[i];
  rhs_into(tmp, table, k4);
  for (std::size_t i = 0; i < K; ++i) tail[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

Trajectory evolve(const FourierState& initial, const CouplingTable& table, double t_end, const EvolveOptions& options) {
  if (!(options.dt > 0.0) || options.dt > 0.1) throw InvalidArgument("evolve needs 0 < dt <= 0.1");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("evolve needs t_end >= 0");
  if (!(options.sample_interval > 0.0)) throw InvalidArgument("sample interval must be > 0");
  if (initial.truncation() != table.truncation()) {
    throw DimensionMismatch("initial state and coupling table have different truncations");
  }

  Trajectory traj;
  traj.kernel = table.kernel();
  traj.noise = table.spectrum().family().describe();
  traj.dt = options.dt;
  traj.truncation = table.truncation();

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / options.dt - 1e-9));
  const double dt = steps > 0 ? t_end / static_cast<double>(steps) : options.dt;
  const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.sample_interval / dt)));

  std::vector<double> tail(initial.tail().begin(), initial.tail().end());
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  for (std::size_t s = 1; s <= steps; ++s) {
    rk4_step(tail, table, dt);
    for (double a : tail) {
      if (!(std::abs(a) <= options.blowup_bound)) {
        throw BlowUp("mode amplitude exceeded " + std::to_string(options.blowup_bound) + " at t = " +
                     std::to_string(s * dt));
      }
    }
    if (s % every == 0 || s == steps) {
      traj.times.push_back(static_cast<double>(s) * dt);
      traj.states.push_back(FourierState::from_modes(tail));
    }
  }
  return traj;
}

double measure_rate(const Trajectory& trajectory, std::size_t k, double t_begin, double t_end) {
  if (k < 1 || k > trajectory.truncation) throw InvalidArgument("mode index out of range");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  int sign = 0;
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const double t = trajectory.times[i];
    if (t < t_begin || t > t_end) continue;
    const double a = trajectory.states[i][static_cast<int>(k)];
    const double mag = std::abs(a);
    if (mag < kLinearLo || mag > kLinearHi) {
      throw LinearRegimeViolation("|a_" + std::to_string(k) + "| = " + std::to_string(mag) + " at t = " +
                                  std::to_string(t) + " leaves the linear regime [1e-8, 1e-2]");
    }
    const int s = a > 0 ? 1 : -1;
    if (sign != 0 && s != sign) throw LinearRegimeViolation("mode amplitude crosses zero inside the window");
    sign = s;
    const double y = std::log(mag);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++n;
  }
  if (n < 2) throw InsufficientData("rate window holds fewer than two samples");
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace midalign
