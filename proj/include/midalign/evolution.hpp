#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "midalign/fourier_state.hpp"
#include "midalign/spectral.hpp"

namespace midalign {

struct EvolveOptions {
  double dt = 0.01;
  double sample_interval = 0.1;
  /// Abort when any |a_k| exceeds this.
  double blowup_bound = 10.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FourierState> states;
  CollisionKernel kernel;
  std::string noise;
  double dt = 0.0;
  std::size_t truncation = 0;
};

/// Classical RK4 from t = 0 to t_end. Samples are taken at t = 0 and every
/// sample interval (rounded to a whole number of steps), plus t_end itself.
Trajectory evolve(const FourierState& initial, const CouplingTable& table, double t_end,
                  const EvolveOptions& options = {});

/// One RK4 step of size dt on a_1..a_K.
void rk4_step(std::vector<double>& tail, const CouplingTable& table, double dt);

/// Least-squares slope of log|a_k(t)| over samples with t in [t_begin, t_end].
/// The amplitude must stay inside [1e-8, 1e-2] and keep one sign.
double measure_rate(const Trajectory& trajectory, std::size_t k, double t_begin, double t_end);

}  // namespace midalign
