#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "midalign/fourier_state.hpp"
#include "midalign/kernel.hpp"
#include "midalign/noise.hpp"
#include "midalign/spectral.hpp"

namespace midalign {

/// Spectrum of dQ/da at a state, where da/dt = Q(a) - a.
struct EigenReport {
  double gamma1 = 0.0;
  /// Sorted by decreasing modulus.
  std::vector<std::complex<double>> eigenvalues;
  std::complex<double> leading;
  /// Every eigenvalue of dQ/da strictly inside the unit circle.
  bool stable = false;
  /// max Re(mu) - 1 over eigenvalues mu, i.e. the leading growth rate of the flow.
  double max_growth_rate = 0.0;
};

/// lambda_k = 2 gamma_k Gamma(k/2) - Gamma(0) - Gamma(k).
double uniform_eigenvalue(int k, const NoiseSpectrum& spectrum, CollisionKernel kernel);

/// Root of lambda_1(gamma1) = 0: pi/4 (Maxwellian), 2/3 (hard sphere).
double critical_gamma1(CollisionKernel kernel);

/// d(rhs)/da, the K x K Jacobian of the mode flow.
Eigen::MatrixXd flow_jacobian(const FourierState& state, const CouplingTable& table);

/// dQ/da = flow_jacobian + I.
Eigen::MatrixXd jacobian(const FourierState& state, const CouplingTable& table);

/// Eigen-decomposition of jacobian(state, table); throws EigenSolverFailure.
EigenReport branch_eigenvalues(const FourierState& state, const CouplingTable& table);

struct BranchConfig;

/// d(leading eigenvalue)/d gamma1 at the critical point, from secant slopes
/// (lambda(delta) - lambda(0)) / delta on the given offsets, extrapolated to
/// delta -> 0 with two Richardson (Neville) levels. Needs >= 4 offsets in (0, 0.05].
double eigenvalue_slope(const NoiseFamily& family, std::span<const double> deltas, const BranchConfig& config);

}  // namespace midalign
