#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "midalign/fourier_state.hpp"
#include "midalign/noise.hpp"
#include "midalign/spectral.hpp"
#include "midalign/stability.hpp"

namespace midalign {

/// r_k = rhs_k(a); zero exactly at stationary states.
std::vector<double> stationary_residual(const FourierState& state, const CouplingTable& table);

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 100;
  /// Step halvings allowed when the residual norm does not decrease.
  int max_halvings = 8;
  /// A Newton step larger than this (max norm) counts as divergence.
  double divergence_bound = 1e3;
};

struct StationarySolution {
  FourierState state;
  int iterations = 0;
  double residual = 0.0;  // max |r_k|
};

/// Damped Newton on stationary_residual with the analytic Jacobian. The
/// returned state has a_1 >= 0 (the rotation by pi maps a_k -> (-1)^k a_k).
/// Throws NonConvergence carrying the last iterate.
StationarySolution solve_stationary(const CouplingTable& table, const FourierState& guess, double tol);
StationarySolution solve_stationary(const CouplingTable& table, const FourierState& guess,
                                    const NewtonOptions& options);

/// Leading-order Maxwellian branch near gamma1 = pi/4 with delta = gamma1 - pi/4:
/// a_1 = sqrt(12 delta / (pi gamma_2(pi/4))), a_2 = 12 delta / pi,
/// a_3 = a_1 * 144 gamma_3 / (4 pi gamma_3 + 3 pi^2) * delta (gamma_3 at pi/4),
/// even modes a_q = gamma_q a_{q/2}^2 for q >= 4, everything else zero.
FourierState asymptotic_state(double gamma1, const NoiseFamily& family, std::size_t truncation);

/// Kernel-agnostic two-mode leading order: a_1^2 = L_1 L_2 / (C(1,2) C(2,1)),
/// a_2 = -C(2,1) a_1^2 / L_2. Uniform when the ratio is not positive.
FourierState two_mode_guess(const CouplingTable& table);

/// Maxwellian reduced coordinates: z = (a_2, a~_3, a~_5, ...) with a_p = a_1 a~_p for
/// odd p, a_1 = sqrt(a_2 / gamma_2), and even modes from a_q = gamma_q a_{q/2}^2.
struct ReducedState {
  double a2 = 0.0;
  std::vector<double> tilde_odd;  // a~_3, a~_5, ... up to the truncation

  FourierState to_full(const NoiseSpectrum& spectrum) const;
  static ReducedState from_full(const FourierState& state);
};

/// Newton on the odd-mode equations divided by a_1, in reduced coordinates.
/// Maxwellian only; the even equations hold through the closure.
StationarySolution solve_reduced(const CouplingTable& table, const ReducedState& guess, const NewtonOptions& options);

struct BranchConfig {
  CollisionKernel kernel = CollisionKernel::maxwellian();
  std::size_t truncation = 16;
  double tol = 1e-12;
  /// Double K (up to max_truncation) until |a_K| < truncation_tol.
  bool adaptive_truncation = true;
  std::size_t max_truncation = 256;
  double truncation_tol = 1e-10;
};

/// solve_stationary at truncation config.truncation, doubling K while
/// |a_K| >= config.truncation_tol (up to config.max_truncation). The family
/// fixes gamma_1. The returned state may be longer than the guess.
StationarySolution solve_adaptive(const NoiseFamily& family, const FourierState& guess, const BranchConfig& config);

struct DiagramRow {
  double gamma1 = 0.0;
  FourierState state{1};
  EigenReport eigen;
  bool converged = false;
  /// a_1 > 0 (as opposed to a point on the uniform branch).
  bool nontrivial = false;
  double residual = 0.0;
};

struct BifurcationDiagram {
  std::vector<DiagramRow> rows;
  /// Uniform branch above the critical point, with its (unstable) spectrum.
  std::vector<DiagramRow> uniform_rows;
  bool aborted = false;
  /// Set for kernels without proven branch results (hard sphere).
  bool experimental = false;

  std::size_t max_truncation() const;
  bool fully_converged() const;
};

/// Natural-parameter continuation over gamma1 = lo + i (hi - lo) / steps,
/// i = 0..steps. Rows below the critical point sit on the uniform branch;
/// above it the first guess comes from asymptotic_state (Maxwellian) or
/// two_mode_guess, later ones from the previous converged row. Three
/// consecutive failures abort the march.
BifurcationDiagram continue_branch(const NoiseFamily& family, double gamma_lo, double gamma_hi, std::size_t steps,
                                   const BranchConfig& config);

/// Same over an explicit increasing gamma1 grid.
BifurcationDiagram continue_branch(const NoiseFamily& family, std::span<const double> gammas,
                                   const BranchConfig& config);

struct ExponentFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log a_1 against log(gamma1 - gamma_c) over the
/// converged nontrivial rows with gamma1 - gamma_c in [delta_lo, delta_hi].
/// Throws InsufficientData below six rows.
ExponentFit fit_critical_exponent(const BifurcationDiagram& diagram, double gamma_c, double delta_lo = 1e-4,
                                  double delta_hi = 1e-2);

}  // namespace midalign
