#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "midalign/fourier_state.hpp"
#include "midalign/kernel.hpp"
#include "midalign/noise.hpp"

namespace midalign {

/// Precomputed coefficients of the truncated mode dynamics
///
///   da_k/dt = L_k a_k + sum_{n=1}^{k-1} C(k,n) a_n a_{k-n}
///                     + sum_{n=k+1}^{K} C(k,n) a_n a_{n-k},
///
/// with L_k = 2 gamma_k Gamma(k/2) - Gamma(0) - Gamma(k),
/// C(k,n) = gamma_k Gamma(n - k/2) - Gamma(n) for n < k, and
/// C(k,n) = 2 gamma_k Gamma(n - k/2) - Gamma(n) - Gamma(n - k) for n > k.
/// Immutable after construction.
class CouplingTable {
 public:
  CouplingTable(CollisionKernel kernel, NoiseSpectrum spectrum);

  std::size_t truncation() const { return truncation_; }
  CollisionKernel kernel() const { return kernel_; }
  const NoiseSpectrum& spectrum() const { return spectrum_; }

  /// L_k, the uniform-state growth rate of mode k.
  double linear(std::size_t k) const { return linear_[k]; }
  /// C(k, n) for n != k, both in 1..K.
  double quadratic(std::size_t k, std::size_t n) const { return quadratic_[(k - 1) * truncation_ + (n - 1)]; }

 private:
  CollisionKernel kernel_;
  NoiseSpectrum spectrum_;
  std::size_t truncation_;
  std::vector<double> linear_;     // index 0 unused
  std::vector<double> quadratic_;  // row-major K x K, diagonal unused
};

/// Builds a table for the first K modes of the family.
CouplingTable make_coupling_table(CollisionKernel kernel, const NoiseFamily& family, std::size_t truncation);

/// da_k/dt for k = 1..K (returned with index 0 <-> k = 1). a_0 never evolves.
std::vector<double> rhs(const FourierState& state, const CouplingTable& table);

/// In-place variant on raw coordinates a_1..a_K, used by the integrators.
void rhs_into(std::span<const double> tail, const CouplingTable& table, std::span<double> out);

struct DensitySamples {
  std::vector<double> x;
  std::vector<double> f;
  double min_value = 0.0;
  bool nonnegative = true;
};

/// f(x_j) = 1 + 2 sum a_k cos(k x_j) on M equispaced points x_j = -pi + 2 pi j / M,
/// j = 1..M (so the grid covers (-pi, pi]). Requires M >= 2K + 1.
DensitySamples reconstruct_density(const FourierState& state, std::size_t points);

}  // namespace midalign
