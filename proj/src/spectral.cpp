#include "midalign/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "midalign/errors.hpp"

namespace midalign {

CouplingTable::CouplingTable(CollisionKernel kernel, NoiseSpectrum spectrum)
    : kernel_(kernel),
      spectrum_(std::move(spectrum)),
      truncation_(spectrum_.truncation()),
      linear_(truncation_ + 1, 0.0),
      quadratic_(truncation_ * truncation_, 0.0) {
  const int K = static_cast<int>(truncation_);
  auto G = [this](int twice) { return kernel_.gamma(HalfInteger::from_twice(twice)); };
  const double gamma0 = G(0);
  for (int k = 1; k <= K; ++k) {
    const double gk = spectrum_.gamma(k);
    linear_[k] = 2.0 * gk * G(k) - gamma0 - G(2 * k);
    for (int n = 1; n <= K; ++n) {
      double c = 0.0;
      if (n < k) {
        c = gk * G(2 * n - k) - G(2 * n);
      } else if (n > k) {
        c = 2.0 * gk * G(2 * n - k) - G(2 * n) - G(2 * (n - k));
      }
      quadratic_[(k - 1) * truncation_ + (n - 1)] = c;
    }
  }
}

CouplingTable make_coupling_table(CollisionKernel kernel, const NoiseFamily& family, std::size_t truncation) {
  return CouplingTable(kernel, noise_coefficients(family, truncation));
}

void rhs_into(std::span<const double> tail, const CouplingTable& table, std::span<double> out) {
  const std::size_t K = table.truncation();
  if (tail.size() != K || out.size() != K) {
    throw DimensionMismatch("state truncation " + std::to_string(tail.size()) + " does not match table truncation " +
                            std::to_string(K));
  }
  // a(n) with n in 1..K maps to tail[n-1].
  for (std::size_t k = 1; k <= K; ++k) {
    double s = table.linear(k) * tail[k - 1];
    for (std::size_t n = 1; n < k; ++n) s += table.quadratic(k, n) * tail[n - 1] * tail[k - n - 1];
    for (std::size_t n = k + 1; n <= K; ++n) s += table.quadratic(k, n) * tail[n - 1] * tail[n - k - 1];
    out[k - 1] = s;
  }
}

std::vector<double> rhs(const FourierState& state, const CouplingTable& table) {
  std::vector<double> out(table.truncation());
  rhs_into(state.tail(), table, out);
  return out;
}

DensitySamples reconstruct_density(const FourierState& state, std::size_t points) {
  const std::size_t K = state.truncation();
  if (points < 2 * K + 1) {
    throw InvalidArgument("density grid needs at least 2K+1 = " + std::to_string(2 * K + 1) + " points");
  }
  DensitySamples out;
  out.x.resize(points);
  out.f.resize(points);
  out.min_value = std::numeric_limits<double>::infinity();
  const auto modes = state.modes();
  for (std::size_t j = 0; j < points; ++j) {
    const double x = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j + 1) / points;
    double f = 1.0;
    for (std::size_t k = 1; k <= K; ++k) f += 2.0 * modes[k] * std::cos(static_cast<double>(k) * x);
    out.x[j] = x;
    out.f[j] = f;
    out.min_value = std::min(out.min_value, f);
  }
  out.nonnegative = out.min_value >= 0.0;
  return out;
}

}  // namespace midalign
