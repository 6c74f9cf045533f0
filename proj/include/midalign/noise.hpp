#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace midalign {

/// Convex combination of a Fejer kernel of order N and the uniform density:
/// gamma_k = lambda (N - k) / N for 1 <= k < N, zero above, with the weight
/// linked to the first coefficient by lambda = N gamma1 / (N - 1).
struct FejerNoise {
  int order = 9;
  double gamma1 = 0.0;
};

enum class BaseDensity { Gaussian, Rectangular, Custom };

/// g_tau(y) = 2 pi sum_j rho((y - 2 pi j)/tau)/tau, so gamma_k = rho_hat(tau k).
/// Rectangular means rho = 1/2 on [-1, 1], i.e. rho_hat(s) = sin(s)/s.
struct PeriodizedNoise {
  BaseDensity base = BaseDensity::Gaussian;
  double tau = 1.0;
  std::function<double(double)> density;  // Custom only; must be even.
  double support = 0.0;                   // Custom only; rho vanishes outside [-support, support].
};

/// gamma_1..gamma_n given directly; gamma_k = 0 for k > n.
struct ExplicitNoise {
  std::vector<double> gammas;
};

/// A noise distribution, possibly read as a one-parameter family in gamma1.
class NoiseFamily {
 public:
  using Variant = std::variant<FejerNoise, PeriodizedNoise, ExplicitNoise>;

  static NoiseFamily fejer(int order, double gamma1);
  static NoiseFamily periodized_gaussian(double tau);
  static NoiseFamily periodized_rectangular(double tau);
  static NoiseFamily periodized_custom(std::function<double(double)> rho, double support, double tau);
  static NoiseFamily explicit_list(std::vector<double> gammas);

  /// gamma_{|k|}; gamma_0 = 1.
  double coefficient(int k) const;
  double gamma1() const { return coefficient(1); }

  /// Same family, re-parameterized so that its first coefficient is gamma1.
  /// Fejer moves lambda, periodized families move tau, explicit lists replace
  /// gamma_1 and keep the rest.
  NoiseFamily with_gamma1(double gamma1) const;

  /// Highest index with a possibly nonzero coefficient, when finite.
  std::optional<int> support() const;

  /// Compact text form: fejer:N@gamma1, gaussian:tau, rect:tau, custom:tau, list:g1,g2,...
  std::string describe() const;

  const Variant& variant() const { return family_; }

 private:
  explicit NoiseFamily(Variant v) : family_(std::move(v)) {}
  Variant family_;
};

/// Fourier cosine coefficients gamma_0..gamma_K of an even noise density g,
/// g(x) = 1 + 2 sum_k gamma_k cos(kx) with respect to dx / (2 pi).
class NoiseSpectrum {
 public:
  NoiseSpectrum(NoiseFamily family, std::vector<double> coefficients);

  std::size_t truncation() const { return coefficients_.size() - 1; }

  /// gamma_{|k|}. Indices above the truncation are zero when the family has
  /// finite support there, otherwise InvalidArgument.
  double gamma(int k) const;

  std::span<const double> coefficients() const { return coefficients_; }
  const NoiseFamily& family() const { return family_; }

  /// Truncated density 1 + 2 sum gamma_k cos(kx).
  double density(double x) const;

  /// Minimum of the truncated density over an equispaced grid on (-pi, pi].
  double min_density(std::size_t grid = 4096) const;
  double max_density(std::size_t grid = 4096) const;
  bool nonnegative(std::size_t grid = 4096) const { return min_density(grid) >= 0.0; }

 private:
  NoiseFamily family_;
  std::vector<double> coefficients_;
};

/// Evaluates gamma_0..gamma_K of the family.
NoiseSpectrum noise_coefficients(const NoiseFamily& family, std::size_t truncation);

/// Parses --noise values: fejer:N, gaussian:tau, rect:tau, list:path (file of
/// gamma_1, gamma_2, ... separated by whitespace or commas). The gamma1 of
/// fejer defaults to 0 and is normally set afterwards with with_gamma1.
NoiseFamily parse_noise(const std::string& text);

}  // namespace midalign
