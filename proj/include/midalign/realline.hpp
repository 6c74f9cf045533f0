#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace midalign {

struct GaussianLine {
  double variance = 1.0;
};

/// Uniform on [-h, h].
struct RectangularLine {
  double half_width = 1.0;
};

/// Even density sampled on an increasing, equally spaced grid; normalized at
/// construction.
struct SampledLine {
  std::vector<double> x;
  std::vector<double> g;
};

/// Zero-mean even noise on the real line with characteristic function g^(xi).
class LineNoise {
 public:
  using Variant = std::variant<GaussianLine, RectangularLine, SampledLine>;

  static LineNoise gaussian(double variance);
  static LineNoise rectangular(double half_width);
  static LineNoise sampled(std::vector<double> x, std::vector<double> g);

  double ghat(double xi) const;
  /// log|g^(xi)|, accurate for small xi (no cancellation in 1 - g^).
  double log_abs_ghat(double xi) const;
  double variance() const;
  std::string describe() const;
  const Variant& variant() const { return v_; }

 private:
  explicit LineNoise(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// prod_{j=0}^{J-1} g^(xi / 2^j)^{2^j}.
double fhat_partial(double xi, const LineNoise& noise, int depth);

struct ProductValue {
  double value = 0.0;
  /// Depth at which doubling stopped changing the value by more than 1e-12.
  int depth = 0;
};

/// The infinite product, depth doubled from 1 up to 64.
ProductValue fhat_product(double xi, const LineNoise& noise);

/// sum_{j<J} 2^j log|g^(xi/2^j)| at the converged depth; log f^(xi) when f^ > 0.
double log_fhat_product(double xi, const LineNoise& noise);

/// prod_{k=0}^{depth-1} prod_{j=0}^{k} g^(lambda^j (1-lambda)^{k-j} xi)^{C(k,j)}, evaluated in log space.
double fhat_product_lambda(double xi, const LineNoise& noise, double lambda, int depth = 200);
double log_fhat_product_lambda(double xi, const LineNoise& noise, double lambda, int depth = 200);

/// -d^2/dxi^2 log f^ at 0 by central differences with one Richardson step.
/// Since f^(0) = 1 and f^'(0) = 0 this is the variance of f.
double variance_from_log_fhat(const std::function<double(double)>& log_fhat, double h = 1e-3);

struct LineDensity {
  std::vector<double> x;
  std::vector<double> f;
  double mass = 0.0;
  double variance = 0.0;
  double min_value = 0.0;
};

/// f(x) = (1/pi) int_0^Xi f^(xi) cos(xi x) d xi by the trapezoidal rule on the
/// equally spaced grid xi_0 = 0 < ... < Xi. Mass and variance come from the
/// trapezoidal rule on the x grid. Throws InsufficientDecay when
/// |f^| > 1e-10 on the last grid point.
LineDensity invert_to_density(std::span<const double> xi, std::span<const double> fhat, std::span<const double> x);

/// Smallest Xi = 2^m (m >= 0) such that |f^| stays below 1e-12 on [Xi, 2 Xi].
double decay_cutoff(const std::function<double(double)>& fhat, double xi_cap = 4096.0);

/// Equilibrium density of the midpoint model for this noise on x_j = -L + 2 L j / (M - 1).
LineDensity equilibrium_density(const LineNoise& noise, double lambda, double half_range, std::size_t points);

}  // namespace midalign
