#include "midalign/realline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "midalign/errors.hpp"

namespace midalign {

namespace {

constexpr int kMaxDepth = 64;
constexpr double kOverOne = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// log(sin t / t); Taylor series below 0.1 keeps full relative accuracy.
double log_sinc(double t) {
  t = std::abs(t);
  if (t < 0.1) {
    const double s = t * t;
    return -s * (1.0 / 6.0 + s * (1.0 / 180.0 + s * (1.0 / 2835.0 + s * (1.0 / 37800.0 + s / 467775.0))));
  }
  const double v = std::abs(std::sin(t) / t);
  return v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

// int g(x) w(x) dx on the sample grid.
template <class W>
double sampled_integral(const SampledLine& s, W&& w) {
  double acc = 0.0;
  for (std::size_t i = 1; i < s.x.size(); ++i) {
    acc += 0.5 * (s.x[i] - s.x[i - 1]) * (s.g[i] * w(s.x[i]) + s.g[i - 1] * w(s.x[i - 1]));
  }
  return acc;
}

bool binomial_is_odd(int k, int j) { return (j & (k - j)) == 0; }

}  // namespace

LineNoise LineNoise::gaussian(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw InvalidArgument("Gaussian noise needs variance > 0");
  return LineNoise(GaussianLine{variance});
}

LineNoise LineNoise::rectangular(double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("rectangular noise needs h > 0");
  return LineNoise(RectangularLine{half_width});
}

LineNoise LineNoise::sampled(std::vector<double> x, std::vector<double> g) {
  if (x.size() != g.size()) throw DimensionMismatch("density samples: x and g differ in length");
  if (x.size() < 3) throw InvalidArgument("density samples need at least three points");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw InvalidArgument("density sample grid must be increasing");
  }
  const double span = x.back() - x.front();
  if (std::abs(x.front() + x.back()) > 1e-9 * span) throw InvalidArgument("density sample grid must be symmetric");
  for (double v : g) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw NonPositiveDensity("density samples must be finite and >= 0");
  }
  const double mass = trapezoid(x, g);
  if (!(mass > 0.0)) throw NonPositiveDensity("density samples have zero mass");
  for (double& v : g) v /= mass;
  return LineNoise(SampledLine{std::move(x), std::move(g)});
}

double LineNoise::ghat(double xi) const {
  return std::visit(overloaded{
                        [xi](const GaussianLine& n) { return std::exp(-0.5 * n.variance * xi * xi); },
                        [xi](const RectangularLine& n) {
                          const double t = n.half_width * xi;
                          return t == 0.0 ? 1.0 : std::sin(t) / t;
                        },
                        [xi](const SampledLine& n) {
                          return sampled_integral(n, [xi](double x) { return std::cos(xi * x); });
                        },
                    },
                    v_);
}

double LineNoise::log_abs_ghat(double xi) const {
  return std::visit(overloaded{
                        [xi](const GaussianLine& n) { return -0.5 * n.variance * xi * xi; },
                        [xi](const RectangularLine& n) { return log_sinc(n.half_width * xi); },
                        [xi](const SampledLine& n) {
                          // 1 - g^ = int g 2 sin^2(xi x / 2).
                          const double c = sampled_integral(n, [xi](double x) {
                            const double s = std::sin(0.5 * xi * x);
                            return 2.0 * s * s;
                          });
                          if (c < 0.5) return std::log1p(-c);
                          const double v = std::abs(1.0 - c);
                          return v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v);
                        },
                    },
                    v_);
}

double LineNoise::variance() const {
  return std::visit(overloaded{
                        [](const GaussianLine& n) { return n.variance; },
                        [](const RectangularLine& n) { return n.half_width * n.half_width / 3.0; },
                        [](const SampledLine& n) { return sampled_integral(n, [](double x) { return x * x; }); },
                    },
                    v_);
}

std::string LineNoise::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const GaussianLine& n) { os << "gaussian:" << n.variance; },
                 [&](const RectangularLine& n) { os << "rect:" << n.half_width; },
                 [&](const SampledLine& n) { os << "sampled:" << n.x.size(); },
             },
             v_);
  return os.str();
}

namespace {

// Sum of 2^j log|g^(xi/2^j)| for j < depth, and the sign of the product.
std::pair<double, double> log_partial(double xi, const LineNoise& noise, int depth) {
  if (depth < 1) throw InvalidArgument("product depth must be >= 1");
  if (depth > 1023) throw InvalidArgument("product depth must be <= 1023");
  double sum = 0.0;
  for (int j = 0; j < depth; ++j) {
    const double lg = noise.log_abs_ghat(std::ldexp(xi, -j));
    if (lg > kOverOne) throw InvalidArgument("|g^| > 1: noise is not a probability density");
    if (lg == -std::numeric_limits<double>::infinity()) return {lg, 0.0};
    sum += std::ldexp(lg, j);
  }
  return {sum, noise.ghat(xi) < 0.0 ? -1.0 : 1.0};
}

}  // namespace

double fhat_partial(double xi, const LineNoise& noise, int depth) {
  const auto [lg, sign] = log_partial(xi, noise, depth);
  return sign == 0.0 ? 0.0 : sign * std::exp(lg);
}

ProductValue fhat_product(double xi, const LineNoise& noise) {
  double prev = fhat_partial(xi, noise, 1);
  for (int J = 2; J <= kMaxDepth; J *= 2) {
    const double cur = fhat_partial(xi, noise, J);
    if (std::abs(cur - prev) < 1e-12) return {cur, J};
    prev = cur;
  }
  return {prev, kMaxDepth};
}

double log_fhat_product(double xi, const LineNoise& noise) { return log_partial(xi, noise, kMaxDepth).first; }

namespace {

std::pair<double, double> log_lambda(double xi, const LineNoise& noise, double lambda, int depth) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in (0, 1)");
  if (depth < 1) throw InvalidArgument("product depth must be >= 1");
  const double ll = std::log(lambda), lm = std::log1p(-lambda);
  const double lx = std::log(std::abs(xi));
  double sum = 0.0;
  double sign = 1.0;
  if (xi == 0.0) return {0.0, 1.0};
  for (int k = 0; k < depth; ++k) {
    double level = 0.0;
    const double lk = std::lgamma(k + 1.0);
    for (int j = 0; j <= k; ++j) {
      const double arg = std::exp(lx + j * ll + (k - j) * lm);
      const double lg = noise.log_abs_ghat(arg);
      if (lg > kOverOne) throw InvalidArgument("|g^| > 1: noise is not a probability density");
      if (lg == -std::numeric_limits<double>::infinity()) return {lg, 0.0};
      if (binomial_is_odd(k, j) && noise.ghat(arg) < 0.0) sign = -sign;
      const double w = std::exp(lk - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0));
      level += w * lg;
    }
    sum += level;
    if (k > 2 && std::abs(level) <= 1e-18 * std::abs(sum)) break;
  }
  return {sum, sign};
}

}  // namespace

double fhat_product_lambda(double xi, const LineNoise& noise, double lambda, int depth) {
  const auto [lg, sign] = log_lambda(xi, noise, lambda, depth);
  return sign == 0.0 ? 0.0 : sign * std::exp(lg);
}

double log_fhat_product_lambda(double xi, const LineNoise& noise, double lambda, int depth) {
  return log_lambda(xi, noise, lambda, depth).first;
}

double variance_from_log_fhat(const std::function<double(double)>& log_fhat, double h) {
  if (!(h > 0.0)) throw InvalidArgument("difference step must be > 0");
  const double l0 = log_fhat(0.0);
  auto second = [&](double s) { return -(log_fhat(s) - 2.0 * l0 + log_fhat(-s)) / (s * s); };
  const double coarse = second(h), fine = second(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

LineDensity invert_to_density(std::span<const double> xi, std::span<const double> fhat, std::span<const double> x) {
  if (xi.size() != fhat.size()) throw DimensionMismatch("xi and f^ samples differ in length");
  if (xi.size() < 2 || x.size() < 2) throw InvalidArgument("inversion needs at least two samples");
  if (xi.front() != 0.0) throw InvalidArgument("xi grid must start at 0");
  const double d = xi[1] - xi[0];
  for (std::size_t i = 1; i < xi.size(); ++i) {
    if (!(std::abs(xi[i] - xi[i - 1] - d) <= 1e-9 * d)) throw InvalidArgument("xi grid must be equally spaced");
  }
  if (std::abs(fhat.back()) > 1e-10) {
    throw InsufficientDecay("|f^| = " + std::to_string(std::abs(fhat.back())) + " at xi = " +
                            std::to_string(xi.back()) + " exceeds 1e-10");
  }
  LineDensity out;
  out.x.assign(x.begin(), x.end());
  out.f.resize(x.size());
  const std::size_t last = xi.size() - 1;
  for (std::size_t m = 0; m < x.size(); ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
      const double w = (i == 0 || i == last) ? 0.5 : 1.0;
      s += w * fhat[i] * std::cos(xi[i] * x[m]);
    }
    out.f[m] = s * d / std::numbers::pi;
  }
  out.mass = trapezoid(out.x, out.f);
  std::vector<double> x2f(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) x2f[m] = out.x[m] * out.x[m] * out.f[m];
  out.variance = trapezoid(out.x, x2f) / out.mass;
  out.min_value = *std::min_element(out.f.begin(), out.f.end());
  return out;
}

double decay_cutoff(const std::function<double(double)>& fhat, double xi_cap) {
  for (double X = 1.0; X <= xi_cap; X *= 2.0) {
    bool small = true;
    for (int i = 0; i <= 64 && small; ++i) small = std::abs(fhat(X * (1.0 + i / 64.0))) < 1e-12;
    if (small) return X;
  }
  throw InsufficientDecay("f^ does not fall below 1e-12 before xi = " + std::to_string(xi_cap));
}

LineDensity equilibrium_density(const LineNoise& noise, double lambda, double half_range, std::size_t points) {
  if (!(half_range > 0.0)) throw InvalidArgument("x range must be > 0");
  if (points < 2) throw InvalidArgument("density grid needs at least two points");
  std::function<double(double)> fh;
  if (lambda == 0.5) {
    fh = [&noise](double xi) { return fhat_product(xi, noise).value; };
  } else {
    fh = [&noise, lambda](double xi) { return fhat_product_lambda(xi, noise, lambda); };
  }
  const double X = decay_cutoff(fh);
  // Trapezoid in xi aliases with period 2 pi / d; keep it well beyond the x range.
  const double d = std::min(0.02, std::numbers::pi / (4.0 * half_range));
  const auto n = static_cast<std::size_t>(std::ceil(X / d));
  std::vector<double> xi(n + 1), fv(n + 1), x(points);
  for (std::size_t i = 0; i <= n; ++i) {
    xi[i] = X * static_cast<double>(i) / static_cast<double>(n);
    fv[i] = fh(xi[i]);
  }
  for (std::size_t m = 0; m < points; ++m) {
    x[m] = -half_range + 2.0 * half_range * static_cast<double>(m) / static_cast<double>(points - 1);
  }
  return invert_to_density(xi, fv, x);
}

}  // namespace midalign
