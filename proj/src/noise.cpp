#include "midalign/noise.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "midalign/errors.hpp"

namespace midalign {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoefficientSlack = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sinc(double s) {
  if (std::abs(s) < 1e-4) {
    const double s2 = s * s;
    return 1.0 - s2 / 6.0 + s2 * s2 / 120.0;
  }
  return std::sin(s) / s;
}

double rho_hat(const PeriodizedNoise& p, double s) {
  switch (p.base) {
    case BaseDensity::Gaussian:
      return std::exp(-0.5 * s * s);
    case BaseDensity::Rectangular:
      return sinc(s);
    case BaseDensity::Custom: {
      auto integrand = [&](double y) { return p.density(y) * std::cos(s * y); };
      double err = 0.0;
      const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          integrand, -p.support, p.support, 20, 1e-13, &err);
      return value;
    }
  }
  return 0.0;
}

// Smallest tau >= 0 with rho_hat(tau) = target, assuming rho_hat decreases
// from 1 on the bracket.
double invert_rho_hat(const PeriodizedNoise& p, double target) {
  double lo = 0.0;
  double hi = 1.0;
  const double hi_cap = p.base == BaseDensity::Rectangular ? kPi : 1e6;
  while (rho_hat(p, hi) > target) {
    if (hi >= hi_cap) break;
    hi = std::min(2.0 * hi, hi_cap);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho_hat(p, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void require_coefficient(double g, int k) {
  if (!std::isfinite(g) || std::abs(g) > 1.0 + kCoefficientSlack) {
    throw InvalidArgument("noise coefficient gamma_" + std::to_string(k) + " = " + std::to_string(g) +
                          " is not the Fourier coefficient of a probability density (|gamma_k| <= 1)");
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

NoiseFamily NoiseFamily::fejer(int order, double gamma1) {
  if (order < 2) throw InvalidArgument("Fejer order must be >= 2");
  // All |gamma_k| <= 1 exactly when gamma1 <= 1; g >= 0 additionally needs
  // gamma1 <= (N-1)/N, which NoiseSpectrum::nonnegative reports.
  if (!(gamma1 >= 0.0 && gamma1 <= 1.0)) {
    throw InvalidArgument("Fejer gamma1 = " + format_double(gamma1) + " outside [0, 1]");
  }
  return NoiseFamily(FejerNoise{order, gamma1});
}

NoiseFamily NoiseFamily::periodized_gaussian(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("noise scale tau must be >= 0");
  return NoiseFamily(PeriodizedNoise{BaseDensity::Gaussian, tau, {}, 0.0});
}

NoiseFamily NoiseFamily::periodized_rectangular(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("noise scale tau must be >= 0");
  return NoiseFamily(PeriodizedNoise{BaseDensity::Rectangular, tau, {}, 0.0});
}

NoiseFamily NoiseFamily::periodized_custom(std::function<double(double)> rho, double support, double tau) {
  if (!rho) throw InvalidArgument("custom base density is empty");
  if (!(support > 0.0) || !std::isfinite(support)) throw InvalidArgument("custom density support must be > 0");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("noise scale tau must be >= 0");
  return NoiseFamily(PeriodizedNoise{BaseDensity::Custom, tau, std::move(rho), support});
}

NoiseFamily NoiseFamily::explicit_list(std::vector<double> gammas) {
  for (std::size_t i = 0; i < gammas.size(); ++i) require_coefficient(gammas[i], static_cast<int>(i) + 1);
  return NoiseFamily(ExplicitNoise{std::move(gammas)});
}

double NoiseFamily::coefficient(int k) const {
  k = std::abs(k);
  if (k == 0) return 1.0;
  return std::visit(overloaded{
                        [k](const FejerNoise& f) {
                          if (k >= f.order) return 0.0;
                          const double lambda = f.order * f.gamma1 / (f.order - 1);
                          return lambda * (f.order - k) / f.order;
                        },
                        [k](const PeriodizedNoise& p) { return rho_hat(p, p.tau * k); },
                        [k](const ExplicitNoise& e) {
                          return static_cast<std::size_t>(k) <= e.gammas.size() ? e.gammas[k - 1] : 0.0;
                        },
                    },
                    family_);
}

NoiseFamily NoiseFamily::with_gamma1(double gamma1) const {
  return std::visit(overloaded{
                        [gamma1](const FejerNoise& f) { return fejer(f.order, gamma1); },
                        [gamma1](const PeriodizedNoise& p) {
                          if (!(gamma1 > 0.0 && gamma1 <= 1.0)) {
                            throw InvalidArgument("periodized noise needs gamma1 in (0, 1]");
                          }
                          PeriodizedNoise q = p;
                          if (gamma1 == 1.0) {
                            q.tau = 0.0;
                          } else if (p.base == BaseDensity::Gaussian) {
                            q.tau = std::sqrt(-2.0 * std::log(gamma1));
                          } else {
                            q.tau = invert_rho_hat(p, gamma1);
                          }
                          return NoiseFamily(std::move(q));
                        },
                        [gamma1](const ExplicitNoise& e) {
                          std::vector<double> g = e.gammas;
                          if (g.empty()) g.resize(1);
                          g[0] = gamma1;
                          return explicit_list(std::move(g));
                        },
                    },
                    family_);
}

std::optional<int> NoiseFamily::support() const {
  return std::visit(overloaded{
                        [](const FejerNoise& f) -> std::optional<int> { return f.order - 1; },
                        [](const PeriodizedNoise&) -> std::optional<int> { return std::nullopt; },
                        [](const ExplicitNoise& e) -> std::optional<int> { return static_cast<int>(e.gammas.size()); },
                    },
                    family_);
}

std::string NoiseFamily::describe() const {
  return std::visit(overloaded{
                        [](const FejerNoise& f) { return "fejer:" + std::to_string(f.order) + "@" + format_double(f.gamma1); },
                        [](const PeriodizedNoise& p) {
                          const char* tag = p.base == BaseDensity::Gaussian      ? "gaussian:"
                                            : p.base == BaseDensity::Rectangular ? "rect:"
                                                                                 : "custom:";
                          return std::string(tag) + format_double(p.tau);
                        },
                        [](const ExplicitNoise& e) {
                          std::string s = "list:";
                          for (std::size_t i = 0; i < e.gammas.size(); ++i) {
                            if (i) s += ",";
                            s += format_double(e.gammas[i]);
                          }
                          return s;
                        },
                    },
                    family_);
}

NoiseSpectrum::NoiseSpectrum(NoiseFamily family, std::vector<double> coefficients)
    : family_(std::move(family)), coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw InvalidArgument("noise spectrum needs gamma_0");
  if (coefficients_[0] != 1.0) throw InvalidArgument("noise spectrum must have gamma_0 = 1");
  for (std::size_t k = 1; k < coefficients_.size(); ++k) require_coefficient(coefficients_[k], static_cast<int>(k));
}

double NoiseSpectrum::gamma(int k) const {
  const auto idx = static_cast<std::size_t>(std::abs(k));
  if (idx < coefficients_.size()) return coefficients_[idx];
  const auto top = family_.support();
  if (top && static_cast<int>(idx) > *top) return 0.0;
  throw InvalidArgument("gamma_" + std::to_string(idx) + " requested beyond truncation " +
                        std::to_string(truncation()));
}

double NoiseSpectrum::density(double x) const {
  // cos(kx) by the Chebyshev recurrence; one trig call per evaluation.
  const double c1 = std::cos(x);
  double prev = 1.0;
  double cur = c1;
  double sum = 1.0;
  for (std::size_t k = 1; k < coefficients_.size(); ++k) {
    sum += 2.0 * coefficients_[k] * cur;
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  return sum;
}

double NoiseSpectrum::min_density(std::size_t grid) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid; ++j) {
    m = std::min(m, density(-kPi + 2.0 * kPi * (j + 1) / grid));
  }
  return m;
}

double NoiseSpectrum::max_density(std::size_t grid) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid; ++j) {
    m = std::max(m, density(-kPi + 2.0 * kPi * (j + 1) / grid));
  }
  return m;
}

NoiseSpectrum noise_coefficients(const NoiseFamily& family, std::size_t truncation) {
  if (truncation < 1) throw InvalidArgument("noise truncation K must be >= 1");
  std::vector<double> c(truncation + 1);
  for (std::size_t k = 0; k <= truncation; ++k) c[k] = family.coefficient(static_cast<int>(k));
  return NoiseSpectrum(family, std::move(c));
}

NoiseFamily parse_noise(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("noise spec '" + text + "' must look like kind:value");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw InvalidArgument("bad number '" + s + "' in noise spec '" + text + "'");
    return v;
  };
  if (kind == "fejer") {
    const double order = number(arg);
    if (order != std::floor(order) || order < 2 || order > 100000) {
      throw InvalidArgument("Fejer order must be an integer >= 2");
    }
    return NoiseFamily::fejer(static_cast<int>(order), 0.0);
  }
  if (kind == "gaussian") return NoiseFamily::periodized_gaussian(number(arg));
  if (kind == "rect") return NoiseFamily::periodized_rectangular(number(arg));
  if (kind == "list") {
    std::ifstream in(arg);
    if (!in) throw InvalidArgument("cannot open noise coefficient file '" + arg + "'");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::replace(all.begin(), all.end(), ',', ' ');
    std::istringstream is(all);
    std::vector<double> g;
    std::string tok;
    while (is >> tok) g.push_back(number(tok));
    if (g.empty()) throw InvalidArgument("noise coefficient file '" + arg + "' is empty");
    return NoiseFamily::explicit_list(std::move(g));
  }
  throw InvalidArgument("unknown noise kind '" + kind + "' (expected fejer|gaussian|rect|list)");
}

}  // namespace midalign
