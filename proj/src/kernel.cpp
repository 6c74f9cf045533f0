#include "midalign/kernel.hpp"

#include <cmath>
#include <numbers>

#include "midalign/errors.hpp"

namespace midalign {

namespace {

constexpr double kPi = std::numbers::pi;

// (-1)^l for any integer l, including negative ones.
constexpr double alternating(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

// l such that twice/2 = l + 1/2; twice is odd so the division is exact.
constexpr int half_floor(int twice) { return (twice - 1) / 2; }

double maxwellian_gamma(HalfInteger u) {
  if (u.is_integer()) {
    return u.twice() == 0 ? 1.0 : 0.0;
  }
  const int l = half_floor(u.twice());
  return 2.0 * alternating(l) / (kPi * (2.0 * l + 1.0));
}

double hard_sphere_gamma(HalfInteger u) {
  if (u.is_integer()) {
    const double n = u.twice() / 2;
    return 2.0 / (kPi * (1.0 - 4.0 * n * n));
  }
  if (u.twice() == 1 || u.twice() == -1) {
    return 1.0 / kPi;
  }
  // Branch formula at |u|.
  const int l = half_floor(std::abs(u.twice()));
  const double sign = alternating(l);
  const double ld = l;
  return (2.0 * sign * ld + sign - 1.0) / (2.0 * kPi * ld * ld + 2.0 * kPi * ld);
}

}  // namespace

double CollisionKernel::gamma(HalfInteger u) const {
  return kind_ == KernelKind::Maxwellian ? maxwellian_gamma(u) : hard_sphere_gamma(u);
}

double CollisionKernel::rate(double y) const {
  return kind_ == KernelKind::Maxwellian ? 1.0 : std::abs(std::sin(0.5 * y));
}

std::string_view CollisionKernel::name() const {
  return kind_ == KernelKind::Maxwellian ? "maxwellian" : "hardsphere";
}

double gamma_eval(CollisionKernel kernel, HalfInteger u) { return kernel.gamma(u); }

CollisionKernel parse_kernel(std::string_view text) {
  if (text == "maxwellian") return CollisionKernel::maxwellian();
  if (text == "hardsphere" || text == "hard-sphere") return CollisionKernel::hard_sphere();
  throw InvalidArgument("unknown kernel '" + std::string(text) + "' (expected maxwellian|hardsphere)");
}

}  // namespace midalign
