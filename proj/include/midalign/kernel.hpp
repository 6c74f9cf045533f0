#pragma once

#include <string>
#include <string_view>

namespace midalign {

/// An exact half-integer u = twice / 2. Mode couplings only ever evaluate the
/// kernel transform at such points, so branching on "integer or not" is done on
/// the integer numerator instead of on a floating-point value.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  static constexpr HalfInteger integer(int n) { return HalfInteger(2 * n); }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

enum class KernelKind { Maxwellian, HardSphere };

/// Collision-rate selector: beta(y) = 1 (Maxwellian) or |sin(y/2)| (hard sphere),
/// together with its Fourier transform Gamma(u) = (2 pi)^-1 int beta(y) e^{iuy} dy.
class CollisionKernel {
 public:
  constexpr CollisionKernel() = default;
  constexpr explicit CollisionKernel(KernelKind kind) : kind_(kind) {}

  static constexpr CollisionKernel maxwellian() { return CollisionKernel(KernelKind::Maxwellian); }
  static constexpr CollisionKernel hard_sphere() { return CollisionKernel(KernelKind::HardSphere); }

  constexpr KernelKind kind() const { return kind_; }

  /// Gamma(u) on the half-integer lattice; exact branch values, never 0/0.
  double gamma(HalfInteger u) const;

  /// beta(y) as a function of the angular separation y.
  double rate(double y) const;

  std::string_view name() const;

  friend constexpr bool operator==(CollisionKernel, CollisionKernel) = default;

 private:
  KernelKind kind_ = KernelKind::Maxwellian;
};

/// Gamma(twice/2) for the given kernel.
double gamma_eval(CollisionKernel kernel, HalfInteger u);

/// Parses "maxwellian" or "hardsphere" (also "hard-sphere").
CollisionKernel parse_kernel(std::string_view text);

}  // namespace midalign
