#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace midalign {

/// Even density on the circle, f(x) = 1 + 2 sum_{k=1..K} a_k cos(kx) with
/// respect to dx / (2 pi). Only a_0..a_K are stored; a_0 = 1 always.
class FourierState {
 public:
  /// Uniform state (a_k = 0 for k >= 1) with truncation K >= 1.
  explicit FourierState(std::size_t truncation);

  /// State with the given a_1..a_K.
  static FourierState from_modes(std::span<const double> a1_to_K);

  std::size_t truncation() const { return modes_.size() - 1; }

  /// a_{|k|}; a_0 = 1, zero above the truncation.
  double operator[](int k) const;
  void set(std::size_t k, double value);

  /// a_0..a_K.
  std::span<const double> modes() const { return modes_; }
  /// a_1..a_K, the evolving coordinates.
  std::span<const double> tail() const { return std::span<const double>(modes_).subspan(1); }
  std::span<double> tail() { return std::span<double>(modes_).subspan(1); }

  /// Every |a_k| <= 1 (bounded by the total mass).
  bool within_mass_bound() const;

  /// max_k |a_k - b_k| over k >= 1; truncations must agree.
  double distance(const FourierState& other) const;

  /// Copy with truncation changed; new modes are zero.
  FourierState resized(std::size_t truncation) const;

 private:
  std::vector<double> modes_;
};

}  // namespace midalign
