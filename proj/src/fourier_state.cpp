#include "midalign/fourier_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "midalign/errors.hpp"

namespace midalign {

FourierState::FourierState(std::size_t truncation) : modes_(truncation + 1, 0.0) {
  if (truncation < 1) throw InvalidArgument("Fourier truncation K must be >= 1");
  modes_[0] = 1.0;
}

FourierState FourierState::from_modes(std::span<const double> a1_to_K) {
  FourierState s(a1_to_K.size());
  std::copy(a1_to_K.begin(), a1_to_K.end(), s.modes_.begin() + 1);
  return s;
}

double FourierState::operator[](int k) const {
  const auto idx = static_cast<std::size_t>(std::abs(k));
  return idx < modes_.size() ? modes_[idx] : 0.0;
}

void FourierState::set(std::size_t k, double value) {
  if (k == 0) throw InvalidArgument("a_0 is fixed to 1 by mass normalization");
  if (k >= modes_.size()) {
    throw DimensionMismatch("mode " + std::to_string(k) + " beyond truncation " + std::to_string(truncation()));
  }
  modes_[k] = value;
}

bool FourierState::within_mass_bound() const {
  return std::all_of(modes_.begin() + 1, modes_.end(), [](double a) { return std::abs(a) <= 1.0; });
}

double FourierState::distance(const FourierState& other) const {
  if (other.truncation() != truncation()) throw DimensionMismatch("states have different truncations");
  double d = 0.0;
  for (std::size_t k = 1; k < modes_.size(); ++k) d = std::max(d, std::abs(modes_[k] - other.modes_[k]));
  return d;
}

FourierState FourierState::resized(std::size_t truncation) const {
  FourierState s(truncation);
  const std::size_t n = std::min(truncation, this->truncation());
  std::copy(modes_.begin() + 1, modes_.begin() + 1 + static_cast<std::ptrdiff_t>(n), s.modes_.begin() + 1);
  return s;
}

}  // namespace midalign
