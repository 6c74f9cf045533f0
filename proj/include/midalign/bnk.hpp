#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "midalign/kernel.hpp"
#include "midalign/noise.hpp"

namespace midalign {

/// G_{i,j} = gamma_{i+j} / (1 - 2 gamma_{i+j} Gamma((i+j)/2)) * Gamma((i-j)/2).
/// Maxwellian only. Throws SingularDenominator when 2 gamma_{i+j} Gamma((i+j)/2) = 1.
double bnk_coupling(int i, int j, const NoiseSpectrum& spectrum,
                    CollisionKernel kernel = CollisionKernel::maxwellian());

/// How the k = 1 row of the partition table is formed.
enum class Seeding {
  /// p_{1,n} = delta_{n,0}, i.e. a_1 = R.
  RecursionSeed,
  /// The k = 1 recursion with the computed p_1 row fed back into its own
  /// right-hand side; p_{1,0} = p_{1,1} = 0.
  SelfConsistent,
  /// The k = 1 recursion evaluated on the seeded family (a_1 = R on the
  /// right-hand side). Its series is the right-hand side of the a_1 equation
  /// as a function of R.
  Response,
};

/// p_{k,n} with a_k = sum_n p_{k,n} R^{k + 2n}. Rows k >= 2 are always built
/// from the seed p_{1,n} = delta_{n,0}; only the p_1 row depends on the
/// seeding. Entries are stored on the closed triangle k + n <= K_max + N_max,
/// 0 <= n <= N_max, which holds every dependency of the requested block.
class PartitionTable {
 public:
  std::size_t k_max() const { return k_max_; }
  std::size_t n_max() const { return n_max_; }
  /// Largest k stored (at n = 0).
  std::size_t effective_k_max() const { return k_max_ + n_max_; }
  Seeding seeding() const { return seeding_; }

  /// Throws DependencyOverflow outside the stored triangle.
  double p(std::size_t k, std::size_t n) const;
  /// p_{1,0..N_max} under the table's seeding.
  const std::vector<double>& p1() const { return p1_; }

 private:
  friend PartitionTable build_partition_table(const NoiseSpectrum&, std::size_t, std::size_t, Seeding);
  bool stored(std::size_t k, std::size_t n) const { return k >= 1 && n <= n_max_ && k + n <= k_max_ + n_max_; }
  std::size_t index(std::size_t k, std::size_t n) const { return n * (k_max_ + n_max_ + 1) + k; }

  std::size_t k_max_ = 0;
  std::size_t n_max_ = 0;
  Seeding seeding_ = Seeding::SelfConsistent;
  std::vector<double> rows_;  // k >= 2, indexed by index(k, n)
  std::vector<double> p1_;
};

/// Level n ascending, k ascending within a level; then the p_1 row.
/// Needs K_max >= 3, N_max >= 2 and gamma_k available up to K_max + N_max.
PartitionTable build_partition_table(const NoiseSpectrum& spectrum, std::size_t k_max, std::size_t n_max,
                                     Seeding seeding);

/// 1 + 2 N_max + support, with the support taken as N_max when unbounded.
std::size_t default_k_max(const NoiseFamily& family, std::size_t n_max);

/// sum_n p_{1,n} R^{1+2n} over the table's p_1 row.
double a1_series(double R, const PartitionTable& table);

/// sum_n p_{k,n} R^{k+2n}, n <= N_max.
double power_series_reconstruct(const PartitionTable& table, double R, std::size_t k);

/// Smallest R in (0, R_max] with a1_series(R) = R, located by a scan for a
/// sign change of sum_n p_{1,n} R^{2n} - 1 and refined by bisection.
/// R = 0 always solves the equation and is not reported.
std::optional<double> consistency_root(const PartitionTable& table, double r_max = 0.9, double tol = 1e-13);

}  // namespace midalign
