#include "midalign/bnk.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>

#include "midalign/errors.hpp"

namespace midalign {

double bnk_coupling(int i, int j, const NoiseSpectrum& spectrum, CollisionKernel kernel) {
  if (kernel.kind() != KernelKind::Maxwellian) {
    throw InvalidArgument("partition-series couplings are defined for the Maxwellian kernel only");
  }
  const int s = i + j;
  const double g = spectrum.gamma(s);
  const double den = 1.0 - 2.0 * g * kernel.gamma(HalfInteger::from_twice(s));
  if (den == 0.0) {
    throw SingularDenominator("1 - 2 gamma_" + std::to_string(std::abs(s)) + " Gamma(" + std::to_string(s) +
                              "/2) vanishes in G_{" + std::to_string(i) + "," + std::to_string(j) + "}");
  }
  return g / den * kernel.gamma(HalfInteger::from_twice(i - j));
}

double PartitionTable::p(std::size_t k, std::size_t n) const {
  if (!stored(k, n)) {
    throw DependencyOverflow("p_{" + std::to_string(k) + "," + std::to_string(n) +
                             "} lies outside the table (k + n <= " + std::to_string(k_max_ + n_max_) +
                             ", n <= " + std::to_string(n_max_) + ")");
  }
  return k == 1 ? p1_[n] : rows_[index(k, n)];
}

PartitionTable build_partition_table(const NoiseSpectrum& spectrum, std::size_t k_max, std::size_t n_max,
                                     Seeding seeding) {
  if (k_max < 3) throw InvalidArgument("partition table needs K_max >= 3");
  if (n_max < 2) throw InvalidArgument("partition table needs N_max >= 2");
  PartitionTable t;
  t.k_max_ = k_max;
  t.n_max_ = n_max;
  t.seeding_ = seeding;
  const std::size_t S = k_max + n_max;
  t.rows_.assign((n_max + 1) * (S + 1), 0.0);
  t.p1_.assign(n_max + 1, 0.0);

  auto G = [&](long i, long j) { return bnk_coupling(static_cast<int>(i), static_cast<int>(j), spectrum); };
  // Rows k >= 2 see the seed p_{1,n} = delta_{n,0}.
  auto seeded = [&](std::size_t k, std::size_t n) -> double {
    if (!t.stored(k, n)) {
      throw DependencyOverflow("recursion needs p_{" + std::to_string(k) + "," + std::to_string(n) +
                               "} outside the table");
    }
    if (k == 1) return n == 0 ? 1.0 : 0.0;
    return t.rows_[t.index(k, n)];
  };

  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t k = 2; k + n <= S; ++k) {
      double first = 0.0;
      for (std::size_t j = 1; j < k; ++j) {
        const double g = G(static_cast<long>(k - j), static_cast<long>(j));
        for (std::size_t l = 0; l <= n; ++l) first += g * seeded(k - j, l) * seeded(j, n - l);
      }
      double second = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double g = G(static_cast<long>(k + j), -static_cast<long>(j));
        for (std::size_t l = 0; l + j <= n; ++l) second += g * seeded(k + j, l) * seeded(j, n - j - l);
      }
      t.rows_[t.index(k, n)] = first + 2.0 * second;
    }
  }

  if (seeding == Seeding::RecursionSeed) {
    t.p1_[0] = 1.0;
    return t;
  }
  for (std::size_t n = 0; n <= n_max; ++n) {
    double sum = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double g = G(static_cast<long>(1 + j), -static_cast<long>(j));
      for (std::size_t l = 0; l + j <= n; ++l) {
        const std::size_t m = n - j - l;
        const double pj = (j == 1 && seeding == Seeding::SelfConsistent) ? t.p1_[m] : seeded(j, m);
        sum += g * seeded(1 + j, l) * pj;
      }
    }
    t.p1_[n] = 2.0 * sum;
  }
  return t;
}

std::size_t default_k_max(const NoiseFamily& family, std::size_t n_max) {
  const auto support = family.support();
  const std::size_t s = support ? static_cast<std::size_t>(*support) : n_max;
  return 1 + 2 * n_max + s;
}

double a1_series(double R, const PartitionTable& table) {
  if (!(std::abs(R) < 1.0)) throw InvalidArgument("series evaluation needs |R| < 1");
  return power_series_reconstruct(table, R, 1);
}

double power_series_reconstruct(const PartitionTable& table, double R, std::size_t k) {
  if (!(std::abs(R) < 1.0)) throw InvalidArgument("series evaluation needs |R| < 1");
  if (k < 1 || k > table.k_max()) throw InvalidArgument("mode index outside 1..K_max");
  // Horner in R^2, then the common factor R^k.
  const double r2 = R * R;
  double s = 0.0;
  for (std::size_t n = table.n_max() + 1; n-- > 0;) s = s * r2 + table.p(k, n);
  return s * std::pow(R, static_cast<double>(k));
}

std::optional<double> consistency_root(const PartitionTable& table, double r_max, double tol) {
  if (!(r_max > 0.0 && r_max < 1.0)) throw InvalidArgument("consistency search needs 0 < R_max < 1");
  const auto& p1 = table.p1();
  auto h = [&](double R) {
    const double r2 = R * R;
    double s = 0.0;
    for (std::size_t n = p1.size(); n-- > 0;) s = s * r2 + p1[n];
    return s - 1.0;
  };
  constexpr int kScan = 4000;
  double lo = r_max / kScan;
  double hlo = h(lo);
  for (int i = 2; i <= kScan; ++i) {
    const double hi = r_max * i / kScan;
    const double hhi = h(hi);
    if (hlo == 0.0) return lo;
    if ((hlo < 0.0) != (hhi < 0.0)) {
      auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
      const auto bracket = boost::math::tools::bisect(h, lo, hi, done);
      return 0.5 * (bracket.first + bracket.second);
    }
    lo = hi;
    hlo = hhi;
  }
  return std::nullopt;
}

}  // namespace midalign
