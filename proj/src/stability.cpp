#include "midalign/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "midalign/equilibria.hpp"
#include "midalign/errors.hpp"

namespace midalign {

double uniform_eigenvalue(int k, const NoiseSpectrum& spectrum, CollisionKernel kernel) {
  if (k < 1) throw InvalidArgument("uniform_eigenvalue needs k >= 1");
  const double half = kernel.gamma(HalfInteger::from_twice(k));
  return 2.0 * spectrum.gamma(k) * half - kernel.gamma(HalfInteger::integer(0)) - kernel.gamma(HalfInteger::integer(k));
}

double critical_gamma1(CollisionKernel kernel) {
  switch (kernel.kind()) {
    case KernelKind::Maxwellian:
      return std::numbers::pi / 4.0;
    case KernelKind::HardSphere:
      return 2.0 / 3.0;
  }
  throw InvalidArgument("unknown kernel");
}

Eigen::MatrixXd flow_jacobian(const FourierState& state, const CouplingTable& table) {
  const std::size_t K = table.truncation();
  if (state.truncation() != K) {
    throw DimensionMismatch("state truncation " + std::to_string(state.truncation()) +
                            " does not match table truncation " + std::to_string(K));
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  auto a = [&](std::size_t n) { return state[static_cast<int>(n)]; };
  for (std::size_t k = 1; k <= K; ++k) {
    for (std::size_t j = 1; j <= K; ++j) {
      double v = j == k ? table.linear(k) : 0.0;
      if (j < k) v += (table.quadratic(k, j) + table.quadratic(k, k - j)) * a(k - j);
      if (j > k) v += table.quadratic(k, j) * a(j - k);
      if (j + k <= K) v += table.quadratic(k, j + k) * a(j + k);
      J(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(j - 1)) = v;
    }
  }
  return J;
}

Eigen::MatrixXd jacobian(const FourierState& state, const CouplingTable& table) {
  Eigen::MatrixXd J = flow_jacobian(state, table);
  J.diagonal().array() += 1.0;
  return J;
}

EigenReport branch_eigenvalues(const FourierState& state, const CouplingTable& table) {
  const Eigen::MatrixXd J = jacobian(state, table);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(J, false);
  if (solver.info() != Eigen::Success) throw EigenSolverFailure("dense eigensolver did not converge");

  EigenReport report;
  report.gamma1 = table.spectrum().gamma(1);
  const auto& ev = solver.eigenvalues();
  report.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              const double ax = std::abs(x), ay = std::abs(y);
              if (ax != ay) return ax > ay;
              return x.real() > y.real();
            });
  report.leading = report.eigenvalues.front();
  report.stable = true;
  report.max_growth_rate = -std::numeric_limits<double>::infinity();
  for (const auto& mu : report.eigenvalues) {
    if (!(std::abs(mu) < 1.0)) report.stable = false;
    report.max_growth_rate = std::max(report.max_growth_rate, mu.real() - 1.0);
  }
  return report;
}

double eigenvalue_slope(const NoiseFamily& family, std::span<const double> deltas, const BranchConfig& config) {
  if (deltas.size() < 4) throw InvalidArgument("eigenvalue_slope needs at least four offsets");
  std::vector<double> d(deltas.begin(), deltas.end());
  std::sort(d.begin(), d.end());
  if (!(d.front() > 0.0) || d.back() > 0.05) throw InvalidArgument("offsets must lie in (0, 0.05]");
  if (std::adjacent_find(d.begin(), d.end()) != d.end()) throw InvalidArgument("offsets must be distinct");

  const double gc = critical_gamma1(config.kernel);
  const CouplingTable at_critical = make_coupling_table(config.kernel, family.with_gamma1(gc), config.truncation);
  const double lambda0 = branch_eigenvalues(FourierState(config.truncation), at_critical).leading.real();

  std::vector<double> gammas(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) gammas[i] = gc + d[i];
  const BifurcationDiagram diagram = continue_branch(family, gammas, config);
  if (diagram.rows.size() != d.size()) throw NonConvergence("branch continuation aborted", {});

  std::vector<double> slopes(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const DiagramRow& row = diagram.rows[i];
    if (!row.converged || !row.nontrivial) {
      throw NonConvergence("no nontrivial equilibrium at gamma1 = " + std::to_string(row.gamma1),
                           std::vector<double>(row.state.tail().begin(), row.state.tail().end()));
    }
    slopes[i] = (row.eigen.leading.real() - lambda0) / d[i];
  }

  // Neville to delta = 0 on the three smallest offsets.
  double p[3] = {slopes[0], slopes[1], slopes[2]};
  for (int level = 1; level <= 2; ++level) {
    for (int i = 0; i + level <= 2; ++i) {
      p[i] = (d[i + level] * p[i] - d[i] * p[i + 1]) / (d[i + level] - d[i]);
    }
  }
  return p[0];
}

}  // namespace midalign
