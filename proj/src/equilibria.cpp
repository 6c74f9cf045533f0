#include "midalign/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "midalign/errors.hpp"
#include "midalign/evolution.hpp"

namespace midalign {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTrivialA1 = 1e-9;

struct NewtonOutcome {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;
};

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Damped Newton: full step first, halved while the 2-norm of the residual
// does not decrease.
template <class Residual, class Jacobian>
NewtonOutcome damped_newton(Eigen::VectorXd x, Residual&& F, Jacobian&& DF, const NewtonOptions& opt) {
  Eigen::VectorXd r = F(x);
  for (int it = 0;; ++it) {
    const double rmax = r.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(rmax)) throw NonConvergence("residual is not finite", to_std(x));
    if (rmax < opt.tol) return {x, it, rmax};
    if (it == opt.max_iterations) {
      throw NonConvergence("Newton did not converge in " + std::to_string(opt.max_iterations) +
                               " iterations (residual " + std::to_string(rmax) + ")",
                           to_std(x));
    }
    const Eigen::MatrixXd J = DF(x);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) throw NonConvergence("singular Jacobian in Newton iteration", to_std(x));
    const Eigen::VectorXd dx = lu.solve(-r);
    const double step = dx.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(step) || step > opt.divergence_bound) {
      throw NonConvergence("Newton step diverged", to_std(x));
    }
    const double norm0 = r.norm();
    double t = 1.0;
    Eigen::VectorXd xt, rt;
    for (int h = 0;; ++h) {
      xt = x + t * dx;
      rt = F(xt);
      if (rt.norm() < norm0 || h == opt.max_halvings) break;
      t *= 0.5;
    }
    x = std::move(xt);
    r = std::move(rt);
  }
}

FourierState state_from(const Eigen::VectorXd& x) {
  return FourierState::from_modes(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

void canonical_sign(FourierState& s) {
  if (s[1] >= 0.0) return;
  for (std::size_t k = 1; k <= s.truncation(); k += 2) s.set(k, -s[static_cast<int>(k)]);
}

std::size_t odd_count(std::size_t K) { return (K + 1) / 2; }

}  // namespace

std::vector<double> stationary_residual(const FourierState& state, const CouplingTable& table) {
  return rhs(state, table);
}

StationarySolution solve_stationary(const CouplingTable& table, const FourierState& guess, double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-6)) throw InvalidArgument("solver tolerance must lie in [1e-14, 1e-6]");
  NewtonOptions opt;
  opt.tol = tol;
  return solve_stationary(table, guess, opt);
}

StationarySolution solve_stationary(const CouplingTable& table, const FourierState& guess,
                                    const NewtonOptions& options) {
  const std::size_t K = table.truncation();
  if (guess.truncation() != K) throw DimensionMismatch("guess truncation does not match table truncation");
  Eigen::VectorXd x0(static_cast<Eigen::Index>(K));
  for (std::size_t k = 1; k <= K; ++k) x0(static_cast<Eigen::Index>(k - 1)) = guess[static_cast<int>(k)];

  auto F = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    rhs_into(std::span<const double>(x.data(), K), table, std::span<double>(out.data(), K));
    return out;
  };
  auto DF = [&](const Eigen::VectorXd& x) { return flow_jacobian(state_from(x), table); };

  const NewtonOutcome res = damped_newton(std::move(x0), F, DF, options);
  StationarySolution sol{state_from(res.x), res.iterations, res.residual};
  canonical_sign(sol.state);
  return sol;
}

FourierState ReducedState::to_full(const NoiseSpectrum& spectrum) const {
  const std::size_t K = spectrum.truncation();
  if (K < 2) throw InvalidArgument("reduced coordinates need K >= 2");
  const double g2 = spectrum.gamma(2);
  if (g2 == 0.0) throw InvalidArgument("reduced coordinates need gamma_2 != 0");
  FourierState s(K);
  const double a1 = std::sqrt(a2 / g2);
  s.set(1, a1);
  s.set(2, a2);
  for (std::size_t p = 3; p <= K; p += 2) {
    const std::size_t i = (p - 3) / 2;
    s.set(p, i < tilde_odd.size() ? a1 * tilde_odd[i] : 0.0);
  }
  for (std::size_t q = 4; q <= K; q += 2) {
    const double h = s[static_cast<int>(q / 2)];
    s.set(q, spectrum.gamma(static_cast<int>(q)) * h * h);
  }
  return s;
}

ReducedState ReducedState::from_full(const FourierState& state) {
  const double a1 = state[1];
  if (a1 == 0.0) throw InvalidArgument("reduced coordinates need a_1 != 0");
  ReducedState z;
  z.a2 = state[2];
  for (std::size_t p = 3; p <= state.truncation(); p += 2) z.tilde_odd.push_back(state[static_cast<int>(p)] / a1);
  return z;
}

StationarySolution solve_reduced(const CouplingTable& table, const ReducedState& guess, const NewtonOptions& options) {
  if (table.kernel().kind() != KernelKind::Maxwellian) {
    throw InvalidArgument("reduced coordinates rely on the Maxwellian even-mode closure");
  }
  const std::size_t K = table.truncation();
  const NoiseSpectrum& spec = table.spectrum();
  const auto m = static_cast<Eigen::Index>(odd_count(K));
  const double g2 = spec.gamma(2);

  auto unpack = [&](const Eigen::VectorXd& z) {
    ReducedState r;
    r.a2 = z(0);
    r.tilde_odd.assign(z.data() + 1, z.data() + z.size());
    return r.to_full(spec);
  };
  auto F = [&](const Eigen::VectorXd& z) {
    const FourierState s = unpack(z);
    const std::vector<double> r = rhs(s, table);
    Eigen::VectorXd g(m);
    for (Eigen::Index i = 0; i < m; ++i) g(i) = r[static_cast<std::size_t>(2 * i)] / s[1];
    return g;
  };
  auto DF = [&](const Eigen::VectorXd& z) {
    const FourierState s = unpack(z);
    const double a1 = s[1];
    // D(k-1, c) = d a_k / d z_c.
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), m);
    D(0, 0) = 1.0 / (2.0 * g2 * a1);
    D(1, 0) = 1.0;
    for (std::size_t p = 3; p <= K; p += 2) {
      const auto c = static_cast<Eigen::Index>((p - 1) / 2);
      D(static_cast<Eigen::Index>(p - 1), 0) = z(c) * D(0, 0);
      D(static_cast<Eigen::Index>(p - 1), c) = a1;
    }
    for (std::size_t q = 4; q <= K; q += 2) {
      const double coef = 2.0 * spec.gamma(static_cast<int>(q)) * s[static_cast<int>(q / 2)];
      D.row(static_cast<Eigen::Index>(q - 1)) = coef * D.row(static_cast<Eigen::Index>(q / 2 - 1));
    }
    const Eigen::MatrixXd JD = flow_jacobian(s, table) * D;
    const std::vector<double> r = rhs(s, table);
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<Eigen::Index>(2 * i);
      out.row(i) = JD.row(k) / a1 - (r[static_cast<std::size_t>(k)] / (a1 * a1)) * D.row(0);
    }
    return out;
  };

  Eigen::VectorXd z0(m);
  z0(0) = guess.a2;
  for (Eigen::Index i = 1; i < m; ++i) {
    const auto idx = static_cast<std::size_t>(i - 1);
    z0(i) = idx < guess.tilde_odd.size() ? guess.tilde_odd[idx] : 0.0;
  }
  const NewtonOutcome res = damped_newton(std::move(z0), F, DF, options);
  StationarySolution sol{unpack(res.x), res.iterations, 0.0};
  for (double v : rhs(sol.state, table)) sol.residual = std::max(sol.residual, std::abs(v));
  return sol;
}

FourierState asymptotic_state(double gamma1, const NoiseFamily& family, std::size_t truncation) {
  const double gc = kPi / 4.0;
  if (!(gamma1 >= gc)) throw InvalidArgument("asymptotic_state needs gamma1 >= pi/4");
  FourierState s(truncation);
  const double delta = gamma1 - gc;
  if (delta == 0.0) return s;

  const NoiseFamily critical = family.with_gamma1(gc);
  const double g2c = critical.coefficient(2);
  const double g3c = critical.coefficient(3);
  if (!(g2c > 0.0)) throw InvalidArgument("square-root branch needs gamma_2(pi/4) > 0");
  const double a1 = std::sqrt(12.0 * delta / (kPi * g2c));
  s.set(1, a1);
  if (truncation >= 2) s.set(2, 12.0 / kPi * delta);
  if (truncation >= 3) {
    const double den = 4.0 * kPi * g3c + 3.0 * kPi * kPi;
    if (den == 0.0) throw SingularDenominator("4 pi gamma_3 + 3 pi^2 vanishes");
    s.set(3, a1 * 144.0 * g3c / den * delta);
  }
  const NoiseFamily here = family.with_gamma1(gamma1);
  for (std::size_t q = 4; q <= truncation; q += 2) {
    const double h = s[static_cast<int>(q / 2)];
    s.set(q, here.coefficient(static_cast<int>(q)) * h * h);
  }
  return s;
}

FourierState two_mode_guess(const CouplingTable& table) {
  const std::size_t K = table.truncation();
  FourierState s(K);
  if (K < 2) return s;
  const double L1 = table.linear(1), L2 = table.linear(2);
  const double c12 = table.quadratic(1, 2), c21 = table.quadratic(2, 1);
  const double ratio = L1 * L2 / (c12 * c21);
  if (!std::isfinite(ratio) || !(ratio > 0.0) || L2 == 0.0) return s;
  const double a1 = std::min(std::sqrt(ratio), 0.9);
  s.set(1, a1);
  s.set(2, -c21 * a1 * a1 / L2);
  return s;
}

StationarySolution solve_adaptive(const NoiseFamily& family, const FourierState& guess, const BranchConfig& config) {
  std::size_t K = std::max(config.truncation, guess.truncation());
  FourierState start = guess.resized(K);
  while (true) {
    const CouplingTable table = make_coupling_table(config.kernel, family, K);
    StationarySolution sol = solve_stationary(table, start, config.tol);
    if (!config.adaptive_truncation || K >= config.max_truncation ||
        std::abs(sol.state[static_cast<int>(K)]) < config.truncation_tol) {
      return sol;
    }
    K = std::min(2 * K, config.max_truncation);
    start = sol.state.resized(K);
  }
}

std::size_t BifurcationDiagram::max_truncation() const {
  std::size_t K = 0;
  for (const auto& r : rows) K = std::max(K, r.state.truncation());
  for (const auto& r : uniform_rows) K = std::max(K, r.state.truncation());
  return K;
}

bool BifurcationDiagram::fully_converged() const {
  if (aborted) return false;
  return std::all_of(rows.begin(), rows.end(), [](const DiagramRow& r) { return r.converged; });
}

namespace {

DiagramRow uniform_row(double gamma1, const NoiseFamily& fam, const BranchConfig& config) {
  DiagramRow row;
  row.gamma1 = gamma1;
  row.state = FourierState(config.truncation);
  row.converged = true;
  const CouplingTable table = make_coupling_table(config.kernel, fam, config.truncation);
  try {
    row.eigen = branch_eigenvalues(row.state, table);
  } catch (const EigenSolverFailure&) {
    row.eigen.gamma1 = gamma1;
  }
  return row;
}

// Relax from a weakly aligned state with the flow itself.
FourierState relaxed_guess(const CouplingTable& table) {
  FourierState s(table.truncation());
  s.set(1, 0.05);
  const double rate = table.linear(1);
  const double t_end = rate > 0.0 ? std::min(4000.0, 40.0 / rate) : 100.0;
  EvolveOptions opt;
  opt.dt = 0.05;
  opt.sample_interval = t_end;
  try {
    return evolve(s, table, t_end, opt).states.back();
  } catch (const BlowUp&) {
    return s;
  }
}

}  // namespace

BifurcationDiagram continue_branch(const NoiseFamily& family, std::span<const double> gammas,
                                   const BranchConfig& config) {
  if (gammas.empty()) throw InvalidArgument("continuation grid is empty");
  for (std::size_t i = 1; i < gammas.size(); ++i) {
    if (!(gammas[i] > gammas[i - 1])) throw InvalidArgument("continuation grid must be strictly increasing");
  }
  BifurcationDiagram diagram;
  diagram.experimental = config.kernel.kind() != KernelKind::Maxwellian;
  const double gc = critical_gamma1(config.kernel);

  std::optional<FourierState> previous;
  int failures = 0;
  for (const double g : gammas) {
    const NoiseFamily fam = family.with_gamma1(g);
    if (g <= gc) {
      diagram.rows.push_back(uniform_row(g, fam, config));
      continue;
    }
    diagram.uniform_rows.push_back(uniform_row(g, fam, config));

    DiagramRow row;
    row.gamma1 = g;
    try {
      const CouplingTable table = make_coupling_table(config.kernel, fam, config.truncation);
      // Candidate guesses in order; the first nontrivial solve wins.
      std::vector<std::function<FourierState()>> guesses;
      if (previous) guesses.emplace_back([&] { return *previous; });
      if (config.kernel.kind() == KernelKind::Maxwellian) {
        guesses.emplace_back([&] { return asymptotic_state(g, family, config.truncation); });
      }
      guesses.emplace_back([&] { return two_mode_guess(table); });
      guesses.emplace_back([&] { return relaxed_guess(table); });
      std::optional<StationarySolution> found;
      std::optional<NonConvergence> last_error;
      for (auto& make : guesses) {
        try {
          StationarySolution trial = solve_adaptive(fam, make(), config);
          const bool nontrivial = trial.state[1] > kTrivialA1;
          if (!found || nontrivial) found = std::move(trial);
          if (nontrivial) break;
        } catch (const NonConvergence& e) {
          last_error = e;
        }
      }
      if (!found) throw *last_error;
      const StationarySolution& sol = *found;
      row.state = sol.state;
      row.residual = sol.residual;
      row.converged = true;
      row.nontrivial = sol.state[1] > kTrivialA1;
      try {
        row.eigen = branch_eigenvalues(sol.state, make_coupling_table(config.kernel, fam, sol.state.truncation()));
      } catch (const EigenSolverFailure&) {
        row.eigen.gamma1 = g;
      }
      if (row.nontrivial) previous = sol.state;
      failures = 0;
    } catch (const NonConvergence& e) {
      row.state = e.last_iterate().empty() ? FourierState(config.truncation)
                                           : FourierState::from_modes(e.last_iterate());
      row.eigen.gamma1 = g;
      row.converged = false;
      ++failures;
    }
    diagram.rows.push_back(std::move(row));
    if (failures >= 3) {
      diagram.aborted = true;
      break;
    }
  }
  return diagram;
}

BifurcationDiagram continue_branch(const NoiseFamily& family, double gamma_lo, double gamma_hi, std::size_t steps,
                                   const BranchConfig& config) {
  if (steps < 8) throw InvalidArgument("continuation needs at least 8 steps");
  if (!(gamma_hi > gamma_lo)) throw InvalidArgument("continuation range must have gamma_hi > gamma_lo");
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    grid[i] = gamma_lo + (gamma_hi - gamma_lo) * static_cast<double>(i) / static_cast<double>(steps);
  }
  return continue_branch(family, grid, config);
}

ExponentFit fit_critical_exponent(const BifurcationDiagram& diagram, double gamma_c, double delta_lo,
                                  double delta_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  // Window edges with relative slack 1e-9.
  const double lo = delta_lo * (1.0 - 1e-9), hi = delta_hi * (1.0 + 1e-9);
  for (const auto& row : diagram.rows) {
    const double d = row.gamma1 - gamma_c;
    if (!row.converged || !row.nontrivial || d < lo || d > hi) continue;
    const double x = std::log(d), y = std::log(row.state[1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 6) {
    throw InsufficientData("exponent fit needs six converged nontrivial rows in the window, found " +
                           std::to_string(n));
  }
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / dn;
  return {slope, std::exp(intercept), n};
}

}  // namespace midalign
