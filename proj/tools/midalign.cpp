// midalign: command-line front end producing CSV data for the midpoint
// alignment model.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "midalign/bnk.hpp"
#include "midalign/equilibria.hpp"
#include "midalign/errors.hpp"
#include "midalign/evolution.hpp"
#include "midalign/particles.hpp"
#include "midalign/realline.hpp"
#include "midalign/stability.hpp"

namespace {

using namespace midalign;

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2 };

struct Common {
  std::string kernel = "maxwellian";
  std::string noise = "fejer:9";
  std::optional<double> gamma1;
  std::size_t modes = 16;
  double tol = 1e-12;
  std::uint64_t seed = 1;
  std::string out;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string flag(bool b) { return b ? "true" : "false"; }

class Csv {
 public:
  explicit Csv(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidArgument("cannot open output file '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

  void header(const std::vector<std::string>& cols) { line(cols); }
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os() << (i ? "," : "") << cells[i];
    os() << '\n';
  }
  void metadata(const std::string& text) { os() << "# " << text << '\n'; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// "version=... command=... --opt=value ..." over every option, given or default.
std::string echo(const CLI::App& root, const CLI::App& sub, const std::string& extra = "") {
  std::ostringstream os;
  os << "version=" << kVersion << " command=" << sub.get_name();
  auto dump = [&os](const CLI::App& app) {
    for (const CLI::Option* opt : app.get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help" || name == "config") continue;
      std::string value;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      } else {
        value = opt->get_default_str();
        if (value.size() >= 2 && value.front() == '[' && value.back() == ']') value = value.substr(1, value.size() - 2);
      }
      if (value.empty()) continue;
      os << " --" << name << "=" << value;
    }
  };
  dump(root);
  dump(sub);
  if (!extra.empty()) os << " " << extra;
  return os.str();
}

NoiseFamily family_of(const Common& c) {
  NoiseFamily f = parse_noise(c.noise);
  return c.gamma1 ? f.with_gamma1(*c.gamma1) : f;
}

void require_tol(double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-6)) throw InvalidArgument("--tol must lie in [1e-14, 1e-6]");
}

BranchConfig branch_config(const Common& c) {
  BranchConfig cfg;
  cfg.kernel = parse_kernel(c.kernel);
  cfg.truncation = c.modes;
  cfg.tol = c.tol;
  return cfg;
}

// Single-point continuation: the full guess chain of continue_branch.
DiagramRow stationary_row(const NoiseFamily& family, double gamma1, const BranchConfig& cfg) {
  const double g[] = {gamma1};
  BifurcationDiagram d = continue_branch(family, g, cfg);
  return d.rows.front();
}

// ----------------------------------------------------------------------------

struct BifurcationArgs {
  double lo = 0.70;
  double hi = 0.90;
  std::size_t steps = 40;
  std::size_t log_points = 0;
  double delta_lo = 1e-4;
  double delta_hi = 1e-2;
  bool uniform_branch = false;
  bool fixed_modes = false;
};

int cmd_bifurcation(const Common& c, const BifurcationArgs& a, const CLI::App& root, const CLI::App& sub) {
  require_tol(c.tol);
  BranchConfig cfg = branch_config(c);
  cfg.adaptive_truncation = !a.fixed_modes;
  const NoiseFamily family = parse_noise(c.noise);
  const double gc = critical_gamma1(cfg.kernel);

  BifurcationDiagram d;
  if (a.log_points > 0) {
    if (!(a.delta_lo > 0.0 && a.delta_hi > a.delta_lo)) throw InvalidArgument("need 0 < --delta-lo < --delta-hi");
    if (a.log_points < 2) throw InvalidArgument("--log-points must be >= 2");
    std::vector<double> grid(a.log_points);
    for (std::size_t i = 0; i < a.log_points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(a.log_points - 1);
      grid[i] = gc + a.delta_lo * std::pow(a.delta_hi / a.delta_lo, t);
    }
    d = continue_branch(family, grid, cfg);
  } else {
    d = continue_branch(family, a.lo, a.hi, a.steps, cfg);
  }

  const std::size_t K = d.max_truncation();
  Csv csv(c.out);
  std::vector<std::string> head{"gamma1"};
  for (std::size_t k = 1; k <= K; ++k) head.push_back("a" + std::to_string(k));
  for (const char* s : {"leading_eig", "stable", "converged", "branch", "residual"}) head.emplace_back(s);
  csv.header(head);
  auto emit = [&](const DiagramRow& r, const char* branch) {
    std::vector<std::string> cells{num(r.gamma1)};
    for (std::size_t k = 1; k <= K; ++k) cells.push_back(num(r.state[static_cast<int>(k)]));
    cells.push_back(r.eigen.eigenvalues.empty() ? "nan" : num(r.eigen.leading.real()));
    cells.push_back(flag(r.eigen.stable));
    cells.push_back(flag(r.converged));
    cells.emplace_back(branch);
    cells.push_back(num(r.residual));
    csv.line(cells);
  };
  for (const auto& r : d.rows) emit(r, r.nontrivial ? "nontrivial" : "uniform");
  if (a.uniform_branch) {
    for (const auto& r : d.uniform_rows) emit(r, "uniform-unstable");
  }

  std::string extra = "gamma_c=" + num(gc) + " experimental=" + flag(d.experimental) + " aborted=" + flag(d.aborted);
  try {
    const ExponentFit fit = fit_critical_exponent(d, gc, a.delta_lo, a.delta_hi);
    extra += " exponent=" + num(fit.exponent) + " amplitude=" + num(fit.amplitude);
    std::cerr << "critical exponent " << num(fit.exponent) << " amplitude " << num(fit.amplitude) << " from "
              << fit.points << " rows\n";
  } catch (const InsufficientData&) {
  }
  if (d.experimental) std::cerr << "note: hard-sphere branch results are experimental\n";
  csv.metadata(echo(root, sub, extra));
  if (!d.fully_converged()) {
    std::cerr << "continuation did not converge on every row\n";
    return kNumerical;
  }
  return kOk;
}

// ----------------------------------------------------------------------------

struct StationaryArgs {
  std::size_t grid = 4096;
  std::string modes_out;
};

int cmd_stationary(const Common& c, const StationaryArgs& a, const CLI::App& root, const CLI::App& sub) {
  require_tol(c.tol);
  if (!c.gamma1) throw InvalidArgument("stationary needs --gamma1");
  const BranchConfig cfg = branch_config(c);
  const NoiseFamily family = parse_noise(c.noise);
  const DiagramRow row = stationary_row(family, *c.gamma1, cfg);
  const FourierState& s = row.state;
  if (a.grid < 2 * s.truncation() + 1) throw InvalidArgument("--grid must be at least 2K+1");
  const NoiseSpectrum spec = noise_coefficients(family.with_gamma1(*c.gamma1), s.truncation());
  const DensitySamples dens = reconstruct_density(s, a.grid);

  std::cerr << "residual " << num(row.residual) << " converged " << flag(row.converged) << " a1 " << num(s[1])
            << " min f " << num(dens.min_value) << "\n";

  const std::string extra = "a1=" + num(s[1]) + " residual=" + num(row.residual) +
                            " converged=" + flag(row.converged) + " stable=" + flag(row.eigen.stable) +
                            " min_f=" + num(dens.min_value);
  Csv csv(c.out);
  csv.header({"x", "f", "g"});
  for (std::size_t j = 0; j < dens.x.size(); ++j) {
    csv.line({num(dens.x[j]), num(dens.f[j]), num(spec.density(dens.x[j]))});
  }
  csv.metadata(echo(root, sub, extra));

  if (!a.modes_out.empty()) {
    Csv m(a.modes_out);
    m.header({"k", "a_k", "gamma_k"});
    for (std::size_t k = 0; k <= s.truncation(); ++k) {
      m.line({std::to_string(k), num(s[static_cast<int>(k)]), num(spec.gamma(static_cast<int>(k)))});
    }
    m.metadata(echo(root, sub, extra));
  }
  return row.converged ? kOk : kNumerical;
}

// ----------------------------------------------------------------------------

struct EvolveArgs {
  double t_end = 50.0;
  double dt = 0.01;
  double sample_interval = 0.1;
  std::vector<double> init{0.01};
  std::size_t rate_mode = 0;
  std::vector<double> window;
};

int cmd_evolve(const Common& c, const EvolveArgs& a, const CLI::App& root, const CLI::App& sub) {
  if (a.init.size() > c.modes) throw InvalidArgument("--init has more values than --modes");
  const NoiseFamily family = family_of(c);
  const CouplingTable table = make_coupling_table(parse_kernel(c.kernel), family, c.modes);
  FourierState init(c.modes);
  for (std::size_t k = 0; k < a.init.size(); ++k) init.set(k + 1, a.init[k]);
  EvolveOptions opt;
  opt.dt = a.dt;
  opt.sample_interval = a.sample_interval;
  if (!a.window.empty() && a.window.size() != 2) throw InvalidArgument("--window takes t_begin,t_end");
  if (a.rate_mode > c.modes) throw InvalidArgument("--rate mode exceeds --modes");

  const Trajectory traj = evolve(init, table, a.t_end, opt);
  std::string extra;
  if (a.rate_mode > 0) {
    const double t0 = a.window.empty() ? 0.0 : a.window[0];
    const double t1 = a.window.empty() ? a.t_end : a.window[1];
    const double rate = measure_rate(traj, a.rate_mode, t0, t1);
    const double predicted = uniform_eigenvalue(static_cast<int>(a.rate_mode), table.spectrum(), table.kernel());
    std::cerr << "rate of a" << a.rate_mode << " " << num(rate) << " (uniform-state lambda " << num(predicted)
              << ")\n";
    extra = "rate=" + num(rate) + " lambda=" + num(predicted);
  }
  Csv csv(c.out);
  std::vector<std::string> head{"t"};
  for (std::size_t k = 1; k <= c.modes; ++k) head.push_back("a" + std::to_string(k));
  csv.header(head);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<std::string> cells{num(traj.times[i])};
    for (std::size_t k = 1; k <= c.modes; ++k) cells.push_back(num(traj.states[i][static_cast<int>(k)]));
    csv.line(cells);
  }
  csv.metadata(echo(root, sub, extra));
  return kOk;
}

// ----------------------------------------------------------------------------

struct StabilityArgs {
  std::string state = "branch";
  std::vector<double> slope_deltas;
};

int cmd_stability(const Common& c, const StabilityArgs& a, const CLI::App& root, const CLI::App& sub) {
  require_tol(c.tol);
  if (!c.gamma1) throw InvalidArgument("stability needs --gamma1");
  if (a.state != "branch" && a.state != "uniform") throw InvalidArgument("--state must be branch or uniform");
  const BranchConfig cfg = branch_config(c);
  const NoiseFamily family = parse_noise(c.noise);
  FourierState s(c.modes);
  bool converged = true;
  if (a.state == "branch") {
    const DiagramRow row = stationary_row(family, *c.gamma1, cfg);
    s = row.state;
    converged = row.converged;
  }
  const CouplingTable table = make_coupling_table(cfg.kernel, family.with_gamma1(*c.gamma1), s.truncation());
  const EigenReport rep = branch_eigenvalues(s, table);

  std::string extra = "a1=" + num(s[1]) + " stable=" + flag(rep.stable) + " leading=" + num(rep.leading.real()) +
                      " converged=" + flag(converged);
  if (!a.slope_deltas.empty()) {
    const double slope = eigenvalue_slope(family, a.slope_deltas, cfg);
    std::cerr << "leading-eigenvalue slope " << num(slope) << "\n";
    extra += " slope=" + num(slope);
  }
  Csv csv(c.out);
  csv.header({"k", "lambda_uniform", "eig_re", "eig_im", "modulus"});
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    const auto& mu = rep.eigenvalues[i];
    const double lam = uniform_eigenvalue(static_cast<int>(i + 1), table.spectrum(), cfg.kernel);
    csv.line({std::to_string(i + 1), num(lam), num(mu.real()), num(mu.imag()), num(std::abs(mu))});
  }
  csv.metadata(echo(root, sub, extra));
  return converged ? kOk : kNumerical;
}

// ----------------------------------------------------------------------------

struct BnkArgs {
  std::size_t n_max = 8;
  std::size_t k_max = 0;
  std::string seeding = "response";
  double r_max = 0.9;
};

int cmd_bnk(const Common& c, const BnkArgs& a, const CLI::App& root, const CLI::App& sub) {
  if (parse_kernel(c.kernel).kind() != KernelKind::Maxwellian) {
    throw InvalidArgument("bnk supports the Maxwellian kernel only");
  }
  Seeding seeding;
  if (a.seeding == "response") {
    seeding = Seeding::Response;
  } else if (a.seeding == "selfconsistent") {
    seeding = Seeding::SelfConsistent;
  } else if (a.seeding == "seed") {
    seeding = Seeding::RecursionSeed;
  } else {
    throw InvalidArgument("--seeding must be response, selfconsistent or seed");
  }
  const NoiseFamily family = family_of(c);
  const std::size_t k_max = a.k_max > 0 ? a.k_max : default_k_max(family, a.n_max);
  const NoiseSpectrum spec = noise_coefficients(family, k_max + a.n_max);
  const PartitionTable t = build_partition_table(spec, k_max, a.n_max, seeding);
  const auto root_R = consistency_root(t, a.r_max);

  std::string extra = "effective_k_max=" + std::to_string(t.effective_k_max()) +
                      " consistency_root=" + (root_R ? num(*root_R) : std::string("none"));
  std::cerr << "consistency root " << (root_R ? num(*root_R) : std::string("none (R = 0 only)")) << "\n";
  Csv csv(c.out);
  csv.header({"k", "n", "p", "formal_method"});
  for (std::size_t k = 1; k <= t.k_max(); ++k) {
    for (std::size_t n = 0; n <= t.n_max(); ++n) csv.line({std::to_string(k), std::to_string(n), num(t.p(k, n)), "true"});
  }
  csv.metadata(echo(root, sub, extra));
  return kOk;
}

// ----------------------------------------------------------------------------

struct ReallineArgs {
  std::string line_noise = "rect:1";
  double lambda = 0.5;
  double half_range = 8.0;
  std::size_t points = 2049;
};

LineNoise parse_line_noise(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("--line-noise must look like kind:value");
  const std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
  if (kind == "gaussian" || kind == "rect") {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw InvalidArgument("bad number '" + arg + "' in --line-noise");
    }
    return kind == "gaussian" ? LineNoise::gaussian(v) : LineNoise::rectangular(v);
  }
  if (kind == "file") {
    std::ifstream in(arg);
    if (!in) throw InvalidArgument("cannot open density file '" + arg + "'");
    std::vector<double> x, g;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      for (char& ch : line) {
        if (ch == ',') ch = ' ';
      }
      std::istringstream ls(line);
      double xv, gv;
      if (ls >> xv >> gv) {
        x.push_back(xv);
        g.push_back(gv);
      }
    }
    return LineNoise::sampled(std::move(x), std::move(g));
  }
  throw InvalidArgument("unknown --line-noise kind '" + kind + "' (expected gaussian|rect|file)");
}

int cmd_realline(const Common& c, const ReallineArgs& a, const CLI::App& root, const CLI::App& sub) {
  if (!(a.lambda > 0.0 && a.lambda < 1.0)) throw InvalidArgument("--lambda must lie in (0, 1)");
  const LineNoise noise = parse_line_noise(a.line_noise);
  const LineDensity d = equilibrium_density(noise, a.lambda, a.half_range, a.points);
  auto log_fhat = [&](double xi) {
    return a.lambda == 0.5 ? log_fhat_product(xi, noise) : log_fhat_product_lambda(xi, noise, a.lambda);
  };
  const double var_fhat = variance_from_log_fhat(log_fhat);
  std::cerr << "variance " << num(d.variance) << " (from f^: " << num(var_fhat) << ", law "
            << num(noise.variance() / (2.0 * a.lambda * (1.0 - a.lambda))) << ") mass " << num(d.mass) << "\n";
  Csv csv(c.out);
  csv.header({"x", "f", "variance", "mass"});
  for (std::size_t j = 0; j < d.x.size(); ++j) csv.line({num(d.x[j]), num(d.f[j]), num(d.variance), num(d.mass)});
  csv.metadata(echo(root, sub, "variance_fhat=" + num(var_fhat) + " min_f=" + num(d.min_value)));
  return kOk;
}

// ----------------------------------------------------------------------------

struct ParticleArgs {
  std::size_t particles = 10000;
  double t_end = 100.0;
  double sample_every = 1.0;
  std::size_t observe = 8;
  std::size_t replicas = 1;
  double burn_in = 0.0;
  std::optional<double> init_a1;
};

int cmd_particles(const Common& c, const ParticleArgs& a, const CLI::App& root, const CLI::App& sub) {
  const NoiseFamily family = family_of(c);
  const std::size_t K = family.support() ? std::max<std::size_t>(1, static_cast<std::size_t>(*family.support()))
                                         : c.modes;
  const NoiseSpectrum spec = noise_coefficients(family, K);
  SimulationConfig cfg;
  cfg.particles = a.particles;
  cfg.t_end = a.t_end;
  cfg.sample_every = a.sample_every;
  cfg.observed_modes = a.observe;
  cfg.seed = c.seed;
  cfg.kernel = parse_kernel(c.kernel);
  cfg.initial_a1 = a.init_a1;
  const ReplicaSummary s = run_replicas(cfg, spec, a.replicas, a.burn_in);

  std::cerr << "time-averaged |a1| " << num(s.mean) << " +- " << num(s.standard_error) << " over " << a.replicas
            << " replicas\n";
  Csv csv(c.out);
  std::vector<std::string> head{"t"};
  for (std::size_t k = 1; k <= a.observe; ++k) head.push_back("abs_a" + std::to_string(k));
  for (std::size_t k = 1; k <= a.observe; ++k) head.push_back("stderr_a" + std::to_string(k));
  csv.header(head);
  const auto& times = s.series.front().times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<std::string> cells{num(times[i])};
    for (std::size_t k = 0; k < a.observe; ++k) cells.push_back(num(s.mean_modulus[i][k]));
    for (std::size_t k = 0; k < a.observe; ++k) cells.push_back(num(s.stderr_modulus[i][k]));
    csv.line(cells);
  }
  csv.metadata(echo(root, sub, "mean_abs_a1=" + num(s.mean) + " stderr=" + num(s.standard_error)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Midpoint alignment model: spectral equilibria, stability, series and Monte Carlo"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file with one [section] per command; flags override it");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());

  Common c;
  app.add_option("--kernel", c.kernel, "maxwellian | hardsphere")->capture_default_str();
  app.add_option("--noise", c.noise, "fejer:N | gaussian:tau | rect:tau | list:path")->capture_default_str();
  app.add_option("--gamma1", c.gamma1, "first noise coefficient (reparameterizes the family)");
  app.add_option("--modes", c.modes, "Fourier truncation K")->capture_default_str()->check(CLI::Range(1, 256));
  app.add_option("--tol", c.tol, "Newton tolerance")->capture_default_str();
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--out", c.out, "output CSV path (stdout when omitted)");

  BifurcationArgs ba;
  auto* bif = app.add_subcommand("bifurcation", "continue the equilibrium branch in gamma1");
  bif->add_option("--gamma-lo", ba.lo)->capture_default_str();
  bif->add_option("--gamma-hi", ba.hi)->capture_default_str();
  bif->add_option("--steps", ba.steps)->capture_default_str();
  bif->add_option("--log-points", ba.log_points, "use gamma_c + log-spaced offsets instead of the linear range")
      ->capture_default_str();
  bif->add_option("--delta-lo", ba.delta_lo, "exponent-fit window / log grid start")->capture_default_str();
  bif->add_option("--delta-hi", ba.delta_hi, "exponent-fit window / log grid end")->capture_default_str();
  bif->add_flag("--uniform-branch", ba.uniform_branch, "also emit the unstable uniform rows above gamma_c");
  bif->add_flag("--fixed-modes", ba.fixed_modes, "disable K doubling");

  StationaryArgs sa;
  auto* sta = app.add_subcommand("stationary", "stationary density and noise density on a grid");
  sta->add_option("--grid", sa.grid)->capture_default_str();
  sta->add_option("--modes-out", sa.modes_out, "also write k, a_k, gamma_k here");

  EvolveArgs ea;
  auto* evo = app.add_subcommand("evolve", "RK4 trajectory of the mode system");
  evo->add_option("--t-end", ea.t_end)->capture_default_str();
  evo->add_option("--dt", ea.dt)->capture_default_str();
  evo->add_option("--sample-interval", ea.sample_interval)->capture_default_str();
  evo->add_option("--init", ea.init, "initial a_1, a_2, ...")->delimiter(',')->capture_default_str();
  evo->add_option("--rate", ea.rate_mode, "measure the e-folding rate of this mode");
  evo->add_option("--window", ea.window, "rate window t_begin,t_end")->delimiter(',');

  StabilityArgs ta;
  auto* stb = app.add_subcommand("stability", "Jacobian spectrum at a state");
  stb->add_option("--state", ta.state, "branch | uniform")->capture_default_str();
  stb->add_option("--slope-deltas", ta.slope_deltas, "offsets for the leading-eigenvalue slope")->delimiter(',');

  BnkArgs na;
  auto* bnk = app.add_subcommand("bnk", "partition-series table and consistency root (formal method)");
  bnk->add_option("--nmax", na.n_max)->capture_default_str();
  bnk->add_option("--kmax", na.k_max, "0 selects 1 + 2 N_max + support");
  bnk->add_option("--seeding", na.seeding, "response | selfconsistent | seed")->capture_default_str();
  bnk->add_option("--rmax", na.r_max)->capture_default_str();

  ReallineArgs ra;
  auto* rl = app.add_subcommand("realline", "equilibrium density of the real-line model");
  rl->add_option("--line-noise", ra.line_noise, "gaussian:variance | rect:h | file:path")->capture_default_str();
  rl->add_option("--lambda", ra.lambda)->capture_default_str();
  rl->add_option("--range", ra.half_range, "x grid half-width")->capture_default_str();
  rl->add_option("--points", ra.points)->capture_default_str();

  ParticleArgs pa;
  auto* par = app.add_subcommand("particles", "N-particle pair-jump simulation");
  par->add_option("--particles", pa.particles)->capture_default_str();
  par->add_option("--t-end", pa.t_end)->capture_default_str();
  par->add_option("--sample-every", pa.sample_every)->capture_default_str();
  par->add_option("--observe", pa.observe)->capture_default_str();
  par->add_option("--replicas", pa.replicas)->capture_default_str();
  par->add_option("--burn-in", pa.burn_in)->capture_default_str();
  par->add_option("--init-a1", pa.init_a1, "start from 1 + 2 a cos x instead of uniform");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*bif) return cmd_bifurcation(c, ba, app, *bif);
    if (*sta) return cmd_stationary(c, sa, app, *sta);
    if (*evo) return cmd_evolve(c, ea, app, *evo);
    if (*stb) return cmd_stability(c, ta, app, *stb);
    if (*bnk) return cmd_bnk(c, na, app, *bnk);
    if (*rl) return cmd_realline(c, ra, app, *rl);
    if (*par) return cmd_particles(c, pa, app, *par);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SingularDenominator& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NonPositiveDensity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
