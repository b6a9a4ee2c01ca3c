// fowler: command-line driver for simulations, travelling waves, kernels and the
// solitary-wave quadratic form.
//
// Exit codes: 0 ok, 1 other failure, 2 configuration error, 3 blow-up,
// 4 no travelling-wave step converged, 5 quadrature failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fowler/errors.hpp"
#include "fowler/io.hpp"
#include "fowler/ivp.hpp"
#include "fowler/kernel.hpp"
#include "fowler/wave.hpp"

namespace fs = std::filesystem;
using namespace fowler;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitNoWave = 4;
constexpr int kExitQuadrature = 5;

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double quad_tol_from_env() {
  const char* s = std::getenv("FOWLER_QUAD_TOL");
  if (!s || !*s) return kDefaultQuadTol;
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (*end != '\0' || !(v > 0.0) || !(v < 1.0)) throw ConfigError("FOWLER_QUAD_TOL", "expected a number in (0, 1)");
  return v;
}

int cmd_simulate(const std::string& config_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationSetup setup = simulation_setup(read_flat_config(config_path));
  const Grid& grid = setup.sim.grid;
  const auto u0 = sample_initial(setup.init, grid);
  Trajectory tr;
  try {
    tr = run_ivp(to_spectral(u0, grid), setup.sim);
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up at t = " << format_double(e.time()) << " (sup|u| = " << format_double(e.sup()) << ")\n";
    return kExitBlowUp;
  }

  CsvTable traj;
  traj.meta = {{"command", "simulate"}, {"n", std::to_string(grid.n())},
               {"half_length", format_double(grid.half_length())}, {"eta", format_double(setup.sim.eta)}};
  traj.columns = {"t", "x", "u"};
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const auto u = to_physical(tr.states[k]);
    for (int j = 0; j < grid.n(); ++j) traj.rows.push_back({tr.times[k], grid.x(j), u[j]});
  }
  CsvTable summary;
  summary.meta = traj.meta;
  summary.columns = {"t", "mass", "min_u", "sup_u"};
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    summary.rows.push_back({tr.times[k], tr.masses[k], tr.min_values[k], tr.sup_values[k]});

  const fs::path dir = setup.out_dir;
  write_csv(dir / "trajectory.csv", traj);
  write_csv(dir / "summary.csv", summary);

  double drift = 0.0;
  const double m0 = tr.masses.front();
  for (double m : tr.masses) drift = std::max(drift, std::abs(m - m0));
  if (m0 != 0.0) drift /= std::abs(m0);
  std::cout << "mass drift (relative): " << format_double(drift) << "\n";
  const double threshold = -1e-6 * tr.sup_values.front();
  std::ptrdiff_t first = -1;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    if (tr.min_values[k] < threshold) {
      first = static_cast<std::ptrdiff_t>(k);
      break;
    }
  const auto mn = std::min_element(tr.min_values.begin(), tr.min_values.end());
  std::cout << "min u over run: " << format_double(*mn) << " at t = " << format_double(tr.times[mn - tr.min_values.begin()])
            << "\n";
  if (first >= 0)
    std::cout << "first time with min u < 0: t = " << format_double(tr.times[first]) << "\n";
  else
    std::cout << "first time with min u < 0: none\n";

  RunManifest m;
  m.command = "simulate";
  m.config = to_json(setup);
  m.outputs = {(dir / "trajectory.csv").string(), (dir / "summary.csv").string()};
  m.wall_seconds = elapsed(t0);
  write_manifest(dir / "manifest.json", m);
  return 0;
}

void write_wave(const fs::path& dir, const std::string& stem, const WaveState& s) {
  CsvTable t;
  t.meta = {{"c", format_double(s.c)}, {"eta", format_double(s.eta)}, {"n", std::to_string(s.grid.n())},
            {"half_length", format_double(s.grid.half_length())}};
  t.columns = {"x", "phi", "full_wave"};
  for (int j = 0; j < s.grid.n(); ++j) t.rows.push_back({s.grid.x(j), s.phi[j], s.full_wave[j]});
  write_csv(dir / (stem + ".csv"), t);
  const nlohmann::json side = {{"c", s.c},
                               {"eta", s.eta},
                               {"residual_norm", s.residual_norm},
                               {"phase_defect", s.phase_defect},
                               {"iterations", s.iterations},
                               {"grid", {{"n", s.grid.n()}, {"half_length", s.grid.half_length()}}}};
  write_atomic(dir / (stem + ".json"), side.dump(2) + "\n");
}

int cmd_wave(double eta, double c, int steps, int n, const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(c > 0.0)) throw ConfigError("c", "must be positive");
  if (steps < 1) throw ConfigError("steps", "must be at least 1");
  if (n < 16) throw ConfigError("n", "must be at least 16");
  const WaveSolver solver(c, default_line_grid(c, n));
  ContinuationResult branch;
  try {
    branch = solver.continue_in_eta(eta, steps);
  } catch (const SingularMatrixError& e) {
    std::cerr << "no travelling-wave step converged: " << e.what() << "\n";
    return kExitNoWave;
  } catch (const FowlerError& e) {
    std::cerr << "no travelling-wave step converged: " << e.what() << "\n";
    return kExitNoWave;
  }
  RunManifest m;
  m.command = "wave";
  m.config = {{"eta", eta}, {"c", c}, {"steps", steps}, {"n", n}, {"out", dir.string()}};
  CsvTable summary;
  summary.meta = {{"c", format_double(c)}, {"eta_target", format_double(eta)}, {"steps", std::to_string(steps)}};
  summary.columns = {"eta", "residual", "phi_sup", "phase_defect", "iterations"};
  for (std::size_t k = 0; k < branch.states.size(); ++k) {
    const auto& s = branch.states[k];
    double sup = 0.0;
    for (double v : s.phi) sup = std::max(sup, std::abs(v));
    summary.rows.push_back({s.eta, s.residual_norm, sup, s.phase_defect, double(s.iterations)});
    char stem[32];
    std::snprintf(stem, sizeof stem, "wave_%03zu", k);
    write_wave(dir, stem, s);
    m.outputs.push_back((dir / (std::string(stem) + ".csv")).string());
    std::cout << "eta = " << format_double(s.eta) << "  residual = " << format_double(s.residual_norm)
              << "  |phi|_sup = " << format_double(sup) << "\n";
  }
  write_csv(dir / "branch.csv", summary);
  m.outputs.push_back((dir / "branch.csv").string());
  if (branch.halted) std::cout << "halted at eta* = " << format_double(branch.last_converged_eta) << "\n";
  m.wall_seconds = elapsed(t0);
  write_manifest(dir / "manifest.json", m);
  return 0;
}

std::vector<double> parse_t_list(const std::string& text) {
  std::vector<double> ts;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (*end != '\0') throw ConfigError("t", "cannot parse '" + item + "'");
    if (!(v > 0.0)) throw ConfigError("t", "every t must be positive");
    ts.push_back(v);
  }
  if (ts.empty()) throw ConfigError("t", "empty list");
  return ts;
}

int cmd_kernel(const std::string& t_text, const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ts = parse_t_list(t_text);
  const double tol = quad_tol_from_env();
  RunManifest m;
  m.command = "kernel";
  m.config = {{"t", ts}, {"quad_tol", tol}, {"out", dir.string()}};
  CsvTable summary;
  summary.meta = {{"quad_tol", format_double(tol)}};
  summary.columns = {"t", "l1", "derivative_l1", "min_K", "argmin", "mass", "l1_envelope_ratio",
                     "derivative_envelope_ratio"};
  try {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double t = ts[i];
      const auto norms = kernel_norms(t, tol);
      const double X = norms.window;
      const int n = 2 * static_cast<int>(std::ceil(X / 0.05)) + 1;
      const auto s = kernel_realize(t, X, n, tol);
      CsvTable k;
      k.meta = {{"t", format_double(t)}, {"quad_tol", format_double(tol)},
                {"achieved_tol", format_double(s.achieved_tol)}};
      k.columns = {"x", "K", "dK"};
      for (int j = 0; j < n; ++j) k.rows.push_back({s.xs[j], s.values[j], s.derivative[j]});
      char name[32];
      std::snprintf(name, sizeof name, "kernel_%03zu.csv", i);
      write_csv(dir / name, k);
      m.outputs.push_back((dir / name).string());
      summary.rows.push_back({t, norms.l1, norms.derivative_l1, norms.min_value, norms.argmin, norms.mass,
                              norms.l1 / envelope(EnvelopeKind::l1_kernel, t),
                              norms.derivative_l1 / envelope(EnvelopeKind::l1_kernel_derivative, t)});
      std::cout << "t = " << format_double(t) << "  |K|_1 = " << format_double(norms.l1)
                << "  |K_x|_1 = " << format_double(norms.derivative_l1) << "  min K = " << format_double(norms.min_value)
                << "\n";
    }
  } catch (const QuadratureError& e) {
    std::cerr << "quadrature failure: " << e.what() << " achieved " << format_double(e.achieved()) << "\n";
    return kExitQuadrature;
  }
  write_csv(dir / "summary.csv", summary);
  m.outputs.push_back((dir / "summary.csv").string());
  m.wall_seconds = elapsed(t0);
  write_manifest(dir / "manifest.json", m);
  return 0;
}

int cmd_identity(double eta, const fs::path& profile_path) {
  const CsvTable t = read_csv(profile_path);
  if (t.columns.size() < 2) throw ConfigError("profile", "need columns x and a profile");
  const auto x = t.column(t.columns[0]);
  const std::string name = std::find(t.columns.begin(), t.columns.end(), "phi") != t.columns.end() ? "phi" : t.columns[1];
  const auto phi = t.column(name);
  const int n = static_cast<int>(x.size());
  if (n < 16) throw ConfigError("profile", "need at least 16 samples");
  const double dx = (x.back() - x.front()) / (n - 1);
  for (int j = 1; j < n; ++j)
    if (std::abs(x[j] - x[j - 1] - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
      throw ConfigError("profile", "x must be uniformly spaced");
  const LineGrid grid(n, 0.5 * (x.back() - x.front()));
  SolitonReport rep;
  try {
    rep = soliton_identity(grid, phi, eta);
  } catch (const DomainError& e) {
    throw ConfigError("profile", e.what());
  }
  std::cout << "quadratic form = " << format_double(rep.value) << "\n";
  std::cout << "min integrand = " << format_double(rep.integrand_min) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fowler equation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "Run the initial value problem from a config file");
  sim->add_option("config", config_path, "key = value configuration file")->required();

  double eta = 0.0, c = 1.0;
  int steps = 8, n = 4096;
  std::string out = "fowler_out";
  auto* wave = app.add_subcommand("wave", "Continue travelling waves in eta from the exact eta = 0 wave");
  wave->add_option("--eta", eta, "target nonlocal strength")->required();
  wave->add_option("--c", c, "wave speed parameter (g_c -> 2c at -inf)")->required();
  wave->add_option("--steps", steps, "continuation steps")->capture_default_str();
  wave->add_option("--n", n, "grid points")->capture_default_str();
  wave->add_option("--out", out, "output directory")->capture_default_str();

  std::string t_list;
  auto* kern = app.add_subcommand("kernel", "Sample the linear kernel and its L1 norms");
  kern->add_option("--t", t_list, "comma-separated times")->required();
  kern->add_option("--out", out, "output directory")->capture_default_str();

  std::string profile;
  auto* ident = app.add_subcommand("identity", "Evaluate the solitary-wave quadratic form of a profile");
  ident->add_option("--eta", eta, "nonlocal strength")->required();
  ident->add_option("--profile", profile, "CSV with columns x and phi")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(config_path);
    if (*wave) return cmd_wave(eta, c, steps, n, out);
    if (*kern) return cmd_kernel(t_list, out);
    if (*ident) return cmd_identity(eta, profile);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const QuadratureError& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return kExitQuadrature;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
