// axonctl: command line front end for the axon growth control library.
//
//   axonctl simulate <config> [--out dir] [--kernel-cache file] [--strict-gains]
//   axonctl kernel   <config> [--out dir] [--kernel-cache file]
//   axonctl steady   <config> [--out dir]
//   axonctl verify   [--seed n] [--only 1,2,...]
//
// Exit codes: 0 ok, 1 configuration error, 2 numerical failure,
// 3 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "axon/errors.hpp"
#include "axon/kernel.hpp"
#include "axon/model.hpp"
#include "axon/scenario.hpp"
#include "axon/trace_io.hpp"
#include "axon/verify.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kVerification = 3 };

struct Options {
  std::string config;
  std::string out = ".";
  std::string kernel_cache;
  std::uint64_t seed = axon::VerifyOptions{}.seed;
  bool strict_gains = false;
  std::vector<int> only;
  bool skip_determinism = false;
};

axon::ScenarioConfig load(const Options& o) {
  if (o.config.empty()) throw axon::ConfigError("no config file given (positional argument or --config)");
  axon::ScenarioConfig cfg = axon::load_scenario(o.config);
  if (!o.kernel_cache.empty()) cfg.kernel_cache = o.kernel_cache;
  if (o.strict_gains) cfg.strict_gains = true;
  cfg.validate();
  return cfg;
}

std::filesystem::path out_dir(const Options& o) {
  std::filesystem::path dir(o.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw axon::ConfigError(fmt::format("cannot create output directory '{}': {}", o.out, ec.message()));
  return dir;
}

int cmd_simulate(const Options& o) {
  const auto cfg = load(o);
  const auto trace = axon::run_scenario(cfg);
  const auto dir = out_dir(o);
  axon::write_trace_csv(trace, (dir / "trace.csv").string());
  axon::write_profiles(trace, dir.string());
  axon::write_plot_script(dir.string());

  for (const auto& n : trace.notes) fmt::print("note: {}\n", n);
  const auto& last = trace.rows.back();
  fmt::print("mode {}, {} steps, t = {:.6g} s\n", axon::mode_name(cfg.mode), trace.steps, last.t);
  fmt::print("final l = {:.9e} m (l_s = {:.9e} m, error {:.3f}%)\n", last.l, cfg.l_s,
             100.0 * (last.l - cfg.l_s) / cfg.l_s);
  fmt::print("final c_c = {:.9e} mol/m^3, q_s = {:.9e} mol/m^4\n", last.c_c, last.q_s);
  fmt::print("sup|c_o - c| = {:.6e} (initial {:.6e})\n", last.sup_c_error, trace.rows.front().sup_c_error);
  fmt::print("wrote {}\n", (dir / "trace.csv").string());
  return kOk;
}

void print_study(const char* name, const axon::KernelTable& t) {
  const auto& r = t.residual;
  fmt::print("{}: depth {}, pde residual {:.3e} (scale {:.3e}, rounding floor {:.3e})\n", name, t.truncation_depth,
             r.pde_max, r.pde_scale, r.roundoff_floor);
  fmt::print("{}: diagonal {:.3e}, neumann {:.3e}\n", name, r.diagonal_max, r.neumann_max);
  for (std::size_t k = 0; k < t.terms.size(); ++k) {
    fmt::print("{}: term {:3d} sup {:.6e} bound ratio {:.6e}\n", name, k + 1, t.terms[k].sup_norm,
               t.terms[k].bound_ratio);
  }
  for (const auto& w : r.warnings) fmt::print("{}: warning: {}\n", name, w);
}

int cmd_kernel(const Options& o) {
  const auto cfg = load(o);
  const auto problem = axon::KernelProblem::from(cfg.params, cfg.gains.lambda, cfg.gains.gamma1, cfg.kernel_domain(),
                                                 cfg.kernel_grid, cfg.kernel_tol);
  const auto dir = out_dir(o);
  const auto P = axon::solve_kernel(axon::KernelKind::observer, problem);
  const auto Q = axon::solve_kernel(axon::KernelKind::direct, problem);
  const std::string p_path = cfg.kernel_cache.empty() ? (dir / "kernel_P.txt").string() : cfg.kernel_cache;
  const std::string q_path = (dir / "kernel_Q.txt").string();
  axon::save_kernel(P, p_path);
  axon::save_kernel(Q, q_path);

  fmt::print("l_bar = {:.6e} m, grid {}, lambda = {:.6g} 1/s, gamma1 = {:.6g} 1/m, M = {:.6e}\n", problem.l_bar,
             problem.grid_n, problem.lambda, problem.gamma1, problem.bound_constant());
  print_study("P", P);
  print_study("Q", Q);
  fmt::print("wrote {} and {}\n", p_path, q_path);
  return kOk;
}

int cmd_steady(const Options& o) {
  const auto cfg = load(o);
  const axon::EquilibriumProfile eq(cfg.params, cfg.l_s);
  const auto dir = out_dir(o);
  const auto path = dir / "steady.csv";
  std::ofstream csv(path);
  if (!csv) throw axon::ConfigError(fmt::format("cannot write '{}'", path.string()));
  csv << "x,c_eq,c_eq_x,c_eq_xx\n";
  fmt::print("roots {:.6e} {:.6e} 1/m, q_s* = {:.9e} mol/m^4\n", eq.root_plus(), eq.root_minus(), eq.q_s_star());
  fmt::print("{:>14} {:>16} {:>16}\n", "x [um]", "c_eq [mol/m^3]", "c_eq' [mol/m^4]");
  const int n = 24;
  for (int i = 0; i <= n; ++i) {
    const double x = cfg.l_s * i / n;
    csv << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", x, eq.value(x), eq.slope(x), eq.curvature(x));
    fmt::print("{:14.4f} {:16.9e} {:16.9e}\n", x * 1e6, eq.value(x), eq.slope(x));
  }
  fmt::print("wrote {}\n", path.string());
  return kOk;
}

int cmd_verify(const Options& o) {
  axon::VerifyOptions vo;
  vo.seed = o.seed;
  vo.only = o.only;
  vo.check_determinism = !o.skip_determinism;
  const auto report = axon::run_verification(vo);
  const std::string text = report.text();
  std::fputs(text.c_str(), stdout);
  if (!o.out.empty() && o.out != ".") {
    const auto dir = out_dir(o);
    std::ofstream(dir / "verify.txt") << text;
  }
  return report.all_pass() ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observer-based output-feedback control of axon growth"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Scenario config file");
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--kernel-cache", o.kernel_cache, "Observer kernel table to load or write");
  app.add_option("--seed", o.seed, "Seed for randomized verification suites")->capture_default_str();
  app.add_flag("--strict-gains", o.strict_gains, "Treat gain warnings as errors");

  auto* sim = app.add_subcommand("simulate", "Run a scenario and write trace.csv, profiles and a plot script");
  auto* ker = app.add_subcommand("kernel", "Tabulate the P and Q kernels and report residuals");
  auto* ste = app.add_subcommand("steady", "Print the equilibrium profile");
  auto* ver = app.add_subcommand("verify", "Run the acceptance suite");
  for (auto* s : {sim, ker, ste}) s->add_option("config", o.config, "Scenario config file");
  ver->add_option("--only", o.only, "Run only these criteria")->delimiter(',');
  ver->add_flag("--no-rerun", o.skip_determinism, "Skip the determinism rerun");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*ker) return cmd_kernel(o);
    if (*ste) return cmd_steady(o);
    if (*ver) return cmd_verify(o);
  } catch (const axon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const axon::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
