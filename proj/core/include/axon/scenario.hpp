#pragma once

#include <memory>
#include <string>
#include <vector>

#include "axon/config.hpp"
#include "axon/kernel.hpp"
#include "axon/model.hpp"

namespace axon {

enum class RunMode { closed_loop, open_loop_observer, plant_only };
enum class InitialProfile { uniform, equilibrium };
enum class ObserverInit { zero, exact, equilibrium };

struct ScenarioConfig {
  BiophysicalParams params = BiophysicalParams::reference();
  double l_s = 12e-6;
  double l0 = 1e-6;
  InitialProfile c0_profile = InitialProfile::uniform;
  double c0_factor = 2.0;  ///< c0 = factor * c_inf (uniform) or factor * c_eq
  ObserverInit observer_init = ObserverInit::zero;

  GainConfig gains;
  /// Replace a controller gain K that fails check_gains by the pole
  /// placement K with both poles at -substitute_rate.
  bool substitute_failing_gains = true;
  double substitute_rate = 0.05;
  bool strict_gains = false;  ///< gain warnings become ConfigError

  int n = 128;
  double dt = 1e-3;
  double t_final = 180.0;
  double output_every = 0.5;
  double snapshot_every = 15.0;
  RunMode mode = RunMode::closed_loop;
  bool clamp_influx = false;

  double l_bar = 0.0;  ///< 0 selects 2 l_s
  int kernel_grid = 129;
  double kernel_tol = 1e-14;
  std::string kernel_cache;

  /// The reference experiment: uniform c0 = 2 c_inf on l0 = 1 um, zero
  /// observer guess, lambda = 0.05, L = [1, 0.1].
  static ScenarioConfig reference();

  [[nodiscard]] double kernel_domain() const { return l_bar > 0 ? l_bar : 2 * l_s; }
  [[nodiscard]] long steps() const;
  void validate() const;
};

[[nodiscard]] ScenarioConfig scenario_from_document(const ConfigDocument& doc);
[[nodiscard]] ScenarioConfig load_scenario(const std::string& path);
[[nodiscard]] std::string mode_name(RunMode m);

struct TraceRow {
  double t = 0, l = 0, c_c = 0, y1 = 0, y2 = 0, U = 0, q_s = 0;
  double h1_u = 0, h1_u_hat = 0, h1_u_tilde = 0;
  double X = 0, X_hat = 0, X_tilde = 0;
  double phi = 0, phi_tilde = 0;
  double sup_c_error = 0;  ///< sup_x |c_o - c|
};

struct ProfileSnapshot {
  double t = 0;
  std::vector<double> x, c, c_hat, c_eq;
};

struct SimulationTrace {
  std::vector<TraceRow> rows;
  std::vector<ProfileSnapshot> snapshots;
  std::vector<std::string> notes;  ///< gain substitutions, warnings
  Row2 K_used = Row2::Zero();
  long steps = 0;
  long speed_violation_steps = 0;
  long clamp_events = 0;
  double speed_bound = 0;
};

/// Kernel for a scenario: loaded from cfg.kernel_cache when it matches,
/// otherwise solved (and written to the cache path when one is set).
[[nodiscard]] std::shared_ptr<const KernelTable> scenario_kernel(const ScenarioConfig& cfg);

/// Gains actually used by a run after the optional substitution; notes
/// receive a line per substitution or warning.
[[nodiscard]] GainConfig resolve_gains(const ScenarioConfig& cfg, const LinearModel& model,
                                       std::vector<std::string>& notes);

[[nodiscard]] SimulationTrace run_scenario(const ScenarioConfig& cfg,
                                           std::shared_ptr<const KernelTable> kernel = nullptr);

}  // namespace axon
