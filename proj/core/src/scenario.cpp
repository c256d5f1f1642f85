#include "axon/scenario.hpp"

#include <cmath>
#include <filesystem>

#include <fmt/format.h>

#include "axon/controller.hpp"
#include "axon/errors.hpp"
#include "axon/log.hpp"
#include "axon/norms.hpp"
#include "axon/observer.hpp"
#include "axon/simulator.hpp"

namespace axon {

ScenarioConfig ScenarioConfig::reference() { return ScenarioConfig{}; }

long ScenarioConfig::steps() const { return std::lround(t_final / dt); }

void ScenarioConfig::validate() const {
  params.validate();
  auto positive = [](double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(fmt::format("{} must be positive (got {})", what, v));
  };
  positive(l_s, "setpoint.l_s");
  positive(l0, "initial.l0");
  positive(dt, "grid.dt");
  positive(t_final, "grid.t_final");
  positive(output_every, "grid.output_every");
  positive(snapshot_every, "grid.snapshot_every");
  positive(gains.lambda, "gains.lambda");
  positive(kernel_tol, "kernel.tol");
  if (!std::isfinite(c0_factor)) throw ConfigError("initial.factor must be finite");
  if (n < 4) throw ConfigError(fmt::format("grid.n must be at least 4 (got {})", n));
  if (kernel_grid < 3) throw ConfigError(fmt::format("kernel.grid_n must be at least 3 (got {})", kernel_grid));
  if (l_bar < 0) throw ConfigError("kernel.l_bar must be positive");
  if (l0 > kernel_domain() && mode != RunMode::plant_only) {
    throw ConfigError(fmt::format("initial length {:.6e} m exceeds the kernel domain {:.6e} m", l0, kernel_domain()));
  }
  if (substitute_failing_gains) positive(substitute_rate, "gains.substitute_rate");
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::closed_loop: return "closed-loop";
    case RunMode::open_loop_observer: return "open-loop-observer";
    case RunMode::plant_only: return "plant-only";
  }
  return "?";
}

ScenarioConfig scenario_from_document(const ConfigDocument& doc) {
  ScenarioConfig c;
  auto num = [&](const std::string& key, Dimension d, double& out) {
    if (auto v = doc.number(key, d)) out = *v;
  };
  auto integer = [&](const std::string& key, int& out) {
    if (auto v = doc.number(key, dims::none)) {
      if (*v != std::floor(*v) || *v < 0 || *v > 1e7) doc.fail(key, "expected a non-negative integer");
      out = static_cast<int>(*v);
    }
  };
  auto choice = [&](const std::string& key, std::initializer_list<std::string> options) -> std::optional<std::string> {
    auto v = doc.string(key);
    if (!v) return std::nullopt;
    for (const auto& o : options)
      if (*v == o) return v;
    std::string all;
    for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
    doc.fail(key, fmt::format("'{}' is not one of: {}", *v, all));
  };

  auto& p = c.params;
  num("params.D", dims::diffusivity, p.D);
  num("params.a", dims::speed, p.a);
  num("params.g", dims::rate, p.g);
  num("params.r_g", dims::growth, p.r_g);
  num("params.r_g_tilde", dims::rate, p.r_g_tilde);
  num("params.l_c", dims::length, p.l_c);
  num("params.c_inf", dims::concentration, p.c_inf);

  num("setpoint.l_s", dims::length, c.l_s);
  num("initial.l0", dims::length, c.l0);
  if (auto v = choice("initial.profile", {"uniform", "equilibrium"}))
    c.c0_profile = *v == "uniform" ? InitialProfile::uniform : InitialProfile::equilibrium;
  num("initial.factor", dims::none, c.c0_factor);
  if (auto v = choice("initial.observer", {"zero", "exact", "equilibrium"})) {
    c.observer_init = *v == "zero" ? ObserverInit::zero : *v == "exact" ? ObserverInit::exact : ObserverInit::equilibrium;
  }

  num("gains.lambda", dims::rate, c.gains.lambda);
  num("gains.gamma1", dims::inv_length, c.gains.gamma1);
  num("gains.gamma2", dims::inv_length, c.gains.gamma2);
  if (auto v = doc.array("gains.K", 2)) c.gains.K = Row2((*v)[0], (*v)[1]);
  if (auto v = doc.array("gains.L", 2)) c.gains.L = Vec2((*v)[0], (*v)[1]);
  if (auto v = doc.boolean("gains.substitute_failing")) c.substitute_failing_gains = *v;
  num("gains.substitute_rate", dims::rate, c.substitute_rate);

  integer("grid.n", c.n);
  num("grid.dt", dims::time, c.dt);
  num("grid.t_final", dims::time, c.t_final);
  num("grid.output_every", dims::time, c.output_every);
  num("grid.snapshot_every", dims::time, c.snapshot_every);

  if (auto v = choice("run.mode", {"closed-loop", "open-loop-observer", "plant-only"})) {
    c.mode = *v == "closed-loop" ? RunMode::closed_loop
             : *v == "plant-only" ? RunMode::plant_only
                                  : RunMode::open_loop_observer;
  }
  if (auto v = doc.boolean("run.clamp_influx")) c.clamp_influx = *v;
  if (auto v = doc.boolean("run.strict_gains")) c.strict_gains = *v;

  num("kernel.l_bar", dims::length, c.l_bar);
  integer("kernel.grid_n", c.kernel_grid);
  num("kernel.tol", dims::none, c.kernel_tol);
  if (auto v = doc.string("kernel.cache")) c.kernel_cache = *v;

  doc.reject_unknown();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", doc.source(), e.what()));
  }
  return c;
}

ScenarioConfig load_scenario(const std::string& path) { return scenario_from_document(ConfigDocument::load(path)); }

GainConfig resolve_gains(const ScenarioConfig& cfg, const LinearModel& model, std::vector<std::string>& notes) {
  GainConfig g = cfg.gains;
  const auto rep = check_gains(model, g);
  std::vector<std::string> warnings;
  if (!rep.gamma1_ok) warnings.push_back(fmt::format("gamma1 = {:.6g} is below D/a = {:.6g}", g.gamma1, model.D / model.a));
  if (!rep.gamma2_ok) warnings.push_back(fmt::format("gamma2 = {:.6g} is below a/D = {:.6g}", g.gamma2, model.a / model.D));
  if (!rep.observer_ok) {
    warnings.push_back(fmt::format("L = [{:.6g}, {:.6g}] violates l1 > a~ l2 / r_g, l2 > a~ (a~ = {:.6g})", g.L(0),
                                   g.L(1), model.a_tilde));
  }
  if (!rep.controller_ok) {
    warnings.push_back(fmt::format("K = [{:.6g}, {:.6g}] violates k1 > a~/beta = {:.6g}, k2 > 0", g.K(0), g.K(1),
                                   model.a_tilde / model.beta));
  }
  if (!rep.observer_hurwitz) warnings.push_back("A - LC is not Hurwitz");
  if (!rep.controller_hurwitz) warnings.push_back("A + BK is not Hurwitz");
  if (cfg.strict_gains && !warnings.empty()) throw ConfigError("gain check failed: " + warnings.front());
  for (auto& w : warnings) notes.push_back("gain warning: " + w);

  if (cfg.mode == RunMode::closed_loop && cfg.substitute_failing_gains && !(rep.controller_ok && rep.controller_hurwitz)) {
    const Row2 K = place_controller_poles(model, cfg.substitute_rate);
    notes.push_back(fmt::format("gain substitution: K = [{:.6g}, {:.6g}] replaced by [{:.6g}, {:.6g}] (double pole at -{:.6g} 1/s)",
                                g.K(0), g.K(1), K(0), K(1), cfg.substitute_rate));
    g.K = K;
  }
  return g;
}

std::shared_ptr<const KernelTable> scenario_kernel(const ScenarioConfig& cfg) {
  const auto problem =
      KernelProblem::from(cfg.params, cfg.gains.lambda, cfg.gains.gamma1, cfg.kernel_domain(), cfg.kernel_grid, cfg.kernel_tol);
  if (!cfg.kernel_cache.empty() && std::filesystem::exists(cfg.kernel_cache)) {
    return std::make_shared<const KernelTable>(load_kernel(cfg.kernel_cache, KernelKind::observer, problem));
  }
  auto table = std::make_shared<const KernelTable>(solve_kernel(KernelKind::observer, problem));
  if (!cfg.kernel_cache.empty()) save_kernel(*table, cfg.kernel_cache);
  return table;
}

namespace {

std::vector<double> initial_profile(const ScenarioConfig& cfg, const EquilibriumProfile& eq) {
  std::vector<double> c(static_cast<std::size_t>(cfg.n) + 1);
  for (int i = 0; i <= cfg.n; ++i) {
    const double x = cfg.l0 * i / cfg.n;
    c[static_cast<std::size_t>(i)] =
        cfg.c0_profile == InitialProfile::uniform ? cfg.c0_factor * cfg.params.c_inf : cfg.c0_factor * eq.value(x);
  }
  return c;
}

double sup_abs(std::span<const double> v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

SimulationTrace run_scenario(const ScenarioConfig& cfg, std::shared_ptr<const KernelTable> kernel) {
  cfg.validate();
  const auto& p = cfg.params;
  const auto eq = steady_state_profile(p, cfg.l_s);
  const auto model = linearize(p, eq);
  SimulationTrace trace;
  const GainConfig gains = resolve_gains(cfg, model, trace.notes);
  trace.K_used = gains.K;

  const bool with_observer = cfg.mode != RunMode::plant_only;
  if (with_observer && !kernel) kernel = scenario_kernel(cfg);
  if (kernel && kernel->l_bar() < cfg.l0) throw ConfigError("kernel table does not cover the initial length");

  PlantState plant;
  plant.c = initial_profile(cfg, eq);
  plant.c_c = plant.c.back();
  plant.l = cfg.l0;
  PlantIntegrator integ(p, cfg.n);

  Measurements meas = measure(plant, eq);
  double l_meas = meas.y2 + cfg.l_s;

  ObserverState obs;
  switch (cfg.observer_init) {
    case ObserverInit::zero: {
      const std::vector<double> zeros(plant.c.size(), 0.0);
      obs = observer_from_guess(zeros, 0.0, l_meas, eq, p);
      break;
    }
    case ObserverInit::exact: {
      auto e = to_error_coords(plant.c, plant.c_c, plant.l, eq, p);
      obs.u_hat = std::move(e.u);
      obs.X_hat = e.X;
      break;
    }
    case ObserverInit::equilibrium: {
      std::vector<double> ceq(plant.c.size());
      for (int i = 0; i <= cfg.n; ++i) ceq[static_cast<std::size_t>(i)] = eq.value(l_meas * i / cfg.n);
      obs = observer_from_guess(ceq, p.c_inf, l_meas, eq, p);
      break;
    }
  }
  Observer observer(model, gains, kernel, cfg.n);
  const PhiGain phi(model, gains.K);
  ControlLaw law(phi, model, gains.gamma2, eq.q_s_star(), cfg.n);
  law.set_clamp_nonnegative(cfg.clamp_influx);

  const double l_bar = cfg.kernel_domain();
  trace.speed_bound = std::min({p.g / (3 * gains.gamma2), p.D / (8 * l_bar), (p.g + gains.lambda) / (2 * gains.gamma1)});
  bool in_violation = false;

  const long steps = cfg.steps();
  const long out_stride = std::max(1L, std::lround(cfg.output_every / cfg.dt));
  const long snap_stride = std::max(1L, std::lround(cfg.snapshot_every / cfg.dt));
  ControlValue control{0.0, eq.q_s_star(), false};

  auto record = [&](long k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const auto e = to_error_coords(plant.c, plant.c_c, plant.l, eq, p);
    TraceRow row;
    row.t = t;
    row.l = plant.l;
    row.c_c = plant.c_c;
    row.y1 = meas.y1;
    row.y2 = meas.y2;
    row.U = control.U;
    row.q_s = control.q_s;
    if (with_observer) {
      const auto nrm = phi_norms(e.u, e.X, obs.u_hat, obs.X_hat, plant.l);
      row.h1_u = nrm.h1_u;
      row.h1_u_hat = nrm.h1_u_hat;
      row.h1_u_tilde = nrm.h1_u_tilde;
      row.X = nrm.X;
      row.X_hat = nrm.X_hat;
      row.X_tilde = nrm.X_tilde;
      row.phi = nrm.phi;
      row.phi_tilde = nrm.phi_tilde;
      std::vector<double> diff(e.u.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = obs.u_hat[i] - e.u[i];
      row.sup_c_error = sup_abs(diff);
    } else {
      row.h1_u = h1_norm(e.u, plant.l);
      row.X = e.X.norm();
      row.phi = row.h1_u * row.h1_u + row.X * row.X;
    }
    trace.rows.push_back(row);
    if (k % snap_stride == 0 || k == steps) {
      ProfileSnapshot s;
      s.t = t;
      for (int i = 0; i <= cfg.n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const double x = plant.l * i / cfg.n;
        s.x.push_back(x);
        s.c.push_back(plant.c[ii]);
        s.c_eq.push_back(eq.value(x));
        s.c_hat.push_back(with_observer ? obs.u_hat[ii] + eq.value(l_meas * i / cfg.n) : std::nan(""));
      }
      trace.snapshots.push_back(std::move(s));
    }
  };

  if (cfg.mode == RunMode::closed_loop) control = law.evaluate(obs, l_meas);
  record(0);
  for (long k = 1; k <= steps; ++k) {
    if (cfg.mode == RunMode::closed_loop) {
      control = law.evaluate(obs, l_meas);
    } else {
      control = ControlValue{0.0, eq.q_s_star(), false};
    }
    integ.step(plant, control.q_s, cfg.dt);
    meas = measure(plant, eq);
    const double l_new = meas.y2 + cfg.l_s;
    const double l_dot = (l_new - l_meas) / cfg.dt;
    l_meas = l_new;
    const bool violating = std::abs(l_dot) > trace.speed_bound;
    if (violating) ++trace.speed_violation_steps;
    if (violating != in_violation) {
      if (violating)
        log_warning(fmt::format("t = {:.4f} s: growth speed {:.3e} m/s exceeds the bound {:.3e} m/s",
                                static_cast<double>(k) * cfg.dt, std::abs(l_dot), trace.speed_bound));
      else
        log_info(fmt::format("t = {:.4f} s: growth speed back within the bound", static_cast<double>(k) * cfg.dt));
      in_violation = violating;
    }
    if (with_observer) {
      if (l_meas > l_bar) {
        throw DomainError(fmt::format("t = {:.4f} s: axon length {:.6e} m left the kernel domain l_bar = {:.6e} m",
                                      static_cast<double>(k) * cfg.dt, l_meas, l_bar));
      }
      observer.step(obs, meas, control.U, l_meas, l_dot, cfg.dt);
    }
    if (k % out_stride == 0 || k == steps) record(k);
  }
  trace.steps = steps;
  trace.clamp_events = law.clamp_events();
  if (trace.speed_violation_steps > 0) {
    trace.notes.push_back(fmt::format("growth speed exceeded the bound {:.3e} m/s on {} of {} steps", trace.speed_bound,
                                      trace.speed_violation_steps, steps));
  }
  if (trace.clamp_events > 0) trace.notes.push_back(fmt::format("influx clamped on {} steps", trace.clamp_events));
  return trace;
}

}  // namespace axon
