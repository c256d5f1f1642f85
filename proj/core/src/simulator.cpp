#include "axon/simulator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "axon/errors.hpp"

namespace axon {

void PlantState::validate() const {
  if (c.size() < 3) throw NumericalError("plant state needs at least 3 samples");
  if (!(l > 0) || !std::isfinite(l)) throw NumericalError(fmt::format("t = {:.6g} s: axon length {:.6e} m is not positive", t, l));
  if (!std::isfinite(c_c)) throw NumericalError(fmt::format("t = {:.6g} s: cone concentration is not finite", t));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!std::isfinite(c[i])) {
      throw NumericalError(fmt::format("t = {:.6g} s: concentration sample {} is not finite (l = {:.6e} m, c_c = {:.6e})",
                                       t, i, l, c_c));
    }
  }
  if (c.back() != c_c) throw NumericalError("tip sample differs from the cone concentration");
}

PlantIntegrator::PlantIntegrator(const BiophysicalParams& p, int n) : p_(p), stepper_({p.D, p.a, p.g}, n) {
  p_.validate();
}

void PlantIntegrator::step(PlantState& s, double q_s, double dt, const PlantStepOptions& opt) {
  if (static_cast<int>(s.c.size()) != stepper_.intervals() + 1) throw NumericalError("state/grid size mismatch");
  const double l_dot = opt.hold_length ? 0.0 : growth_rate(p_, s.c_c);
  const double l_new = s.l + dt * l_dot;
  if (!(l_new > 0)) {
    throw NumericalError(fmt::format("t = {:.6g} s: axon length would become {:.6e} m", s.t + dt, l_new));
  }
  stepper_.set_frame({l_new, l_dot, dt});
  const double b0 = -q_s;

  double c_c_new = s.c_c;
  if (!opt.hold_cone) {
    const auto resp = stepper_.flux_response(s.c, b0);
    const double reaction =
        (p_.net_transport() * s.c_c - (p_.r_g * s.c_c + p_.r_g_tilde * p_.l_c) * (s.c_c - p_.c_inf)) / p_.l_c;
    const double kappa = dt * p_.D / p_.l_c;
    c_c_new = (s.c_c + dt * reaction - kappa * resp.alpha) / (1 + kappa * resp.slope);
  }
  next_.resize(s.c.size());
  stepper_.advance(s.c, b0, c_c_new, next_);
  s.c.swap(next_);
  s.c_c = c_c_new;
  s.l = l_new;
  s.t += dt;
  s.validate();
}

PlantState plant_step(const PlantState& s, double q_s, const BiophysicalParams& p, double dt,
                      const PlantStepOptions& opt) {
  PlantIntegrator integ(p, s.intervals());
  PlantState out = s;
  integ.step(out, q_s, dt, opt);
  return out;
}

Measurements measure(const PlantState& s, const EquilibriumProfile& eq) {
  if (s.c.size() < 3) throw NumericalError("measurement needs at least 3 grid points");
  Measurements m;
  m.y1 = tip_flux(s.c, s.l) - eq.slope(s.l);
  m.y2 = s.l - eq.l_s();
  return m;
}

}  // namespace axon
