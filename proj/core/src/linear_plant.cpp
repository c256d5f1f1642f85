#include "axon/linear_plant.hpp"

#include "axon/errors.hpp"

namespace axon {

Vec2 ode_update(const LinearModel& m, const Vec2& X, double flux, const Vec2& injection, double dt) {
  return X + dt * (m.A * X + m.B * flux + injection);
}

LinearPlant::LinearPlant(const LinearModel& model, double l_s, int n)
    : model_(model), l_s_(l_s), stepper_({model.D, model.a, model.g}, n) {}

double LinearPlant::step(LinearPlantState& s, double U, double dt) {
  const double l_dot = length_rate(s);
  const Vec2 X = s.X;
  // z2 does not depend on the flux; take it from the shared update so the
  // frame matches what an observer sees through y2.
  const double z2_new = ode_update(model_, X, 0.0, Vec2::Zero(), dt)(1);
  stepper_.set_frame({z2_new + l_s_, l_dot, dt});
  // u(l) = z1 + H2 z2 at the new time, with z1 driven by the new flux.
  const auto resp = stepper_.flux_response(s.u, U);
  const double A11 = model_.A(0, 0), B1 = model_.B(0), H2 = model_.H(1);
  const double z1_new =
      (X(0) + dt * A11 * X(0) + dt * B1 * resp.alpha + dt * B1 * resp.slope * H2 * z2_new) / (1 - dt * B1 * resp.slope);
  const double flux = resp.alpha + resp.slope * (z1_new + H2 * z2_new);

  s.X = ode_update(model_, X, flux, Vec2::Zero(), dt);
  next_.resize(s.u.size());
  stepper_.advance(s.u, U, model_.H.dot(s.X), next_);
  s.u.swap(next_);
  s.t += dt;
  return flux;
}

}  // namespace axon
