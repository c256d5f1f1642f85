#include "axon/observer.hpp"

#include <cmath>

#include <fmt/format.h>

#include "axon/errors.hpp"
#include "axon/linear_plant.hpp"

namespace axon {

ObserverState observer_from_guess(std::span<const double> c_guess, double c_c_guess, double l,
                                  const EquilibriumProfile& eq, const BiophysicalParams& p) {
  auto e = to_error_coords(c_guess, c_c_guess, l, eq, p);
  ObserverState s;
  s.u_hat = std::move(e.u);
  s.u_hat.back() = e.X.dot(linearize(p, eq).H);
  s.X_hat = e.X;
  return s;
}

Observer::Observer(const LinearModel& model, const GainConfig& gains, std::shared_ptr<const KernelTable> kernel,
                   int n)
    : model_(model), gains_(gains), kernel_(std::move(kernel)), stepper_({model.D, model.a, model.g}, n) {
  if (kernel_ && kernel_->kind() != KernelKind::observer) throw ConfigError("observer needs the P kernel table");
}

void Observer::step(ObserverState& s, const Measurements& meas, double U, double l, double l_dot, double dt) {
  const int n = stepper_.intervals();
  if (static_cast<int>(s.u_hat.size()) != n + 1) throw NumericalError("observer state/grid size mismatch");
  const Vec2 innovation = gains_.L * (meas.y2 - model_.C.dot(s.X_hat));
  s.X_hat = ode_update(model_, s.X_hat, meas.y1, innovation, dt);

  stepper_.set_frame({l, l_dot, dt});
  next_.resize(s.u_hat.size());
  const double tip = model_.H.dot(s.X_hat);
  if (kernel_) {
    gain_.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) gain_[static_cast<std::size_t>(i)] = evaluate_p1(*kernel_, l * i / n, l);
    const Injection inj{gain_, meas.y1};
    stepper_.advance(s.u_hat, U, tip, next_, &inj);
  } else {
    stepper_.advance(s.u_hat, U, tip, next_);
  }
  s.u_hat.swap(next_);
  s.t += dt;
  for (std::size_t i = 0; i < s.u_hat.size(); ++i) {
    if (!std::isfinite(s.u_hat[i])) {
      throw NumericalError(fmt::format("t = {:.6g} s: observer sample {} is not finite (l = {:.6e} m, X^ = [{:.6e}, {:.6e}])",
                                       s.t, i, l, s.X_hat(0), s.X_hat(1)));
    }
  }
}

ObserverError observer_error(const PlantState& plant, const ObserverState& obs, const EquilibriumProfile& eq,
                             const BiophysicalParams& p) {
  const auto e = to_error_coords(plant.c, plant.c_c, plant.l, eq, p);
  if (e.u.size() != obs.u_hat.size()) throw NumericalError("observer and plant grids differ");
  ObserverError out;
  out.u_tilde.resize(e.u.size());
  for (std::size_t i = 0; i < e.u.size(); ++i) out.u_tilde[i] = e.u[i] - obs.u_hat[i];
  out.X_tilde = e.X - obs.X_hat;
  return out;
}

}  // namespace axon
