#pragma once

#include <vector>

#include "axon/field_stepper.hpp"
#include "axon/model.hpp"

namespace axon {

/// X + dt (A X + B flux + injection); shared by the linear plant and the
/// observer so that both integrate the ODE part identically.
[[nodiscard]] Vec2 ode_update(const LinearModel& m, const Vec2& X, double flux, const Vec2& injection, double dt);

/// Linearized error system on [0, l], l = l_s + z2:
///   u_t = D u_xx - a u_x - g u,  u_x(0) = U,  u(l) = H^T X,
///   X' = A X + B u_x(l).
struct LinearPlantState {
  std::vector<double> u;
  Vec2 X = Vec2::Zero();
  double t = 0.0;
};

class LinearPlant {
 public:
  LinearPlant(const LinearModel& model, double l_s, int n);

  [[nodiscard]] double length(const LinearPlantState& s) const { return s.X(1) + l_s_; }
  [[nodiscard]] double length_rate(const LinearPlantState& s) const { return model_.r_g * s.X(0); }

  /// Advances by dt under boundary input U. Returns the tip flux
  /// u_x(l) at the new time, i.e. the y1 measurement.
  double step(LinearPlantState& s, double U, double dt);

  [[nodiscard]] const LinearModel& model() const { return model_; }
  [[nodiscard]] double l_s() const { return l_s_; }

 private:
  LinearModel model_;
  double l_s_;
  FieldStepper stepper_;
  std::vector<double> next_;
};

}  // namespace axon
