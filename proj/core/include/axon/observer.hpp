#pragma once

#include <memory>
#include <vector>

#include "axon/field_stepper.hpp"
#include "axon/kernel.hpp"
#include "axon/model.hpp"
#include "axon/simulator.hpp"

namespace axon {

/// Estimated error state on the shared sigma grid.
struct ObserverState {
  std::vector<double> u_hat;
  Vec2 X_hat = Vec2::Zero();
  double t = 0.0;
};

/// Observer initialized from a physical guess of the concentration (c_o on
/// the sigma grid over the measured length) and cone concentration.
[[nodiscard]] ObserverState observer_from_guess(std::span<const double> c_guess, double c_c_guess, double l,
                                                const EquilibriumProfile& eq, const BiophysicalParams& p);

/// Copy of the error dynamics with output injection
///   u^_t = D u^_xx - a u^_x - g u^ + p1(x, l) (y1 - u^_x(l)),
///   u^_x(0) = U,  u^(l) = H^T X^,
///   X^' = A X^ + B y1 + L (y2 - C X^).
/// Runs on the measured length. A null kernel switches the PDE injection
/// off (p1 = 0).
class Observer {
 public:
  Observer(const LinearModel& model, const GainConfig& gains, std::shared_ptr<const KernelTable> kernel, int n);

  void step(ObserverState& s, const Measurements& meas, double U, double l, double l_dot, double dt);

  [[nodiscard]] const LinearModel& model() const { return model_; }
  [[nodiscard]] const GainConfig& gains() const { return gains_; }

 private:
  LinearModel model_;
  GainConfig gains_;
  std::shared_ptr<const KernelTable> kernel_;
  FieldStepper stepper_;
  std::vector<double> gain_, next_;
};

struct ObserverError {
  std::vector<double> u_tilde;
  Vec2 X_tilde = Vec2::Zero();
};

/// u - u^ on the grid and X - X^, with u and X from the physical plant.
[[nodiscard]] ObserverError observer_error(const PlantState& plant, const ObserverState& obs,
                                           const EquilibriumProfile& eq, const BiophysicalParams& p);

}  // namespace axon
