#pragma once

#include <vector>

#include "axon/kernel.hpp"
#include "axon/observer.hpp"
#include "axon/phi_gain.hpp"

namespace axon {

/// Transformed states used to check the backstepping design on a run.
///
/// w_tilde = u_tilde - int_x^l Q(x,y) u_tilde(y) dy (observer error target),
/// w_hat   = u^ - int_x^l k(x,y) u^(y) dy - phi(x - l)^T X^ with
///           k(x,y) = -(1/D) phi(x - y)^T B, the kernel for which the
///           control law is exactly w_hat_x(0) = gamma2 w_hat(0).
/// Integrals use the trapezoid rule on the grid.
struct TargetCheck {
  std::vector<double> w_tilde;  ///< empty unless an error state and Q were given
  std::vector<double> w_hat;
  double tip_residual = 0.0;     ///< |w_hat(l)|
  double robin_residual = 0.0;   ///< |w_hat_x(0) - gamma2 w_hat(0)|
  double h1_w_hat = 0.0;
  double h1_w_tilde = 0.0;
};

[[nodiscard]] TargetCheck target_state_check(const ObserverState& obs, double l, const PhiGain& phi,
                                             const LinearModel& model, double gamma2,
                                             const ObserverError* error = nullptr, const KernelTable* Q = nullptr);

}  // namespace axon
