#pragma once

#include <span>
#include <vector>

#include "axon/model.hpp"
#include "axon/observer.hpp"
#include "axon/phi_gain.hpp"

namespace axon {

struct ControlValue {
  double U = 0.0;    ///< boundary slope command in error coordinates [mol/m^4]
  double q_s = 0.0;  ///< soma influx q_s* - U [mol/m^4]
  bool clamped = false;
};

/// Output-feedback law
///   U = ((D g2 - beta)/D) u^(0) + (phi'(-l) - g2 phi(-l))^T X^
///       - (1/D) int_0^l (phi'(-y) - g2 phi(-y))^T B u^(y) dy.
///
/// The integral is evaluated exactly for the piecewise-linear interpolant
/// of u^ on the grid (product integration with e^{-N1 s}). A trapezoid rule
/// on the same grid shifts the closed-loop poles by a grid-dependent amount
/// large enough to change the convergence time.
class ControlLaw {
 public:
  ControlLaw(const PhiGain& phi, const LinearModel& model, double gamma2, double q_s_star, int n);

  /// Law as explicit weights for one length: U = sum_j w_j u^_j + x . X^.
  struct Weights {
    double l = -1.0;
    std::vector<double> u;  ///< n+1 weights, including the u^(0) term
    Row2 x = Row2::Zero();
  };
  [[nodiscard]] const Weights& weights(double l) const;

  [[nodiscard]] ControlValue evaluate(std::span<const double> u_hat, const Vec2& X_hat, double l) const;
  [[nodiscard]] ControlValue evaluate(const ObserverState& obs, double l) const {
    return evaluate(obs.u_hat, obs.X_hat, l);
  }

  /// Clamp q_s at zero (unphysical negative influx); each event is logged.
  void set_clamp_nonnegative(bool on) { clamp_ = on; }
  [[nodiscard]] long clamp_events() const { return clamp_events_; }

 private:
  PhiGain phi_;
  LinearModel model_;
  double gamma2_;
  double q_s_star_;
  int n_;
  bool clamp_ = false;
  mutable long clamp_events_ = 0;
  mutable Weights cache_;
};

/// One-off evaluation; builds the weights on every call.
[[nodiscard]] ControlValue control_law(const ObserverState& obs, double l, const PhiGain& phi,
                                       const LinearModel& model, const GainConfig& gains, double q_s_star);

}  // namespace axon
