#include "axon/controller.hpp"

#include <fmt/format.h>

#include "axon/errors.hpp"
#include "axon/log.hpp"
#include "axon/matrix_exp.hpp"

namespace axon {

ControlLaw::ControlLaw(const PhiGain& phi, const LinearModel& model, double gamma2, double q_s_star, int n)
    : phi_(phi), model_(model), gamma2_(gamma2), q_s_star_(q_s_star), n_(n) {
  if (n < 1) throw ConfigError("control law needs at least one interval");
}

const ControlLaw::Weights& ControlLaw::weights(double l) const {
  if (cache_.l == l) return cache_;
  if (!(l > 0)) throw NumericalError(fmt::format("control law evaluated at length {:.6e} m", l));
  const double h = l / n_;
  const Eigen::Matrix4d& N1 = phi_.N1();
  const Eigen::Matrix4d shifted = N1 - gamma2_ * Eigen::Matrix4d::Identity();
  // integrand weight e(y) = r(y) v with r(y) = lead e^{-N1 y}
  const Eigen::Vector4d v = shifted.leftCols<2>() * model_.B;
  const auto ints = exp_integrals(-Eigen::MatrixXd(N1), h);
  const Eigen::Matrix4d E = ints.exp;
  const Eigen::Vector4d first = (ints.int0 - ints.int1 / h) * v;
  const Eigen::Vector4d second = (ints.int1 / h) * v;

  cache_.u.assign(static_cast<std::size_t>(n_) + 1, 0.0);
  Eigen::RowVector4d r = phi_.lead_row();
  const double c = -1.0 / model_.D;
  for (int j = 0; j < n_; ++j) {
    const auto k = static_cast<std::size_t>(j);
    cache_.u[k] += c * r.dot(first);
    cache_.u[k + 1] += c * r.dot(second);
    r = r * E;
  }
  cache_.u[0] += (model_.D * gamma2_ - model_.beta) / model_.D;
  cache_.x = (r * shifted).head<2>();
  cache_.l = l;
  return cache_;
}

ControlValue ControlLaw::evaluate(std::span<const double> u_hat, const Vec2& X_hat, double l) const {
  if (static_cast<int>(u_hat.size()) != n_ + 1) throw NumericalError("control law/grid size mismatch");
  const auto& w = weights(l);
  double U = w.x.dot(X_hat.transpose());
  for (std::size_t j = 0; j < u_hat.size(); ++j) U += w.u[j] * u_hat[j];
  ControlValue out{U, q_s_star_ - U, false};
  if (clamp_ && out.q_s < 0) {
    ++clamp_events_;
    log_warning(fmt::format("influx clamped: law requested q_s = {:.6e} at l = {:.6e} m", out.q_s, l));
    out.q_s = 0.0;
    out.U = q_s_star_;
    out.clamped = true;
  }
  return out;
}

ControlValue control_law(const ObserverState& obs, double l, const PhiGain& phi, const LinearModel& model,
                         const GainConfig& gains, double q_s_star) {
  const ControlLaw law(phi, model, gains.gamma2, q_s_star, static_cast<int>(obs.u_hat.size()) - 1);
  return law.evaluate(obs, l);
}

}  // namespace axon
