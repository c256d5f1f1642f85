#include "axon/target_check.hpp"

#include <cmath>

#include "axon/errors.hpp"
#include "axon/norms.hpp"

namespace axon {

TargetCheck target_state_check(const ObserverState& obs, double l, const PhiGain& phi, const LinearModel& model,
                               double gamma2, const ObserverError* error, const KernelTable* Q) {
  const std::size_t N = obs.u_hat.size();
  if (N < 3) throw NumericalError("target check needs at least 3 samples");
  const std::size_t n = N - 1;
  const double h = l / static_cast<double>(n);
  TargetCheck out;

  // k depends on x - y only; tabulate at the grid offsets.
  std::vector<double> k(N);
  for (std::size_t d = 0; d <= n; ++d) k[d] = -phi.phi(-h * static_cast<double>(d)).dot(model.B.transpose()) / model.D;

  out.w_hat.resize(N);
  for (std::size_t i = 0; i <= n; ++i) {
    double integral = 0.0;
    for (std::size_t j = i; j <= n; ++j) {
      const double w = (j == i || j == n) ? 0.5 : 1.0;
      integral += w * k[j - i] * obs.u_hat[j];
    }
    if (i == n) integral = 0.0;
    const double x = h * static_cast<double>(i);
    out.w_hat[i] = obs.u_hat[i] - h * integral - phi.phi(x - l).dot(obs.X_hat.transpose());
  }
  const auto& w = out.w_hat;
  out.tip_residual = std::abs(w[n]);
  const double wx0 = (-3 * w[0] + 4 * w[1] - w[2]) / (2 * h);
  out.robin_residual = std::abs(wx0 - gamma2 * w[0]);
  out.h1_w_hat = h1_norm(w, l);

  if (error != nullptr && Q != nullptr) {
    const auto& ut = error->u_tilde;
    if (ut.size() != N) throw NumericalError("target check: error grid differs");
    out.w_tilde.resize(N);
    for (std::size_t i = 0; i <= n; ++i) {
      double integral = 0.0;
      const double x = h * static_cast<double>(i);
      for (std::size_t j = i; j <= n && i < n; ++j) {
        const double wgt = (j == i || j == n) ? 0.5 : 1.0;
        integral += wgt * (*Q)(x, h * static_cast<double>(j)) * ut[j];
      }
      out.w_tilde[i] = ut[i] - h * integral;
    }
    out.h1_w_tilde = h1_norm(out.w_tilde, l);
  }
  return out;
}

}  // namespace axon
