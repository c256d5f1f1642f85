#include "axon/norms.hpp"

#include <cmath>

#include "axon/errors.hpp"

namespace axon {

double h1_norm(std::span<const double> f, double l) {
  if (!(l > 0)) throw NumericalError("h1 norm needs a positive length");
  if (f.size() < 3) throw NumericalError("h1 norm needs at least 3 samples");
  const std::size_t n = f.size() - 1;
  const double h = l / static_cast<double>(n);
  auto deriv = [&](std::size_t i) {
    if (i == 0) return (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
    if (i == n) return (3 * f[n] - 4 * f[n - 1] + f[n - 2]) / (2 * h);
    return (f[i + 1] - f[i - 1]) / (2 * h);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double d = deriv(i);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * (f[i] * f[i] + d * d);
  }
  return std::sqrt(sum * h);
}

PhiNorms phi_norms(std::span<const double> u, const Vec2& X, std::span<const double> u_hat, const Vec2& X_hat,
                   double l) {
  if (u.size() != u_hat.size()) throw NumericalError("phi norms: grids differ");
  std::vector<double> diff(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - u_hat[i];
  PhiNorms r;
  r.h1_u = h1_norm(u, l);
  r.h1_u_hat = h1_norm(u_hat, l);
  r.h1_u_tilde = h1_norm(diff, l);
  r.X = X.norm();
  r.X_hat = X_hat.norm();
  r.X_tilde = (X - X_hat).norm();
  r.phi_tilde = r.h1_u_tilde + r.X_tilde;
  r.phi = r.h1_u * r.h1_u + r.X * r.X + r.h1_u_hat * r.h1_u_hat + r.X_hat * r.X_hat;
  return r;
}

PhiNorms phi_norms(const PlantState& plant, const ObserverState& obs, const EquilibriumProfile& eq,
                   const BiophysicalParams& p) {
  const auto e = to_error_coords(plant.c, plant.c_c, plant.l, eq, p);
  return phi_norms(e.u, e.X, obs.u_hat, obs.X_hat, plant.l);
}

}  // namespace axon
