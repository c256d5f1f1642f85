#include "axon/field_stepper.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "axon/errors.hpp"

namespace axon {

double tip_flux(std::span<const double> f, double l) {
  if (f.size() < 3) throw NumericalError("tip flux needs at least 3 samples");
  const std::size_t n = f.size() - 1;
  const double dx = l / static_cast<double>(n);
  return (3 * f[n] - 4 * f[n - 1] + f[n - 2]) / (2 * dx);
}

FieldStepper::FieldStepper(const Transport& tr, int n) : tr_(tr), n_(n) {
  if (n < 2) throw ConfigError(fmt::format("grid needs at least 2 intervals (got {})", n));
}

void FieldStepper::set_frame(const StepFrame& fr) {
  if (!(fr.l > 0) || !std::isfinite(fr.l)) throw NumericalError(fmt::format("invalid axon length {:.6e} m", fr.l));
  if (!(fr.dt > 0)) throw NumericalError("time step must be positive");
  frame_ = fr;
  const auto n = static_cast<std::size_t>(n_);
  const double ds = 1.0 / n_;
  r_ = fr.dt * tr_.D / (fr.l * fr.l * ds * ds);
  std::vector<double> lower(n, -r_), diag(n, 1 + 2 * r_ + fr.dt * tr_.g), upper(n, -r_);
  upper[0] = -2 * r_;  // ghost node f_{-1} = f_1 - 2 ds l b0
  upper[n - 1] = 0.0;
  lower[0] = 0.0;
  op_.emplace(std::move(lower), std::move(diag), std::move(upper));
  unit_tip_.assign(n, 0.0);
  unit_tip_[n - 1] = r_;
  op_->solve(unit_tip_);
}

void FieldStepper::explicit_rhs(std::span<const double> f, double b0, std::span<double> rhs) const {
  const int n = n_;
  const double ds = 1.0 / n;
  const auto& fr = frame_;
  const double ghost = f[1] - 2 * ds * fr.l * b0;
  for (int i = 0; i < n; ++i) {
    const double v = (i * ds * fr.l_dot - tr_.a) / fr.l;
    const double left = i == 0 ? ghost : f[static_cast<std::size_t>(i - 1)];
    const auto k = static_cast<std::size_t>(i);
    const double grad = v >= 0 ? (f[k + 1] - f[k]) / ds : (f[k] - left) / ds;
    rhs[k] = f[k] + fr.dt * v * grad;
  }
  rhs[0] -= 2 * r_ * ds * fr.l * b0;
}

FieldStepper::FluxResponse FieldStepper::flux_response(std::span<const double> f_old, double b0) const {
  if (!op_) throw NumericalError("field stepper used before set_frame");
  const auto n = static_cast<std::size_t>(n_);
  rhs_.resize(n);
  explicit_rhs(f_old, b0, rhs_);
  op_->solve(rhs_);
  const double two_dx = 2 * frame_.l / n_;
  FluxResponse out;
  out.alpha = (-4 * rhs_[n - 1] + rhs_[n - 2]) / two_dx;
  out.slope = (3 - 4 * unit_tip_[n - 1] + unit_tip_[n - 2]) / two_dx;
  return out;
}

void FieldStepper::advance(std::span<const double> f_old, double b0, double fR, std::span<double> f_new,
                           const Injection* inj) const {
  if (!op_) throw NumericalError("field stepper used before set_frame");
  const auto n = static_cast<std::size_t>(n_);
  rhs_.resize(n);
  explicit_rhs(f_old, b0, rhs_);
  rhs_[n - 1] += r_ * fR;
  if (inj == nullptr) {
    op_->solve(rhs_);
  } else {
    // gain_i (y1 - (3 fR - 4 f_{n-1} + f_{n-2}) / (2 dx)): the fR part is
    // known, the rest is a rank-one term in the unknowns.
    const double two_dx = 2 * frame_.l / n_;
    gain_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      gain_[i] = frame_.dt * inj->gain[i] / two_dx;
      rhs_[i] += frame_.dt * inj->gain[i] * (inj->y1 - 3 * fR / two_dx);
    }
    const std::array<std::size_t, 2> idx{n - 1, n - 2};
    const std::array<double, 2> val{-4.0, 1.0};
    op_->solve_rank_one(rhs_, gain_, idx, val, work_);
  }
  for (std::size_t i = 0; i < n; ++i) f_new[i] = rhs_[i];
  f_new[n] = fR;
}

}  // namespace axon
