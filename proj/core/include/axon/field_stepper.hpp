#pragma once

#include <optional>
#include <span>
#include <vector>

#include "axon/tridiagonal.hpp"

namespace axon {

struct Transport {
  double D = 0.0;
  double a = 0.0;
  double g = 0.0;
};

/// Geometry of one step: the length l at the end of the step, the mesh
/// speed dl/dt used in the sigma-advection term and the step size.
struct StepFrame {
  double l = 0.0;
  double l_dot = 0.0;
  double dt = 0.0;
};

/// Second-order one-sided estimate of f_x at the tip x = l from samples on
/// the uniform sigma grid. Exact for quadratics.
[[nodiscard]] double tip_flux(std::span<const double> f, double l);

/// Output injection source gain_i * (y1 - f_x(l)), with f_x(l) evaluated on
/// the new field (implicit).
struct Injection {
  std::span<const double> gain;  ///< n+1 samples (the tip entry is unused)
  double y1 = 0.0;
};

/// Front-fixed scheme for f_t = (D/l^2) f_ss + ((s l' - a)/l) f_s - g f on
/// s in [0, 1] with (1/l) f_s(0) = b0 and f(1) = fR.
///
/// Diffusion and degradation are backward Euler at the new length, the
/// advection term is first-order upwind on the old field, and the Neumann
/// datum enters through a ghost node.
class FieldStepper {
 public:
  FieldStepper(const Transport& tr, int n);

  [[nodiscard]] int intervals() const { return n_; }
  [[nodiscard]] const Transport& transport() const { return tr_; }

  /// Assembles and factors the implicit operator for a frame.
  void set_frame(const StepFrame& frame);
  [[nodiscard]] const StepFrame& frame() const { return frame_; }

  /// Tip flux of the new field as an affine function of the Dirichlet value:
  /// f_x(l) = alpha + slope * fR.
  struct FluxResponse {
    double alpha = 0.0;
    double slope = 0.0;
  };
  [[nodiscard]] FluxResponse flux_response(std::span<const double> f_old, double b0) const;

  /// Advances f_old to f_new (both n+1 samples); f_new[n] = fR.
  void advance(std::span<const double> f_old, double b0, double fR, std::span<double> f_new,
               const Injection* injection = nullptr) const;

 private:
  void explicit_rhs(std::span<const double> f_old, double b0, std::span<double> rhs) const;

  Transport tr_;
  int n_;
  StepFrame frame_;
  double r_ = 0.0;  // dt D / (l ds)^2
  std::optional<Tridiagonal> op_;
  std::vector<double> unit_tip_;  // response to fR = 1 with zero data
  mutable std::vector<double> rhs_, work_, gain_;
};

}  // namespace axon
