#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axon/model.hpp"
#include "axon/observer.hpp"
#include "axon/simulator.hpp"

namespace axon {

/// sqrt(int_0^l f^2 + f_x^2 dx) for samples on a uniform grid over [0, l].
/// Trapezoid rule; f_x by second-order differences (one-sided at the ends).
[[nodiscard]] double h1_norm(std::span<const double> f, double l);

struct PhiNorms {
  double h1_u = 0.0;
  double h1_u_hat = 0.0;
  double h1_u_tilde = 0.0;
  double X = 0.0;
  double X_hat = 0.0;
  double X_tilde = 0.0;
  /// ||u - u^||_H1 + |X - X^| (sum of norms)
  double phi_tilde = 0.0;
  /// ||u||^2 + |X|^2 + ||u^||^2 + |X^|^2 (sum of squares)
  double phi = 0.0;
};

[[nodiscard]] PhiNorms phi_norms(std::span<const double> u, const Vec2& X, std::span<const double> u_hat,
                                 const Vec2& X_hat, double l);
[[nodiscard]] PhiNorms phi_norms(const PlantState& plant, const ObserverState& obs, const EquilibriumProfile& eq,
                                 const BiophysicalParams& p);

/// Least-squares fit of ln v = ln A - kappa t.
struct DecayReport {
  double kappa = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
  bool decaying = false;
  std::vector<std::string> warnings;
};

/// Fits on [t_transient, t_end]; t_transient defaults to the time of the
/// series maximum. Non-positive values shrink the window to the positive
/// tail (with a warning). Throws NumericalError with fewer than 10 usable
/// samples.
[[nodiscard]] DecayReport fit_decay(std::span<const double> t, std::span<const double> v,
                                    std::optional<double> t_transient = std::nullopt);

}  // namespace axon
