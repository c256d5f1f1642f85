#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace axon {

using Vec2 = Eigen::Vector2d;
using Row2 = Eigen::RowVector2d;
using Mat2 = Eigen::Matrix2d;

/// Physical constants of the tubulin transport / axon growth plant (SI).
struct BiophysicalParams {
  double D = 10e-6;           ///< diffusivity [m^2/s]
  double a = 1e-8;            ///< advection velocity [m/s]
  double g = 5e-7;            ///< degradation rate [1/s]
  double r_g = 1.783e-5;      ///< lumped growth-rate parameter [m^4/(mol s)]
  double r_g_tilde = 0.053;   ///< assembly reaction rate [1/s]
  double l_c = 4e-6;          ///< growth-cone length ratio [m]
  double c_inf = 0.0119;      ///< equilibrium cone concentration [mol/m^3]

  /// The biological constants used for the reference experiment.
  static BiophysicalParams reference();

  /// Throws ConfigError unless every field is finite, D and l_c are
  /// positive and the rest non-negative. Zero advection/degradation/growth
  /// is accepted so that verification setups can switch mechanisms off.
  void validate() const;

  /// True when every constant is strictly positive.
  [[nodiscard]] bool strictly_positive() const;

  /// a - g*l_c, the net boundary transport coefficient.
  [[nodiscard]] double net_transport() const { return a - g * l_c; }

  /// FNV-1a hash of the bit patterns; identifies cached kernel tables.
  [[nodiscard]] std::uint64_t hash() const;
};

/// Right-hand side of the cone concentration ODE, i.e. dc_c/dt given the
/// cone concentration and the axon-side flux c_x(l).
[[nodiscard]] double cone_rate(const BiophysicalParams& p, double c_c, double flux_at_tip);

/// Growth speed dl/dt for a given cone concentration.
[[nodiscard]] inline double growth_rate(const BiophysicalParams& p, double c_c) {
  return p.r_g * (c_c - p.c_inf);
}

/// Steady-state concentration for a fixed axon length l_s.
///
/// Solves D c'' - a c' - g c = 0 with c(l_s) = c_inf and
/// D c'(l_s) = (a - g l_c) c_inf. The profile is stored as
/// c(x) = coeff_plus e^{root_plus x} + coeff_minus e^{root_minus x}; when the
/// roots coincide (a = g = 0) coeff_minus multiplies x e^{root x} instead.
/// Evaluation goes through a cosh/sinh form centred at l_s, which stays
/// accurate when the roots are nearly equal. Valid for every x >= 0.
class EquilibriumProfile {
 public:
  EquilibriumProfile(const BiophysicalParams& p, double l_s);

  [[nodiscard]] double value(double x) const;
  [[nodiscard]] double slope(double x) const;
  [[nodiscard]] double curvature(double x) const;

  [[nodiscard]] double l_s() const { return l_s_; }
  [[nodiscard]] double q_s_star() const { return q_s_star_; }
  [[nodiscard]] double root_plus() const { return root_plus_; }
  [[nodiscard]] double root_minus() const { return root_minus_; }
  [[nodiscard]] double coeff_plus() const { return coeff_plus_; }
  [[nodiscard]] double coeff_minus() const { return coeff_minus_; }
  [[nodiscard]] bool degenerate_roots() const { return half_gap_ == 0.0; }

 private:
  double l_s_;
  double c_inf_;
  double tip_slope_;
  double mean_root_;  // a / (2D)
  double half_gap_;   // sqrt(a^2 + 4Dg) / (2D)
  double root_plus_, root_minus_;
  double coeff_plus_, coeff_minus_;
  double q_s_star_;
};

[[nodiscard]] EquilibriumProfile steady_state_profile(const BiophysicalParams& p, double l_s);

/// Linearized reference-error model
///   u_t = D u_xx - a u_x - g u,  u_x(0) = U,  u(l) = H^T X,
///   X' = A X + B u_x(l),         y2 = C X.
struct LinearModel {
  Mat2 A;
  Vec2 B;
  Vec2 H;
  Row2 C;
  double a_tilde = 0.0;
  double beta = 0.0;
  /// Coefficient of z2 in dz1/dt produced by linearization but not kept
  /// in A (-(D/l_c) c_eq''(l_s)). Reported so its size can be judged.
  double dropped_cross_term = 0.0;
  // Transport constants carried along for the PDE parts.
  double D = 0.0;
  double a = 0.0;
  double g = 0.0;
  double r_g = 0.0;
};

[[nodiscard]] LinearModel linearize(const BiophysicalParams& p, const EquilibriumProfile& eq);

/// Plant samples at sigma_i = i/n on [0, l], in either coordinate system.
struct ErrorCoordinates {
  std::vector<double> u;
  Vec2 X;
};
struct PhysicalCoordinates {
  std::vector<double> c;
  double c_c = 0.0;
  double l = 0.0;
};

[[nodiscard]] ErrorCoordinates to_error_coords(std::span<const double> c, double c_c, double l,
                                               const EquilibriumProfile& eq, const BiophysicalParams& p);
[[nodiscard]] PhysicalCoordinates from_error_coords(std::span<const double> u, const Vec2& X,
                                                    const EquilibriumProfile& eq,
                                                    const BiophysicalParams& p);

struct GainConfig {
  double lambda = 0.05;    ///< kernel decay parameter [1/s]
  double gamma1 = 1e4;     ///< observer boundary gain [1/m]
  double gamma2 = 1e-3;    ///< controller boundary gain [1/m]
  Row2 K = Row2(-0.1, 1e13);
  Vec2 L = Vec2(1.0, 0.1);
};

struct GainReport {
  // closed-form inequalities
  bool lambda_positive = false;
  bool gamma1_ok = false;     // gamma1 >= D/a
  bool gamma2_ok = false;     // gamma2 >= a/D
  bool observer_ok = false;   // l1 > a_tilde l2 / r_g and l2 > a_tilde
  bool controller_ok = false; // k1 > a_tilde / beta and k2 > 0
  // eigenvalue verdicts
  Eigen::Vector2cd observer_eigs;    // eig(A - LC)
  Eigen::Vector2cd controller_eigs;  // eig(A + BK)
  bool observer_hurwitz = false;
  bool controller_hurwitz = false;

  [[nodiscard]] bool all_closed_form() const {
    return lambda_positive && gamma1_ok && gamma2_ok && observer_ok && controller_ok;
  }
  [[nodiscard]] bool consistent() const {
    return observer_ok == observer_hurwitz && controller_ok == controller_hurwitz;
  }
};

[[nodiscard]] GainReport check_gains(const LinearModel& model, const GainConfig& gains);

/// Distance of the gains from the closed-form stability boundaries, scaled
/// to be dimensionless; used to exclude near-boundary draws in comparisons.
[[nodiscard]] double gain_boundary_margin(const LinearModel& model, const GainConfig& gains);

/// K placing both eigenvalues of A + BK at the real pole -rate.
[[nodiscard]] Row2 place_controller_poles(const LinearModel& model, double rate);

}  // namespace axon
