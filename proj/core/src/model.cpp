#include "axon/model.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "axon/errors.hpp"

namespace axon {

BiophysicalParams BiophysicalParams::reference() { return {}; }

void BiophysicalParams::validate() const {
  const auto check = [](double v, const char* name, bool allow_zero) {
    if (!std::isfinite(v)) throw ConfigError(std::string("parameter ") + name + " is not finite");
    if (v < 0.0 || (!allow_zero && v == 0.0))
      throw ConfigError(std::string("parameter ") + name + (allow_zero ? " must be >= 0" : " must be > 0"));
  };
  check(D, "D", false);
  check(a, "a", true);
  check(g, "g", true);
  check(r_g, "r_g", true);
  check(r_g_tilde, "r_g_tilde", true);
  check(l_c, "l_c", false);
  check(c_inf, "c_inf", true);
}

bool BiophysicalParams::strictly_positive() const {
  return D > 0 && a > 0 && g > 0 && r_g > 0 && r_g_tilde > 0 && l_c > 0 && c_inf > 0;
}

std::uint64_t BiophysicalParams::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : {D, a, g, r_g, r_g_tilde, l_c, c_inf}) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

double cone_rate(const BiophysicalParams& p, double c_c, double flux_at_tip) {
  return (p.net_transport() * c_c - p.D * flux_at_tip -
          (p.r_g * c_c + p.r_g_tilde * p.l_c) * (c_c - p.c_inf)) /
         p.l_c;
}

EquilibriumProfile::EquilibriumProfile(const BiophysicalParams& p, double l_s)
    : l_s_(l_s), c_inf_(p.c_inf) {
  p.validate();
  if (!(l_s > 0.0) || !std::isfinite(l_s)) throw ConfigError("setpoint length l_s must be > 0");
  tip_slope_ = p.net_transport() * p.c_inf / p.D;
  mean_root_ = p.a / (2.0 * p.D);
  const double disc = p.a * p.a + 4.0 * p.D * p.g;
  if (!(disc >= 0.0)) throw ConfigError("characteristic polynomial has complex roots");
  half_gap_ = std::sqrt(disc) / (2.0 * p.D);
  root_plus_ = mean_root_ + half_gap_;
  root_minus_ = mean_root_ - half_gap_;

  const double A0 = c_inf_;
  const double B0 = tip_slope_ - mean_root_ * c_inf_;
  if (half_gap_ > 0.0) {
    coeff_plus_ = 0.5 * (A0 + B0 / half_gap_) * std::exp(-root_plus_ * l_s_);
    coeff_minus_ = 0.5 * (A0 - B0 / half_gap_) * std::exp(-root_minus_ * l_s_);
  } else {
    // c = e^{r x} (coeff_plus + coeff_minus x)
    coeff_plus_ = (A0 - B0 * l_s_) * std::exp(-mean_root_ * l_s_);
    coeff_minus_ = B0 * std::exp(-mean_root_ * l_s_);
  }
  q_s_star_ = 0.0 - slope(0.0);  // never -0
}

// c(x) = e^{r0 s} f(s) with s = x - l_s and f'' = k^2 f.
double EquilibriumProfile::value(double x) const {
  const double s = x - l_s_;
  const double k = half_gap_;
  const double B0 = tip_slope_ - mean_root_ * c_inf_;
  const double sh = (k > 0.0) ? std::sinh(k * s) / k : s;
  const double f = c_inf_ * std::cosh(k * s) + B0 * sh;
  return std::exp(mean_root_ * s) * f;
}

double EquilibriumProfile::slope(double x) const {
  const double s = x - l_s_;
  const double k = half_gap_;
  const double B0 = tip_slope_ - mean_root_ * c_inf_;
  const double sh = (k > 0.0) ? std::sinh(k * s) / k : s;
  const double ch = std::cosh(k * s);
  const double f = c_inf_ * ch + B0 * sh;
  const double df = c_inf_ * k * k * sh + B0 * ch;
  return std::exp(mean_root_ * s) * (mean_root_ * f + df);
}

double EquilibriumProfile::curvature(double x) const {
  const double s = x - l_s_;
  const double k = half_gap_;
  const double B0 = tip_slope_ - mean_root_ * c_inf_;
  const double sh = (k > 0.0) ? std::sinh(k * s) / k : s;
  const double ch = std::cosh(k * s);
  const double f = c_inf_ * ch + B0 * sh;
  const double df = c_inf_ * k * k * sh + B0 * ch;
  const double r0 = mean_root_;
  return std::exp(r0 * s) * (r0 * r0 * f + 2.0 * r0 * df + k * k * f);
}

EquilibriumProfile steady_state_profile(const BiophysicalParams& p, double l_s) {
  return EquilibriumProfile(p, l_s);
}

LinearModel linearize(const BiophysicalParams& p, const EquilibriumProfile& eq) {
  LinearModel m;
  m.a_tilde = (p.net_transport() - p.r_g * p.c_inf - p.r_g_tilde * p.l_c) / p.l_c;
  m.beta = p.D / p.l_c;
  m.A << m.a_tilde, 0.0, p.r_g, 0.0;
  m.B << -m.beta, 0.0;
  m.H << 1.0, -p.net_transport() * p.c_inf / p.D;
  m.C << 0.0, 1.0;
  m.dropped_cross_term = -(p.D / p.l_c) * eq.curvature(eq.l_s());
  m.D = p.D;
  m.a = p.a;
  m.g = p.g;
  m.r_g = p.r_g;
  return m;
}

ErrorCoordinates to_error_coords(std::span<const double> c, double c_c, double l,
                                 const EquilibriumProfile& eq, const BiophysicalParams& p) {
  if (!(l > 0.0)) throw NumericalError("invalid state: axon length must be positive");
  if (c.size() < 2) throw NumericalError("invalid state: need at least two samples");
  const auto n = static_cast<double>(c.size() - 1);
  ErrorCoordinates e;
  e.u.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) e.u[i] = c[i] - eq.value(static_cast<double>(i) / n * l);
  e.X << c_c - p.c_inf, l - eq.l_s();
  return e;
}

PhysicalCoordinates from_error_coords(std::span<const double> u, const Vec2& X,
                                      const EquilibriumProfile& eq, const BiophysicalParams& p) {
  PhysicalCoordinates s;
  s.l = X(1) + eq.l_s();
  s.c_c = X(0) + p.c_inf;
  const auto n = static_cast<double>(u.size() - 1);
  s.c.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) s.c[i] = u[i] + eq.value(static_cast<double>(i) / n * s.l);
  return s;
}

GainReport check_gains(const LinearModel& m, const GainConfig& k) {
  GainReport r;
  r.lambda_positive = k.lambda > 0.0;
  r.gamma1_ok = m.a > 0.0 && k.gamma1 >= m.D / m.a;
  r.gamma2_ok = k.gamma2 >= m.a / m.D;
  r.observer_ok = k.L(0) > m.a_tilde * k.L(1) / m.r_g && k.L(1) > m.a_tilde;
  r.controller_ok = k.K(0) > m.a_tilde / m.beta && k.K(1) > 0.0;

  const Mat2 obs = m.A - k.L * m.C;
  const Mat2 ctl = m.A + m.B * k.K;
  r.observer_eigs = Eigen::EigenSolver<Mat2>(obs, false).eigenvalues();
  r.controller_eigs = Eigen::EigenSolver<Mat2>(ctl, false).eigenvalues();
  r.observer_hurwitz = r.observer_eigs.real().maxCoeff() < 0.0;
  r.controller_hurwitz = r.controller_eigs.real().maxCoeff() < 0.0;
  return r;
}

double gain_boundary_margin(const LinearModel& m, const GainConfig& k) {
  // Trace and determinant of the two closed-loop matrices, each divided by
  // the magnitude of the terms it is built from.
  const double l1 = k.L(0), l2 = k.L(1), k1 = k.K(0), k2 = k.K(1);
  const double at = m.a_tilde, b = m.beta, rg = m.r_g;
  const auto rel = [](double v, double scale) { return scale > 0 ? std::abs(v) / scale : 1.0; };
  double margin = 1.0;
  margin = std::min(margin, rel(l2 - at, std::abs(l2) + std::abs(at)));
  margin = std::min(margin, rel(l1 * rg - at * l2, std::abs(l1 * rg) + std::abs(at * l2)));
  margin = std::min(margin, rel(b * k1 - at, std::abs(b * k1) + std::abs(at)));
  margin = std::min(margin, rel(b * k2 * rg, std::abs(b * k2 * rg)));
  // eigenvalue real parts relative to the matrix scale
  const GainReport r = check_gains(m, k);
  const double so = (m.A - k.L * m.C).norm();
  const double sc = (m.A + m.B * k.K).norm();
  margin = std::min(margin, r.observer_eigs.real().cwiseAbs().minCoeff() / so);
  margin = std::min(margin, r.controller_eigs.real().cwiseAbs().minCoeff() / sc);
  return margin;
}

Row2 place_controller_poles(const LinearModel& m, double rate) {
  // char poly of A + BK: s^2 + (beta k1 - a_tilde) s + beta r_g k2
  return Row2((2.0 * rate + m.a_tilde) / m.beta, rate * rate / (m.beta * m.r_g));
}

}  // namespace axon
