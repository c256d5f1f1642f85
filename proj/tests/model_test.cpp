#include <cmath>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "axon/errors.hpp"
#include "axon/model.hpp"

namespace axon {
namespace {

const BiophysicalParams kRef = BiophysicalParams::reference();
constexpr double kLs = 12e-6;

TEST(BiophysicalParams, ReferenceValues) {
  EXPECT_DOUBLE_EQ(kRef.D, 1e-5);
  EXPECT_DOUBLE_EQ(kRef.a, 1e-8);
  EXPECT_DOUBLE_EQ(kRef.g, 5e-7);
  EXPECT_DOUBLE_EQ(kRef.r_g, 1.783e-5);
  EXPECT_DOUBLE_EQ(kRef.r_g_tilde, 0.053);
  EXPECT_DOUBLE_EQ(kRef.l_c, 4e-6);
  EXPECT_DOUBLE_EQ(kRef.c_inf, 0.0119);
  EXPECT_TRUE(kRef.strictly_positive());
}

TEST(BiophysicalParams, ValidateRejectsBadValues) {
  auto p = kRef;
  p.D = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = kRef;
  p.a = -1e-9;
  EXPECT_THROW(p.validate(), ConfigError);
  p = kRef;
  p.c_inf = NAN;
  EXPECT_THROW(p.validate(), ConfigError);
  p = kRef;
  p.a = 0;  // switched off, still valid
  EXPECT_NO_THROW(p.validate());
  EXPECT_FALSE(p.strictly_positive());
}

TEST(BiophysicalParams, HashSeparatesParameterSets) {
  auto p = kRef;
  p.g *= 1.0 + 1e-15;
  EXPECT_NE(p.hash(), kRef.hash());
  EXPECT_EQ(BiophysicalParams::reference().hash(), kRef.hash());
}

TEST(EquilibriumProfile, CharacteristicRoots) {
  const EquilibriumProfile eq(kRef, kLs);
  // roots of D r^2 - a r - g = 0
  const double disc = std::sqrt(kRef.a * kRef.a + 4 * kRef.D * kRef.g);
  EXPECT_NEAR(eq.root_plus(), (kRef.a + disc) / (2 * kRef.D), 1e-12);
  EXPECT_NEAR(eq.root_minus(), (kRef.a - disc) / (2 * kRef.D), 1e-12);
  EXPECT_NEAR(eq.root_plus(), 0.2241, 1e-4);
  EXPECT_NEAR(eq.root_minus(), -0.2231, 1e-4);
}

TEST(EquilibriumProfile, SatisfiesOdeAndBoundaryData) {
  const EquilibriumProfile eq(kRef, kLs);
  for (int k = 0; k < 10; ++k) {
    const double x = kLs * k / 9.0;
    const double lhs = kRef.D * eq.curvature(x) - kRef.a * eq.slope(x);
    const double rhs = kRef.g * eq.value(x);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs)) << "x = " << x;
  }
  EXPECT_DOUBLE_EQ(eq.value(kLs), kRef.c_inf);
  EXPECT_NEAR(kRef.D * eq.slope(kLs), kRef.net_transport() * kRef.c_inf, 1e-15 * kRef.c_inf * kRef.a);
  EXPECT_EQ(eq.q_s_star(), -eq.slope(0.0));
  EXPECT_LT(eq.q_s_star(), 0.0);
  EXPECT_NEAR(eq.q_s_star(), -1.189e-5, 1e-8);
}

TEST(EquilibriumProfile, ExponentialFormMatchesCenteredForm) {
  const EquilibriumProfile eq(kRef, kLs);
  for (int k = 0; k <= 4; ++k) {
    const double x = kLs * k / 4.0;
    const double expo = eq.coeff_plus() * std::exp(eq.root_plus() * x) + eq.coeff_minus() * std::exp(eq.root_minus() * x);
    EXPECT_NEAR(expo, eq.value(x), 1e-12 * kRef.c_inf);
  }
}

TEST(EquilibriumProfile, DegenerateRootsUseLinearMode) {
  auto p = kRef;
  p.a = 0;
  p.g = 0;
  const EquilibriumProfile eq(p, kLs);
  EXPECT_TRUE(eq.degenerate_roots());
  // c'' = 0 with c(l_s) = c_inf and c'(l_s) = -g l_c c_inf / D = 0
  EXPECT_DOUBLE_EQ(eq.value(0.0), p.c_inf);
  EXPECT_EQ(eq.slope(3e-6), 0.0);
  EXPECT_EQ(eq.q_s_star(), 0.0);
  EXPECT_FALSE(std::signbit(eq.q_s_star()));
}

TEST(EquilibriumProfile, RejectsNonPositiveSetpoint) {
  EXPECT_THROW(EquilibriumProfile(kRef, 0.0), ConfigError);
  EXPECT_THROW(EquilibriumProfile(kRef, -1e-6), ConfigError);
}

TEST(LinearModel, MatricesFromParameters) {
  const EquilibriumProfile eq(kRef, kLs);
  const LinearModel m = linearize(kRef, eq);
  const double at = (kRef.a - kRef.g * kRef.l_c - kRef.r_g * kRef.c_inf - kRef.r_g_tilde * kRef.l_c) / kRef.l_c;
  EXPECT_NEAR(m.a_tilde, at, 1e-15);
  EXPECT_NEAR(m.a_tilde, -0.10354, 1e-5);
  EXPECT_DOUBLE_EQ(m.beta, 2.5);
  EXPECT_EQ(m.A(0, 1), 0.0);
  EXPECT_EQ(m.A(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.A(1, 0), kRef.r_g);
  EXPECT_DOUBLE_EQ(m.B(0), -2.5);
  EXPECT_EQ(m.B(1), 0.0);
  EXPECT_EQ(m.H(0), 1.0);
  EXPECT_DOUBLE_EQ(m.H(1), -kRef.net_transport() * kRef.c_inf / kRef.D);
  EXPECT_EQ(m.C, Row2(0, 1));
}

TEST(Coordinates, RoundTrip) {
  const EquilibriumProfile eq(kRef, kLs);
  std::vector<double> c(17);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.01 + 1e-3 * std::sin(0.3 * static_cast<double>(i));
  const auto e = to_error_coords(c, 0.0125, 9e-6, eq, kRef);
  EXPECT_DOUBLE_EQ(e.X(0), 0.0125 - kRef.c_inf);
  EXPECT_DOUBLE_EQ(e.X(1), 9e-6 - kLs);
  const auto back = from_error_coords(e.u, e.X, eq, kRef);
  EXPECT_NEAR(back.l, 9e-6, 1e-20);
  EXPECT_NEAR(back.c_c, 0.0125, 1e-17);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(back.c[i], c[i], 1e-17);
  EXPECT_THROW((void)to_error_coords(c, 0.0125, 0.0, eq, kRef), NumericalError);
}

TEST(Coordinates, EquilibriumMapsToZero) {
  const EquilibriumProfile eq(kRef, kLs);
  std::vector<double> c(33);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = eq.value(kLs * static_cast<double>(i) / 32.0);
  const auto e = to_error_coords(c, kRef.c_inf, kLs, eq, kRef);
  for (double v : e.u) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(e.X.norm(), 0.0);
}

class GainsTest : public ::testing::Test {
 protected:
  LinearModel m = linearize(kRef, EquilibriumProfile(kRef, kLs));
};

TEST_F(GainsTest, ReferenceControllerGainFails) {
  const GainConfig k;  // lambda 0.05, K = [-0.1, 1e13], L = [1, 0.1]
  const auto r = check_gains(m, k);
  EXPECT_TRUE(r.lambda_positive);
  EXPECT_TRUE(r.gamma1_ok);
  EXPECT_TRUE(r.observer_ok);
  EXPECT_TRUE(r.observer_hurwitz);
  EXPECT_FALSE(r.controller_ok);
  EXPECT_FALSE(r.controller_hurwitz);
  EXPECT_TRUE(r.consistent());
}

TEST_F(GainsTest, PolePlacementGivesDoublePole) {
  const Row2 K = place_controller_poles(m, 0.05);
  EXPECT_NEAR(K(0), -0.0014179, 1e-7);
  EXPECT_NEAR(K(1), 56.0852, 1e-3);
  const Mat2 cl = m.A + m.B * K;
  // characteristic polynomial (s + 0.05)^2
  EXPECT_NEAR(cl.trace(), -0.1, 1e-12);
  EXPECT_NEAR(cl.determinant(), 0.0025, 1e-12);
  GainConfig k;
  k.K = K;
  EXPECT_TRUE(check_gains(m, k).controller_ok);
}

TEST_F(GainsTest, BoundaryMarginShrinksNearEdge) {
  GainConfig k;
  k.K = place_controller_poles(m, 0.05);
  const double far = gain_boundary_margin(m, k);
  k.K(0) = m.a_tilde / m.beta * (1 + 1e-12);
  EXPECT_GT(far, 1e-5);
  EXPECT_LT(gain_boundary_margin(m, k), 1e-9);
}

TEST_F(GainsTest, GammaConditions) {
  GainConfig k;
  k.gamma1 = 0.5 * m.D / m.a;
  k.gamma2 = 0.5 * m.a / m.D;
  const auto r = check_gains(m, k);
  EXPECT_FALSE(r.gamma1_ok);
  EXPECT_FALSE(r.gamma2_ok);
  EXPECT_FALSE(r.all_closed_form());
}

}  // namespace
}  // namespace axon
