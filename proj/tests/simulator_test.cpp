#include <cmath>

#include <gtest/gtest.h>

#include "axon/errors.hpp"
#include "axon/simulator.hpp"

namespace axon {
namespace {

const BiophysicalParams kRef = BiophysicalParams::reference();
constexpr double kLs = 12e-6;

PlantState equilibrium_state(int n, const EquilibriumProfile& eq) {
  return make_plant_state(n, kLs, [&](double x) { return eq.value(x); });
}

TEST(PlantState, ValidateCatchesBadStates) {
  PlantState s = make_plant_state(8, 1e-6, [](double) { return 0.02; });
  EXPECT_NO_THROW(s.validate());
  auto bad = s;
  bad.l = 0;
  EXPECT_THROW(bad.validate(), NumericalError);
  bad = s;
  bad.c[3] = NAN;
  EXPECT_THROW(bad.validate(), NumericalError);
  bad = s;
  bad.c_c = 0.01;
  EXPECT_THROW(bad.validate(), NumericalError);
}

TEST(Plant, EquilibriumDriftIsSmall) {
  // c_eq varies by ~1e-8 relative over the axon, so the discrete tip flux
  // sits at the rounding level (eps c / h) and the drift does not shrink
  // with the grid; it only has to stay small.
  const EquilibriumProfile eq(kRef, kLs);
  for (int n : {32, 64, 128}) {
    PlantState s = equilibrium_state(n, eq);
    PlantIntegrator integ(kRef, n);
    for (int k = 0; k < 2000; ++k) integ.step(s, eq.q_s_star(), 5e-3);  // 10 s
    const double drift = std::abs(s.l - kLs) / kLs + std::abs(s.c_c - kRef.c_inf) / kRef.c_inf;
    EXPECT_LT(drift, 1e-5) << "n = " << n;
  }
}

TEST(Plant, EquilibriumDriftShrinksWithGridForScaledParameters) {
  BiophysicalParams p;
  p.D = 1.0;
  p.a = 0.5;
  p.g = 2.0;
  p.r_g = 0.1;
  p.r_g_tilde = 0.5;
  p.l_c = 0.5;
  p.c_inf = 1.0;
  const EquilibriumProfile eq(p, 1.0);
  double prev = 0;
  for (int n : {16, 32, 64}) {
    PlantState s = make_plant_state(n, 1.0, [&](double x) { return eq.value(x); });
    PlantIntegrator integ(p, n);
    for (int k = 0; k < 1000; ++k) integ.step(s, eq.q_s_star(), 1e-3);
    const double drift = std::abs(s.l - 1.0) + std::abs(s.c_c - 1.0);
    // first order: the advection term is upwinded
    if (prev > 0) EXPECT_GT(std::log2(prev / drift), 0.9) << "n = " << n;
    prev = drift;
  }
}

TEST(Plant, MeasurementsVanishAtEquilibrium) {
  const EquilibriumProfile eq(kRef, kLs);
  const PlantState s = equilibrium_state(128, eq);
  const Measurements m = measure(s, eq);
  EXPECT_EQ(m.y2, 0.0);
  // rounding level of a difference quotient of c ~ c_inf at spacing l/n
  EXPECT_LT(std::abs(m.y1), 100 * 2.2e-16 * kRef.c_inf / (kLs / 128));
}

TEST(Plant, LengthAdvancesFromCurrentConeConcentration) {
  PlantState s = make_plant_state(32, 1e-6, [](double) { return 2 * 0.0119; });
  const double dt = 1e-3;
  const double expected = s.l + dt * kRef.r_g * (s.c_c - kRef.c_inf);
  PlantIntegrator integ(kRef, 32);
  integ.step(s, 0.0, dt);
  EXPECT_DOUBLE_EQ(s.l, expected);
  EXPECT_DOUBLE_EQ(s.t, dt);
  EXPECT_EQ(s.c.back(), s.c_c);
}

TEST(Plant, HoldOptions) {
  PlantState s = make_plant_state(32, 5e-6, [](double x) { return 0.01 + 100 * x; });
  const PlantState held = plant_step(s, 1e-5, kRef, 1e-3, {true, true});
  EXPECT_EQ(held.l, s.l);
  EXPECT_EQ(held.c_c, s.c_c);
  const PlantState moving = plant_step(s, 1e-5, kRef, 1e-3);
  EXPECT_NE(moving.l, s.l);
  EXPECT_NE(moving.c_c, s.c_c);
}

TEST(Plant, StepFunctionMatchesIntegrator) {
  PlantState s = make_plant_state(16, 3e-6, [](double x) { return 0.02 - 200 * x; });
  const PlantState a = plant_step(s, -1e-5, kRef, 1e-3);
  PlantIntegrator integ(kRef, 16);
  integ.step(s, -1e-5, 1e-3);
  EXPECT_EQ(a.c, s.c);
  EXPECT_EQ(a.l, s.l);
}

TEST(Plant, StableInterfaceAtLargeLength) {
  // l well above l_c with a coarse step: the implicit cone coupling must not
  // blow up
  const EquilibriumProfile eq(kRef, 40e-6);
  PlantState s = make_plant_state(64, 40e-6, [&](double x) { return 1.5 * eq.value(x); });
  PlantIntegrator integ(kRef, 64);
  for (int k = 0; k < 1000; ++k) integ.step(s, eq.q_s_star(), 1e-2);
  EXPECT_TRUE(std::isfinite(s.c_c));
  EXPECT_LT(std::abs(s.c_c - kRef.c_inf), 0.5 * kRef.c_inf);
}

TEST(Plant, RejectsCollapse) {
  PlantState s = make_plant_state(16, 1e-9, [](double) { return 0.0; });
  PlantIntegrator integ(kRef, 16);
  EXPECT_THROW(integ.step(s, 0.0, 10.0), NumericalError);
}

TEST(Plant, GridSizeMismatchThrows) {
  PlantState s = make_plant_state(16, 1e-6, [](double) { return 0.01; });
  PlantIntegrator integ(kRef, 32);
  EXPECT_THROW(integ.step(s, 0.0, 1e-3), NumericalError);
}

}  // namespace
}  // namespace axon
