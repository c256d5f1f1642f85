#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "axon/errors.hpp"
#include "axon/kernel.hpp"

namespace axon {
namespace {

// Well-scaled problem: the kernel varies by O(1) over the triangle, so
// finite-difference residuals in double resolve the truncation error.
KernelProblem scaled(int grid) {
  KernelProblem pr;
  pr.D = 1.0;
  pr.a = 0.5;
  pr.lambda = 3.0;
  pr.gamma1 = 2.0;
  pr.l_bar = 1.0;
  pr.grid_n = grid;
  pr.tol = 1e-15;
  return pr;
}

// Centred residual of D(K_yy - K_xx) + s a (K_x + K_y) - s' lambda K over
// nodes with a full stencil inside the triangle; s = +1, s' = +1 for P and
// the PDE is multiplied through by -1 for Q.
double pde_residual(const KernelTable& t) {
  const auto& pr = t.problem();
  const double h = t.spacing();
  const double sgn = t.kind() == KernelKind::observer ? 1.0 : -1.0;
  double worst = 0;
  for (int i = 1; i + 2 < t.grid_n(); ++i) {
    for (int j = i + 2; j + 1 < t.grid_n(); ++j) {
      const double kxx = (t.at(i + 1, j) - 2 * t.at(i, j) + t.at(i - 1, j)) / (h * h);
      const double kyy = (t.at(i, j + 1) - 2 * t.at(i, j) + t.at(i, j - 1)) / (h * h);
      const double kx = (t.at(i + 1, j) - t.at(i - 1, j)) / (2 * h);
      const double ky = (t.at(i, j + 1) - t.at(i, j - 1)) / (2 * h);
      const double r = sgn * pr.D * (kyy - kxx) + sgn * pr.a * (kx + ky) - pr.lambda * t.at(i, j);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

// Second-order one-sided K_x(0, y_j).
double kx0(const KernelTable& t, int j) {
  return (-3 * t.at(0, j) + 4 * t.at(1, j) - t.at(2, j)) / (2 * t.spacing());
}

TEST(Kernel, DiagonalDataIsExact) {
  for (auto kind : {KernelKind::observer, KernelKind::direct}) {
    const auto pr = scaled(65);
    const KernelTable t = solve_kernel(kind, pr);
    for (int i = 0; i < t.grid_n(); ++i) {
      const double x = i * t.spacing();
      EXPECT_NEAR(t.at(i, i), pr.lambda * x / (2 * pr.D) + pr.gamma1, 1e-13);
    }
  }
}

TEST(Kernel, ObserverPdeResidualSecondOrder) {
  double prev = 0;
  for (int grid : {33, 65, 129}) {
    const double r = pde_residual(solve_kernel(KernelKind::observer, scaled(grid)));
    if (prev > 0) { EXPECT_GT(std::log2(prev / r), 1.9) << "grid " << grid; }
    prev = r;
  }
}

TEST(Kernel, DirectPdeResidualSecondOrder) {
  double prev = 0;
  for (int grid : {65, 129, 257}) {
    const double r = pde_residual(solve_kernel(KernelKind::direct, scaled(grid)));
    if (prev > 0) { EXPECT_GT(std::log2(prev / r), 1.9) << "grid " << grid; }
    prev = r;
  }
}

TEST(Kernel, NeumannConditions) {
  const auto pr = scaled(129);
  const KernelTable P = solve_kernel(KernelKind::observer, pr);
  const KernelTable Q = solve_kernel(KernelKind::direct, pr);
  const double h2 = P.spacing() * P.spacing();
  for (int j = 3; j < P.grid_n(); j += 7) {
    EXPECT_NEAR(kx0(P, j), 0.0, 20 * h2) << j;
    EXPECT_NEAR(kx0(Q, j), pr.gamma1 * Q.at(0, j), 20 * h2 * std::abs(Q.at(0, j))) << j;
  }
}

// With a = 0: P(x,y) = gamma1 I0(z) + (lambda/D) y I1(z)/z,
// z = sqrt(lambda (y^2 - x^2) / D).
double zero_advection_oracle(const KernelProblem& pr, double x, double y) {
  const double c = pr.lambda / pr.D;
  const double z = std::sqrt(c * (y * y - x * x));
  const double i1_over_z = z < 1e-8 ? 0.5 + z * z / 16 : std::cyl_bessel_i(1.0, z) / z;
  return pr.gamma1 * std::cyl_bessel_i(0.0, z) + c * y * i1_over_z;
}

TEST(Kernel, ZeroAdvectionClosedForm) {
  auto pr = scaled(65);
  pr.a = 0.0;
  double prev = 0;
  for (int grid : {65, 129}) {
    pr.grid_n = grid;
    const KernelTable P = solve_kernel(KernelKind::observer, pr);
    double err = 0;
    for (int i = 0; i < grid; ++i)
      for (int j = i; j < grid; ++j)
        err = std::max(err, std::abs(P.at(i, j) - zero_advection_oracle(pr, i * P.spacing(), j * P.spacing())));
    EXPECT_LT(err, 1e-6) << "grid " << grid;
    if (prev > 0) { EXPECT_GT(std::log2(prev / err), 1.9); }
    prev = err;
  }
}

double reciprocity_error(int grid) {
  // P(x,s) - Q(x,s) = int_x^s P(x,y) Q(y,s) dy, trapezoid over the shared grid
  const auto pr = scaled(grid);
  const KernelTable P = solve_kernel(KernelKind::observer, pr);
  const KernelTable Q = solve_kernel(KernelKind::direct, pr);
  const double h = P.spacing();
  const int stride = (grid - 1) / 16;
  double worst = 0;
  for (int i = 0; i < grid; i += stride) {
    for (int j = i; j < grid; j += stride) {
      double s = 0;
      for (int k = i + 1; k < j; ++k) s += P.at(i, k) * Q.at(k, j);
      if (j > i) s += 0.5 * (P.at(i, i) * Q.at(i, j) + P.at(i, j) * Q.at(j, j));
      worst = std::max(worst, std::abs(P.at(i, j) - Q.at(i, j) - s * h));
    }
  }
  return worst;
}

TEST(Kernel, ReciprocityIdentityConverges) {
  const double e1 = reciprocity_error(65), e2 = reciprocity_error(129), e3 = reciprocity_error(257);
  EXPECT_GT(std::log2(e1 / e2), 1.9);
  EXPECT_GT(std::log2(e2 / e3), 1.9);
  EXPECT_LT(e3, 1e-4);
}

TEST(Kernel, SeriesTermsObeyBound) {
  const KernelTable P = solve_observer_kernel(BiophysicalParams::reference(), 0.05, 1e4, 24e-6, 129);
  ASSERT_FALSE(P.terms.empty());
  for (const auto& t : P.terms) EXPECT_LE(t.bound_ratio, 1.0);
  const KernelTable S = solve_kernel(KernelKind::observer, scaled(65));
  for (const auto& t : S.terms) EXPECT_LE(t.bound_ratio, 1.0);
  // terms decay factorially: sup of the last term below the tolerance
  EXPECT_LT(S.terms.back().sup_norm, 1e-15 * 10 * scaled(65).gamma1);
  EXPECT_EQ(S.truncation_depth, static_cast<int>(S.terms.size()));
}

TEST(Kernel, QuadStudyOrder) {
  auto pr = KernelProblem::from(BiophysicalParams::reference(), 0.05, 1e4, 24e-6, 65, 1e-14);
  const auto a = kernel_residuals_quad(KernelKind::observer, pr);
  pr.grid_n = 129;
  const auto b = kernel_residuals_quad(KernelKind::observer, pr);
  EXPECT_GT(std::log2(a.pde_max / b.pde_max), 1.9);
  EXPECT_LT(b.neumann_max, 1e-8);
  EXPECT_LT(b.diagonal_max, 1e-8);
  EXPECT_LE(b.max_bound_ratio, 1.0);
}

TEST(Kernel, DoubleResidualWarnsAtRoundingFloor) {
  const KernelTable P = solve_observer_kernel(BiophysicalParams::reference(), 0.05, 1e4, 24e-6, 129);
  EXPECT_FALSE(P.residual.warnings.empty());
  EXPECT_GT(P.residual.roundoff_floor, 0.0);
}

TEST(KernelTable, InterpolationExactForBilinear) {
  KernelProblem pr = scaled(9);
  const double h = pr.l_bar / 8;
  std::vector<double> packed;
  const auto f = [](double x, double y) { return 1.0 + 2.0 * x - 3.0 * y; };
  for (int i = 0; i < 9; ++i)
    for (int j = i; j < 9; ++j) packed.push_back(f(i * h, j * h));
  const KernelTable t(KernelKind::observer, pr, packed);
  for (double x : {0.0, 0.13, 0.5, 0.77})
    for (double y : {0.8, 0.9, 1.0})
      if (x <= y) { EXPECT_NEAR(t(x, y), f(x, y), 1e-14) << x << "," << y; }
  EXPECT_NEAR(t(0.3, 0.3), f(0.3, 0.3), 1e-14);  // on the diagonal
  EXPECT_THROW((void)t(0.6, 0.5), DomainError);
  EXPECT_THROW((void)t(0.1, 1.1), DomainError);
}

TEST(KernelTable, P1GainAndDomain) {
  const auto p = BiophysicalParams::reference();
  const KernelTable P = solve_observer_kernel(p, 0.05, 1e4, 24e-6, 65);
  EXPECT_NEAR(evaluate_p1(P, 12e-6, 12e-6), p.D * P(12e-6, 12e-6), 1e-18);
  EXPECT_THROW((void)evaluate_p1(P, 0.0, 30e-6), DomainError);
}

TEST(KernelIo, RoundTripAndHeaderCheck) {
  const auto p = BiophysicalParams::reference();
  const auto pr = KernelProblem::from(p, 0.05, 1e4, 24e-6, 33, 1e-14);
  const KernelTable P = solve_kernel(KernelKind::observer, pr);
  const auto path = (std::filesystem::temp_directory_path() / "axon_kernel_io_test.txt").string();
  save_kernel(P, path);
  const KernelTable back = load_kernel(path, KernelKind::observer, pr);
  EXPECT_EQ(back.packed(), P.packed());
  EXPECT_EQ(back.truncation_depth, P.truncation_depth);

  auto other = pr;
  other.lambda = 0.06;
  EXPECT_THROW((void)load_kernel(path, KernelKind::observer, other), ConfigError);
  EXPECT_THROW((void)load_kernel(path, KernelKind::direct, pr), ConfigError);
  other = pr;
  other.grid_n = 65;
  EXPECT_THROW((void)load_kernel(path, KernelKind::observer, other), ConfigError);

  {  // truncated body
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    std::ofstream(path) << header << "\n1 2 3\n";
  }
  EXPECT_THROW((void)load_kernel(path, KernelKind::observer, pr), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW((void)load_kernel(path, KernelKind::observer, pr), ConfigError);
}

TEST(KernelProblem, Validation) {
  auto pr = scaled(65);
  pr.lambda = 0;
  EXPECT_THROW(pr.validate(), ConfigError);
  pr = scaled(2);
  EXPECT_THROW(pr.validate(), ConfigError);
  pr = scaled(65);
  pr.a = -1;
  EXPECT_THROW(pr.validate(), ConfigError);
  EXPECT_NE(scaled(65).hash(), scaled(129).hash());
}

}  // namespace
}  // namespace axon
