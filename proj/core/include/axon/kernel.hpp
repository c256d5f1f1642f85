#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "axon/model.hpp"

namespace axon {

/// Which backstepping kernel a table holds.
///
/// observer: P(x,y) of the inverse map u~ = w~ + int_x^l P w~, solving
///   D (P_yy - P_xx) + a (P_x + P_y) = lambda P,
///   P(x,x) = lambda x / (2D) + gamma1,  P_x(0,y) = 0.
/// direct: Q(x,y) of w~ = u~ - int_x^l Q u~, solving
///   D (Q_xx - Q_yy) - a (Q_x + Q_y) = lambda Q,
///   Q(x,x) = lambda x / (2D) + gamma1,  Q_x(0,y) = gamma1 Q(0,y).
///
/// Both follow from substituting the map into the observer error system
/// and its target. They are mutual inverses:
///   P(x,s) - Q(x,s) = int_x^s P(x,y) Q(y,s) dy.
enum class KernelKind { observer, direct };

struct KernelProblem {
  double D = 0.0;
  double a = 0.0;
  double lambda = 0.0;
  double gamma1 = 0.0;
  double l_bar = 0.0;
  int grid_n = 129;          ///< samples per axis, spacing l_bar/(grid_n-1)
  double tol = 1e-14;        ///< stop once sup|term| < tol * sup|G0|
  int max_depth = 200;

  static KernelProblem from(const BiophysicalParams& p, double lambda, double gamma1, double l_bar,
                            int grid_n, double tol);
  void validate() const;
  /// Series bound constant (lambda/2)(1/a + l_bar/D).
  [[nodiscard]] double bound_constant() const;
  /// FNV-1a hash of every field; stored in kernel dumps.
  [[nodiscard]] std::uint64_t hash() const;
};

struct ResidualReport {
  double pde_max = 0.0;        ///< max centred residual of the kernel PDE
  double pde_scale = 0.0;      ///< lambda * max|K|, for relative reading
  double diagonal_max = 0.0;   ///< max |K(x,x) - lambda x/(2D) - gamma1|
  double neumann_max = 0.0;    ///< max |K_x(0,y) - nu K(0,y)|, five-point one-sided O(h^4)
  double roundoff_floor = 0.0; ///< pde residual expected from rounding alone
  std::vector<std::string> warnings;
};

/// Per-iteration record of the successive approximation.
struct SeriesTerm {
  double sup_norm = 0.0;      ///< sup |G_{n+1}| over the lattice
  double bound_ratio = 0.0;   ///< max |G_{n+1}| / (M^{n+2} s^{n+1}/(n+1)!), s = xi+eta
};

/// Kernel sampled on {0 <= x_i <= y_j <= l_bar}, x_i = i h, y_j = j h.
class KernelTable {
 public:
  KernelTable() = default;
  KernelTable(KernelKind kind, const KernelProblem& problem, std::vector<double> packed);

  [[nodiscard]] KernelKind kind() const { return kind_; }
  [[nodiscard]] const KernelProblem& problem() const { return problem_; }
  [[nodiscard]] double l_bar() const { return problem_.l_bar; }
  [[nodiscard]] int grid_n() const { return problem_.grid_n; }
  [[nodiscard]] double spacing() const { return h_; }

  /// Grid sample, 0 <= i <= j < grid_n.
  [[nodiscard]] double at(int i, int j) const { return values_[index(i, j)]; }
  /// Piecewise-linear interpolation: bilinear in cells below the diagonal,
  /// linear on the half cells the diagonal cuts. Throws DomainError outside
  /// the triangle.
  [[nodiscard]] double operator()(double x, double y) const;

  [[nodiscard]] const std::vector<double>& packed() const { return values_; }

  int truncation_depth = 0;
  std::vector<SeriesTerm> terms;
  ResidualReport residual;

 private:
  [[nodiscard]] std::size_t index(int i, int j) const {
    // row i holds j = i..n-1
    const std::size_t n = static_cast<std::size_t>(problem_.grid_n);
    const std::size_t ii = static_cast<std::size_t>(i);
    return ii * n - ii * (ii - 1) / 2 + static_cast<std::size_t>(j - i);
  }

  KernelKind kind_ = KernelKind::observer;
  KernelProblem problem_;
  double h_ = 0.0;
  std::vector<double> values_;
};

[[nodiscard]] KernelTable solve_kernel(KernelKind kind, const KernelProblem& problem);

[[nodiscard]] KernelTable solve_observer_kernel(const BiophysicalParams& p, double lambda, double gamma1,
                                                double l_bar, int grid_n, double tol = 1e-14);
[[nodiscard]] KernelTable solve_direct_kernel(const BiophysicalParams& p, double lambda, double gamma1,
                                              double l_bar, int grid_n, double tol = 1e-14);

/// Observer output-injection gain p1(x, l) = D P(x, l).
[[nodiscard]] double evaluate_p1(const KernelTable& table, double x, double l);

/// Residuals of a kernel computed and checked in quadruple precision. In
/// double the PDE residual of a nearly constant kernel sits at the rounding
/// floor long before the truncation error, so convergence order studies
/// use this path.
struct PrecisionStudy {
  int grid_n = 0;
  double spacing = 0.0;
  double pde_max = 0.0;
  double diagonal_max = 0.0;
  double neumann_max = 0.0;
  int depth = 0;
  double max_bound_ratio = 0.0;
};
[[nodiscard]] PrecisionStudy kernel_residuals_quad(KernelKind kind, const KernelProblem& problem);

/// Text dump with a header line recording l_bar, grid_n, lambda, gamma1
/// and the parameter hash. Values are written with round-trip precision.
void save_kernel(const KernelTable& table, const std::string& path);
/// Loads a dump and checks its header against the expected problem; throws
/// ConfigError on any mismatch.
[[nodiscard]] KernelTable load_kernel(const std::string& path, KernelKind kind,
                                      const KernelProblem& expected);

}  // namespace axon
