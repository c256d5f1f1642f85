#pragma once

#include <Eigen/Core>

namespace axon {

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
///
/// The argument is scaled by 2^-s so that its 1-norm is below 1/2, the
/// series is summed until the next term is negligible relative to the
/// partial sum, and the result is squared s times.
[[nodiscard]] Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& M);

/// Van Loan blocks for product integration against e^{M s}:
///   exp  = e^{M h}
///   int0 = int_0^h e^{M s} ds
///   int1 = int_0^h s e^{M s} ds
struct ExpIntegrals {
  Eigen::MatrixXd exp;
  Eigen::MatrixXd int0;
  Eigen::MatrixXd int1;
};
[[nodiscard]] ExpIntegrals exp_integrals(const Eigen::MatrixXd& M, double h);

}  // namespace axon
