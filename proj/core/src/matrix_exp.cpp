#include "axon/matrix_exp.hpp"

#include <cmath>

namespace axon {

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.rows();
  const double norm = M.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd S = M / std::ldexp(1.0, squarings);

  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * S / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

ExpIntegrals exp_integrals(const Eigen::MatrixXd& M, double h) {
  const Eigen::Index n = M.rows();
  const Eigen::MatrixXd Mh = M * h;
  if (Mh.cwiseAbs().colwise().sum().maxCoeff() <= 0.5) {
    // Direct series: sum (Mh)^k/k!, h sum (Mh)^k/(k+1)!, h^2 sum (Mh)^k/(k!(k+2)).
    ExpIntegrals out;
    out.exp = Eigen::MatrixXd::Identity(n, n);
    out.int0 = Eigen::MatrixXd::Identity(n, n);
    out.int1 = Eigen::MatrixXd::Identity(n, n) / 2.0;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);  // (Mh)^k / k!
    for (int k = 1; k <= 30; ++k) {
      power = power * Mh / static_cast<double>(k);
      out.exp += power;
      out.int0 += power / static_cast<double>(k + 1);
      out.int1 += power / static_cast<double>(k + 2);
      if (power.cwiseAbs().maxCoeff() <= 1e-18) break;
    }
    out.int0 *= h;
    out.int1 *= h * h;
    return out;
  }
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  big.block(0, 0, n, n) = M;
  big.block(0, n, n, n).setIdentity();
  big.block(n, 2 * n, n, n).setIdentity();
  const Eigen::MatrixXd E = matrix_exp(big * h);
  ExpIntegrals out;
  out.exp = E.block(0, 0, n, n);
  out.int0 = E.block(0, n, n, n);
  // top-right block is int_0^h e^{M s} (h - s) ds
  out.int1 = h * out.int0 - E.block(0, 2 * n, n, n);
  return out;
}

}  // namespace axon
