#include "axon/phi_gain.hpp"

#include "axon/matrix_exp.hpp"

namespace axon {

PhiGain::PhiGain(const LinearModel& m, const Row2& K, N1Form form) : form_(form) {
  const Mat2 I = Mat2::Identity();
  const Mat2 BH = m.B * m.H.transpose();
  const double s = form == N1Form::derived ? -1.0 : 1.0;
  N1_.setZero();
  N1_.topRightCorner<2, 2>() = (m.g * I + m.A + (m.a / m.D) * BH) / m.D;
  N1_.bottomLeftCorner<2, 2>() = I;
  N1_.bottomRightCorner<2, 2>() = (m.a * I + s * BH) / m.D;
  const double HB = m.H.dot(m.B);
  lead_ << m.H.transpose(), K - (HB / m.D) * m.H.transpose();
}

Eigen::RowVector4d PhiGain::row(double x) const {
  const Eigen::Matrix4d E = matrix_exp(N1_ * x);
  return lead_ * E;
}

Row2 PhiGain::phi(double x) const { return row(x).head<2>(); }

Row2 PhiGain::phi_prime(double x) const {
  const Eigen::RowVector4d r = row(x) * N1_;
  return r.head<2>();
}

PhiGain build_phi(const LinearModel& model, const Row2& K, N1Form form) { return PhiGain(model, K, form); }

}  // namespace axon
