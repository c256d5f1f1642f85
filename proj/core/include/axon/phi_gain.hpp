#pragma once

#include <Eigen/Core>

#include "axon/model.hpp"

namespace axon {

/// Assembly of the (2,2) block of N1.
///
/// derived: (1/D)(a I - B H^T), the sign that makes the law reproduce the
/// target boundary condition. alternate: (1/D)(a I + B H^T), kept only so
/// the two can be compared; with it the closed loop is unstable.
enum class N1Form { derived, alternate };

/// Controller gain phi(x)^T = lead e^{N1 x} [I; 0] for x <= 0, with
///   N1 = [[0, (1/D)(g I + A + (a/D) B H^T)], [I, (1/D)(a I -+ B H^T)]],
///   lead = [H^T, K - (1/D) H^T B H^T].
class PhiGain {
 public:
  PhiGain(const LinearModel& model, const Row2& K, N1Form form = N1Form::derived);

  [[nodiscard]] const Eigen::Matrix4d& N1() const { return N1_; }
  [[nodiscard]] const Eigen::RowVector4d& lead_row() const { return lead_; }
  [[nodiscard]] N1Form form() const { return form_; }

  /// lead e^{N1 x}
  [[nodiscard]] Eigen::RowVector4d row(double x) const;
  [[nodiscard]] Row2 phi(double x) const;
  /// Analytic derivative lead N1 e^{N1 x} [I; 0].
  [[nodiscard]] Row2 phi_prime(double x) const;

 private:
  Eigen::Matrix4d N1_;
  Eigen::RowVector4d lead_;
  N1Form form_;
};

[[nodiscard]] PhiGain build_phi(const LinearModel& model, const Row2& K, N1Form form = N1Form::derived);

}  // namespace axon
