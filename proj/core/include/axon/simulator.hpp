#pragma once

#include <vector>

#include "axon/field_stepper.hpp"
#include "axon/model.hpp"

namespace axon {

/// Nonlinear plant on the front-fixed grid sigma_i = i/n.
struct PlantState {
  std::vector<double> c;  ///< concentration at x = sigma_i l [mol/m^3]
  double c_c = 0.0;       ///< cone concentration [mol/m^3]
  double l = 0.0;         ///< axon length [m]
  double t = 0.0;         ///< time [s]

  [[nodiscard]] int intervals() const { return static_cast<int>(c.size()) - 1; }
  /// Throws NumericalError on l <= 0, non-finite samples or c(1) != c_c.
  void validate() const;
};

struct Measurements {
  double y1 = 0.0;  ///< u_x(l) = c_x(l) - c_eq'(l) [mol/m^4]
  double y2 = 0.0;  ///< l - l_s [m]
};

struct PlantStepOptions {
  bool hold_cone = false;    ///< keep c_c fixed (fixed-boundary verification)
  bool hold_length = false;  ///< keep l fixed
};

/// Uniform initial state c(x) = c0(x) on [0, l0] with c_c = c0(l0).
template <class F>
PlantState make_plant_state(int n, double l0, F&& c0) {
  PlantState s;
  s.l = l0;
  s.c.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) s.c[static_cast<std::size_t>(i)] = c0(l0 * i / n);
  s.c_c = s.c.back();
  return s;
}

/// Steps the nonlinear plant
///   c_t = D c_xx - a c_x - g c on (0, l),  c_x(0) = -q_s,  c(l) = c_c,
///   l_c c_c' = (a - g l_c) c_c - D c_x(l) - (r_g c_c + r~_g l_c)(c_c - c_inf),
///   l' = r_g (c_c - c_inf).
/// l is advanced first from the current c_c. The cone equation is coupled
/// to the tip flux implicitly: an explicit flux makes the interface
/// unstable once l exceeds l_c. Its reaction terms stay explicit.
class PlantIntegrator {
 public:
  PlantIntegrator(const BiophysicalParams& p, int n);

  void step(PlantState& s, double q_s, double dt, const PlantStepOptions& opt = {});
  [[nodiscard]] const BiophysicalParams& params() const { return p_; }

 private:
  BiophysicalParams p_;
  FieldStepper stepper_;
  std::vector<double> next_;
};

/// Single step without a persistent integrator (allocates).
[[nodiscard]] PlantState plant_step(const PlantState& s, double q_s, const BiophysicalParams& p, double dt,
                                    const PlantStepOptions& opt = {});

[[nodiscard]] Measurements measure(const PlantState& s, const EquilibriumProfile& eq);

}  // namespace axon
