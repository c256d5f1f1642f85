#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "axon/errors.hpp"
#include "axon/norms.hpp"

namespace axon {

DecayReport fit_decay(std::span<const double> t, std::span<const double> v, std::optional<double> t_transient) {
  if (t.size() != v.size()) throw NumericalError("fit_decay: series lengths differ");
  if (t.empty()) throw NumericalError("fit_decay: empty series");
  DecayReport rep;

  std::size_t begin = 0;
  if (t_transient) {
    begin = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), *t_transient) - t.begin());
  } else {
    begin = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  }
  // keep the positive tail of the window
  std::size_t first_pos = begin;
  for (std::size_t i = begin; i < v.size(); ++i) {
    if (!(v[i] > 0)) first_pos = i + 1;
  }
  if (first_pos != begin) {
    rep.warnings.push_back(fmt::format("non-positive values in the window; fit starts at t = {:.6g} instead of {:.6g}",
                                       first_pos < t.size() ? t[first_pos] : t.back(), t[begin]));
    begin = first_pos;
  }
  const std::size_t m = v.size() - std::min(begin, v.size());
  if (m < 10) throw NumericalError(fmt::format("fit_decay needs at least 10 positive samples (have {})", m));

  double st = 0, sy = 0;
  for (std::size_t i = begin; i < v.size(); ++i) {
    st += t[i];
    sy += std::log(v[i]);
  }
  const double tm = st / static_cast<double>(m), ym = sy / static_cast<double>(m);
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = begin; i < v.size(); ++i) {
    const double dt = t[i] - tm, dy = std::log(v[i]) - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) throw NumericalError("fit_decay: window has zero time extent");
  const double slope = sty / stt;
  const double intercept = ym - slope * tm;
  double ss_res = 0;
  for (std::size_t i = begin; i < v.size(); ++i) {
    const double e = std::log(v[i]) - (intercept + slope * t[i]);
    ss_res += e * e;
  }
  rep.kappa = -slope;
  rep.prefactor = std::exp(intercept);
  rep.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  rep.t_begin = t[begin];
  rep.t_end = t.back();
  rep.samples = m;
  const double tiny = 1e-12 / std::max(rep.t_end - rep.t_begin, 1e-300);
  rep.decaying = rep.kappa > tiny;
  if (!rep.decaying) rep.warnings.push_back("series is not decaying");
  return rep;
}

}  // namespace axon
