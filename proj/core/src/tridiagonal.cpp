#include "axon/tridiagonal.hpp"

#include <cmath>

#include <fmt/format.h>

#include "axon/errors.hpp"

namespace axon {

Tridiagonal::Tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
    : lower_(std::move(lower)), gamma_(diag.size()), pivot_(diag.size()) {
  const std::size_t n = diag.size();
  if (n == 0 || lower_.size() != n || upper.size() != n) throw NumericalError("tridiagonal: inconsistent sizes");
  double prev_gamma = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = diag[i] - (i > 0 ? lower_[i] * prev_gamma : 0.0);
    if (d == 0.0 || !std::isfinite(d)) throw NumericalError(fmt::format("tridiagonal: zero pivot at row {}", i));
    pivot_[i] = 1.0 / d;
    gamma_[i] = upper[i] * pivot_[i];
    prev_gamma = gamma_[i];
  }
}

void Tridiagonal::solve(std::span<double> x) const {
  const std::size_t n = size();
  x[0] *= pivot_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) * pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= gamma_[i] * x[i + 1];
}

void Tridiagonal::solve_rank_one(std::span<double> rhs, std::span<const double> u,
                                 std::span<const std::size_t> v_index, std::span<const double> v_value,
                                 std::vector<double>& work) const {
  work.assign(u.begin(), u.end());
  solve(work);
  solve(rhs);
  double vy = 0.0, vz = 0.0;
  for (std::size_t k = 0; k < v_index.size(); ++k) {
    vy += v_value[k] * rhs[v_index[k]];
    vz += v_value[k] * work[v_index[k]];
  }
  const double denom = 1.0 + vz;
  if (denom == 0.0 || !std::isfinite(denom)) throw NumericalError("rank-one update makes the system singular");
  const double s = vy / denom;
  for (std::size_t i = 0; i < size(); ++i) rhs[i] -= s * work[i];
}

}  // namespace axon
