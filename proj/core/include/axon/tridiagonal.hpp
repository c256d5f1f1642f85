#pragma once

#include <span>
#include <vector>

namespace axon {

/// Factored tridiagonal matrix (Thomas algorithm, no pivoting). Intended
/// for the diagonally dominant implicit diffusion operators used here.
class Tridiagonal {
 public:
  /// lower[i] couples row i to i-1 (lower[0] unused), upper[i] to i+1.
  Tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);

  [[nodiscard]] std::size_t size() const { return pivot_.size(); }
  /// Overwrites rhs with the solution.
  void solve(std::span<double> rhs) const;

  /// Solves (T + u v^T) x = rhs by Sherman-Morrison, v sparse (given as
  /// index/value pairs). Overwrites rhs; `work` receives T^{-1} u.
  void solve_rank_one(std::span<double> rhs, std::span<const double> u, std::span<const std::size_t> v_index,
                      std::span<const double> v_value, std::vector<double>& work) const;

 private:
  std::vector<double> lower_;
  std::vector<double> gamma_;  // modified upper coefficients
  std::vector<double> pivot_;  // 1 / modified diagonal
};

}  // namespace axon
