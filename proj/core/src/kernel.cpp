#include "axon/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <boost/multiprecision/float128.hpp>
#include <fmt/format.h>

#include "axon/errors.hpp"

namespace axon {

namespace {

using quad = boost::multiprecision::float128;

// Kernel samples live on the characteristic lattice xi = p h, eta = q h with
// 0 <= q <= min(p, 2m - p). Every lattice point maps to an (x, y) pair on the
// half-step grid; those with p + q even are the table nodes.
template <class Real>
class Lattice {
 public:
  explicit Lattice(int m) : m_(m), offset_(static_cast<std::size_t>(2 * m + 2)) {
    std::size_t acc = 0;
    for (int p = 0; p <= 2 * m; ++p) {
      offset_[static_cast<std::size_t>(p)] = acc;
      acc += static_cast<std::size_t>(qmax(p) + 1);
    }
    offset_.back() = acc;
    v_.assign(acc, Real(0));
  }
  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] int qmax(int p) const { return std::min(p, 2 * m_ - p); }
  Real& operator()(int p, int q) { return v_[offset_[static_cast<std::size_t>(p)] + static_cast<std::size_t>(q)]; }
  const Real& operator()(int p, int q) const {
    return v_[offset_[static_cast<std::size_t>(p)] + static_cast<std::size_t>(q)];
  }
  std::vector<Real>& raw() { return v_; }
  const std::vector<Real>& raw() const { return v_; }

 private:
  int m_;
  std::vector<std::size_t> offset_;
  std::vector<Real> v_;
};

template <class Real>
struct Coefficients {
  Real h, mu, rho, delta, theta, gamma1;
};

template <class Real>
Coefficients<Real> coefficients(KernelKind kind, const KernelProblem& pr) {
  const Real D = pr.D, a = pr.a, lam = pr.lambda, g1 = pr.gamma1;
  const int m = pr.grid_n - 1;
  Coefficients<Real> c;
  c.h = Real(pr.l_bar) / Real(m);
  c.theta = a / (2 * D);
  c.delta = lam / (2 * D);
  c.gamma1 = g1;
  if (kind == KernelKind::observer) {
    c.mu = lam / D;
    c.rho = -c.theta;
  } else {
    c.mu = -lam / D;
    c.rho = g1 - c.theta;
  }
  return c;
}

// G solves G_{xi eta} = (mu/4) G with G(xi, 0) = gamma1 + delta xi / 2 and
// G_xi - G_eta = rho G on xi = eta. Integrating over the characteristic
// triangle gives G = G0 + F[G] with
//   G0 = e^{-rho eta} gamma1 + delta (1 - e^{-rho eta}) / rho + delta (xi - eta) / 2
//   F[G] = (mu/2) int_0^eta e^{-rho (eta - tau)} I(tau, tau) dtau
//        + (mu/4) int_eta^xi I(tau, eta) dtau,   I(tau, eta) = int_0^eta G(tau, s) ds.
template <class Real>
void seed(const Coefficients<Real>& c, Lattice<Real>& g0) {
  using std::exp;
  using std::expm1;
  const int m = g0.m();
  for (int p = 0; p <= 2 * m; ++p) {
    for (int q = 0; q <= g0.qmax(p); ++q) {
      const Real xi = c.h * p, eta = c.h * q;
      const Real ramp = (c.rho == 0) ? eta : Real(-expm1(-c.rho * eta) / c.rho);
      g0(p, q) = exp(-c.rho * eta) * c.gamma1 + c.delta * ramp + c.delta * (xi - eta) / 2;
    }
  }
}

// Cumulative integral out[k] = int_0^{k h} f over N + 1 equispaced samples,
// fourth order: four-point interval rules with one-sided versions at the
// ends. Shorter runs fall back to quadratic or trapezoid rules.
template <class Real>
void cumulative(const Real* f, int N, Real h, Real* out) {
  out[0] = 0;
  if (N == 1) {
    out[1] = h * (f[0] + f[1]) / 2;
    return;
  }
  if (N == 2) {
    out[1] = h * (5 * f[0] + 8 * f[1] - f[2]) / 12;
    out[2] = out[1] + h * (-f[0] + 8 * f[1] + 5 * f[2]) / 12;
    return;
  }
  const Real w = h / 24;
  for (int k = 0; k < N; ++k) {
    Real piece;
    if (k == 0)
      piece = 9 * f[0] + 19 * f[1] - 5 * f[2] + f[3];
    else if (k == N - 1)
      piece = 9 * f[N] + 19 * f[N - 1] - 5 * f[N - 2] + f[N - 3];
    else
      piece = -f[k - 1] + 13 * f[k] + 13 * f[k + 1] - f[k + 2];
    out[k + 1] = out[k] + w * piece;
  }
}

template <class Real>
void apply_f(const Coefficients<Real>& c, const Lattice<Real>& in, Lattice<Real>& inner, Lattice<Real>& out,
             std::vector<Real>& buf, std::vector<Real>& cum) {
  using std::exp;
  const int m = in.m();
  for (int p = 0; p <= 2 * m; ++p) cumulative(&in(p, 0), in.qmax(p), c.h, &inner(p, 0));

  // (mu/2) e^{-rho eta} int_0^eta e^{rho tau} I(tau, tau) dtau
  std::vector<Real> diag(static_cast<std::size_t>(m + 1));
  buf.resize(static_cast<std::size_t>(2 * m + 1));
  cum.resize(buf.size());
  for (int q = 0; q <= m; ++q) buf[static_cast<std::size_t>(q)] = exp(c.rho * c.h * q) * inner(q, q);
  cumulative(buf.data(), m, c.h, cum.data());
  for (int q = 0; q <= m; ++q) {
    const auto k = static_cast<std::size_t>(q);
    diag[k] = (c.mu / 2) * exp(-c.rho * c.h * q) * cum[k];
  }

  // (mu/4) int_eta^xi I(tau, eta) dtau along each eta column
  for (int q = 0; q <= m; ++q) {
    const int len = 2 * (m - q);
    for (int k = 0; k <= len; ++k) buf[static_cast<std::size_t>(k)] = inner(q + k, q);
    if (len > 0) cumulative(buf.data(), len, c.h, cum.data());
    else cum[0] = 0;
    for (int k = 0; k <= len; ++k) out(q + k, q) = diag[static_cast<std::size_t>(q)] + (c.mu / 4) * cum[static_cast<std::size_t>(k)];
  }
}

template <class Real>
double to_double(const Real& v) {
  return static_cast<double>(v);
}

template <class Real>
struct Goursat {
  std::vector<Real> packed;  // row-major upper triangle, as KernelTable
  int depth = 0;
  std::vector<SeriesTerm> terms;
};

template <class Real>
Goursat<Real> solve_goursat(KernelKind kind, const KernelProblem& pr) {
  using std::abs;
  using std::exp;
  const auto c = coefficients<Real>(kind, pr);
  const int m = pr.grid_n - 1;
  Lattice<Real> term(m), next(m), inner(m), sum(m);
  std::vector<Real> buf, cum;
  seed(c, term);
  sum.raw() = term.raw();

  auto sup = [](const Lattice<Real>& l) {
    Real s = 0;
    for (const auto& v : l.raw()) s = std::max(s, Real(abs(v)));
    return to_double(s);
  };
  const double sup0 = sup(term);
  const double logM = std::log(pr.bound_constant());
  const double hd = pr.l_bar / m;

  Goursat<Real> res;
  bool converged = false;
  for (int n = 0; n < pr.max_depth; ++n) {
    apply_f(c, term, inner, next, buf, cum);
    SeriesTerm rec;
    rec.sup_norm = sup(next);
    // |G_{n+1}| <= M^{n+2} s^{n+1} / (n+1)!, s = xi + eta
    const double lg = std::lgamma(static_cast<double>(n) + 2.0);
    for (int p = 1; p <= 2 * m; ++p) {
      for (int q = 0; q <= next.qmax(p); ++q) {
        const double s = hd * (p + q);
        const double logb = (n + 2) * logM + (n + 1) * std::log(s) - lg;
        const double val = std::abs(to_double(next(p, q)));
        if (val > 0) rec.bound_ratio = std::max(rec.bound_ratio, std::exp(std::log(val) - logb));
      }
    }
    res.terms.push_back(rec);
    for (std::size_t k = 0; k < sum.raw().size(); ++k) sum.raw()[k] += next.raw()[k];
    std::swap(term, next);
    if (rec.sup_norm < pr.tol * sup0) {
      res.depth = n + 1;
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericalError(fmt::format("kernel series did not converge within {} terms (last term norm {:.3e})",
                                     pr.max_depth, res.terms.empty() ? 0.0 : res.terms.back().sup_norm));
  }

  // K(x_i, y_j) = G(x_i + y_j, y_j - x_i) e^{theta (x_i - y_j)}
  res.packed.reserve(static_cast<std::size_t>(pr.grid_n) * static_cast<std::size_t>(pr.grid_n + 1) / 2);
  for (int i = 0; i <= m; ++i) {
    for (int j = i; j <= m; ++j) res.packed.push_back(sum(i + j, j - i) * exp(-c.theta * c.h * (j - i)));
  }
  return res;
}

template <class Real>
struct TriView {
  const std::vector<Real>& v;
  std::size_t n;
  const Real& operator()(int i, int j) const {
    const auto ii = static_cast<std::size_t>(i);
    return v[ii * n - ii * (ii - 1) / 2 + static_cast<std::size_t>(j - i)];
  }
};

template <class Real>
ResidualReport residuals(KernelKind kind, const KernelProblem& pr, const std::vector<Real>& packed) {
  using std::abs;
  const auto c = coefficients<Real>(kind, pr);
  const int m = pr.grid_n - 1;
  const TriView<Real> K{packed, static_cast<std::size_t>(pr.grid_n)};
  const Real D = pr.D, a = pr.a, lam = pr.lambda;
  const Real sign = kind == KernelKind::observer ? Real(1) : Real(-1);
  const Real nu = kind == KernelKind::observer ? Real(0) : c.gamma1;
  const Real h = c.h, h2 = h * h;

  ResidualReport r;
  Real kmax = 0;
  for (const auto& v : packed) kmax = std::max(kmax, Real(abs(v)));
  r.pde_scale = to_double(lam * kmax);
  r.roundoff_floor = to_double(kmax * 4 * D / h2) * std::numeric_limits<double>::epsilon();

  Real worst = 0;
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Real kyy = (K(i, j + 1) - 2 * K(i, j) + K(i, j - 1)) / h2;
      const Real kxx = (K(i + 1, j) - 2 * K(i, j) + K(i - 1, j)) / h2;
      const Real kx = (K(i + 1, j) - K(i - 1, j)) / (2 * h);
      const Real ky = (K(i, j + 1) - K(i, j - 1)) / (2 * h);
      const Real res = sign * (D * (kyy - kxx) + a * (kx + ky)) - lam * K(i, j);
      worst = std::max(worst, Real(abs(res)));
    }
  }
  r.pde_max = to_double(worst);

  Real dmax = 0;
  for (int i = 0; i <= m; ++i) {
    const Real target = lam * (h * i) / (2 * D) + c.gamma1;
    dmax = std::max(dmax, Real(abs(K(i, i) - target)));
  }
  r.diagonal_max = to_double(dmax);

  Real nmax = 0;
  for (int j = 4; j <= m; ++j) {
    const Real kx = (-25 * K(0, j) + 48 * K(1, j) - 36 * K(2, j) + 16 * K(3, j) - 3 * K(4, j)) / (12 * h);
    nmax = std::max(nmax, Real(abs(kx - nu * K(0, j))));
  }
  r.neumann_max = to_double(nmax);
  return r;
}

void hash_bytes(std::uint64_t& h, std::uint64_t bits) {
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xffU;
    h *= 1099511628211ULL;
  }
}

}  // namespace

KernelProblem KernelProblem::from(const BiophysicalParams& p, double lambda, double gamma1, double l_bar,
                                  int grid_n, double tol) {
  KernelProblem k;
  k.D = p.D;
  k.a = p.a;
  k.lambda = lambda;
  k.gamma1 = gamma1;
  k.l_bar = l_bar;
  k.grid_n = grid_n;
  k.tol = tol;
  return k;
}

void KernelProblem::validate() const {
  auto bad = [](double v) { return !std::isfinite(v) || v <= 0; };
  if (bad(D)) throw ConfigError(fmt::format("kernel: D must be positive (got {})", D));
  if (!std::isfinite(a) || a < 0) throw ConfigError(fmt::format("kernel: a must be non-negative (got {})", a));
  if (bad(lambda)) throw ConfigError(fmt::format("kernel: lambda must be positive (got {})", lambda));
  if (!std::isfinite(gamma1)) throw ConfigError("kernel: gamma1 must be finite");
  if (bad(l_bar)) throw ConfigError(fmt::format("kernel: l_bar must be positive (got {})", l_bar));
  if (grid_n < 3) throw ConfigError(fmt::format("kernel: grid_n must be at least 3 (got {})", grid_n));
  if (bad(tol)) throw ConfigError(fmt::format("kernel: tol must be positive (got {})", tol));
  if (max_depth < 1) throw ConfigError("kernel: max_depth must be at least 1");
}

double KernelProblem::bound_constant() const {
  // With a = 0 the 1/a term is unbounded; fall back to the l_bar part.
  const double inv_a = a > 0 ? 1.0 / a : 0.0;
  return 0.5 * lambda * (inv_a + l_bar / D);
}

std::uint64_t KernelProblem::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : {D, a, lambda, gamma1, l_bar, tol}) hash_bytes(h, std::bit_cast<std::uint64_t>(v));
  hash_bytes(h, static_cast<std::uint64_t>(grid_n));
  return h;
}

KernelTable::KernelTable(KernelKind kind, const KernelProblem& problem, std::vector<double> packed)
    : kind_(kind), problem_(problem), h_(problem.l_bar / (problem.grid_n - 1)), values_(std::move(packed)) {
  const auto n = static_cast<std::size_t>(problem.grid_n);
  if (values_.size() != n * (n + 1) / 2) {
    throw NumericalError(fmt::format("kernel table has {} samples, expected {}", values_.size(), n * (n + 1) / 2));
  }
}

double KernelTable::operator()(double x, double y) const {
  const double slack = 1e-12 * problem_.l_bar;
  if (!(x >= -slack && y <= problem_.l_bar + slack && x <= y + slack)) {
    throw DomainError(fmt::format("kernel evaluated at ({:.6e}, {:.6e}) outside 0 <= x <= y <= {:.6e}", x, y,
                                  problem_.l_bar));
  }
  const int m = problem_.grid_n - 1;
  const double u = std::clamp(x / h_, 0.0, static_cast<double>(m));
  const double v = std::clamp(y / h_, u, static_cast<double>(m));
  const int i = std::min(static_cast<int>(u), m - 1);
  const int j = std::min(static_cast<int>(v), m - 1);
  const double fx = u - i, fy = v - j;
  if (j > i) {
    return (1 - fx) * ((1 - fy) * at(i, j) + fy * at(i, j + 1)) + fx * ((1 - fy) * at(i + 1, j) + fy * at(i + 1, j + 1));
  }
  // half cell with corners (i,i), (i,i+1), (i+1,i+1)
  return at(i, i) + fy * (at(i, i + 1) - at(i, i)) + fx * (at(i + 1, i + 1) - at(i, i + 1));
}

KernelTable solve_kernel(KernelKind kind, const KernelProblem& problem) {
  problem.validate();
  auto sol = solve_goursat<double>(kind, problem);
  const auto report = residuals(kind, problem, sol.packed);
  KernelTable table(kind, problem, std::move(sol.packed));
  table.truncation_depth = sol.depth;
  table.terms = std::move(sol.terms);
  table.residual = report;
  if (problem.tol < 10 * std::numeric_limits<double>::epsilon()) {
    table.residual.warnings.push_back(
        fmt::format("tol {:.1e} is below double resolution; the series stops on rounding noise", problem.tol));
  }
  if (report.pde_max < 10 * report.roundoff_floor) {
    table.residual.warnings.push_back(fmt::format(
        "PDE residual {:.2e} is within 10x of the rounding floor {:.2e}; grid refinement cannot reduce it further",
        report.pde_max, report.roundoff_floor));
  }
  return table;
}

KernelTable solve_observer_kernel(const BiophysicalParams& p, double lambda, double gamma1, double l_bar,
                                  int grid_n, double tol) {
  return solve_kernel(KernelKind::observer, KernelProblem::from(p, lambda, gamma1, l_bar, grid_n, tol));
}

KernelTable solve_direct_kernel(const BiophysicalParams& p, double lambda, double gamma1, double l_bar,
                                int grid_n, double tol) {
  return solve_kernel(KernelKind::direct, KernelProblem::from(p, lambda, gamma1, l_bar, grid_n, tol));
}

double evaluate_p1(const KernelTable& table, double x, double l) {
  if (table.kind() != KernelKind::observer) throw NumericalError("evaluate_p1 needs an observer kernel table");
  if (l > table.l_bar() * (1 + 1e-12)) {
    throw DomainError(fmt::format("axon length {:.6e} m exceeds the kernel domain l_bar = {:.6e} m", l, table.l_bar()));
  }
  return table.problem().D * table(x, l);
}

PrecisionStudy kernel_residuals_quad(KernelKind kind, const KernelProblem& problem) {
  problem.validate();
  auto sol = solve_goursat<quad>(kind, problem);
  const auto r = residuals(kind, problem, sol.packed);
  PrecisionStudy s;
  s.grid_n = problem.grid_n;
  s.spacing = problem.l_bar / (problem.grid_n - 1);
  s.pde_max = r.pde_max;
  s.diagonal_max = r.diagonal_max;
  s.neumann_max = r.neumann_max;
  s.depth = sol.depth;
  for (const auto& t : sol.terms) s.max_bound_ratio = std::max(s.max_bound_ratio, t.bound_ratio);
  return s;
}

}  // namespace axon
