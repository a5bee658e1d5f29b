#include "hamosc/matrix_equations.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hamosc/error.hpp"

namespace hamosc {

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Unique: return "Unique";
    case SolveStatus::NonUniqueSolutionReturned: return "NonUniqueSolutionReturned";
    case SolveStatus::NoSolution: return "NoSolution";
    case SolveStatus::NoHermitianSolution: return "NoHermitianSolution";
  }
  return "?";
}

namespace {

constexpr double kRankTol = 1e-10;

bool residual_ok(double residual, double rhs_norm) {
  return residual <= 1e-8 * (1.0 + rhs_norm);
}

}  // namespace

SolveReport solve_bx_eq_a(const ComplexMatrix& b, const ComplexMatrix& a) {
  if (!b.is_square() || a.rows() != b.rows()) {
    throw DimensionMismatch("solve_bx_eq_a: incompatible shapes");
  }
  const std::size_t n = b.rows();
  SolveReport rep;
  rep.rhs_norm = frobenius_norm(a);
  rep.rank_coefficient = numeric_rank(b, kRankTol);
  rep.rank_augmented = numeric_rank(hconcat(b, a), kRankTol);
  if (rep.rank_coefficient < rep.rank_augmented) {
    rep.status = SolveStatus::NoSolution;
    rep.method = "rank test";
    return rep;
  }
  ComplexMatrix x;
  if (rep.rank_coefficient == n) {
    x = solve(b, a);
    rep.status = SolveStatus::Unique;
    rep.method = "LU";
  } else {
    x = pseudo_inverse(b, kRankTol) * a;
    rep.status = SolveStatus::NonUniqueSolutionReturned;
    rep.method = "minimum norm";
  }
  rep.residual = frobenius_norm(b * x - a);
  rep.solution = std::move(x);
  return rep;
}

SqrtEquationReport solve_sqrt_b_equation(const MatrixFunction& b, const MatrixFunction& a,
                                         double t) {
  SqrtEquationReport rep;
  ComplexMatrix root;
  ComplexMatrix droot;
  if (b.is_diagonal()) {
    const MatrixFunction s = b.diagonal_sqrt();
    root = s(t);
    droot = s.derivative()(t);
    rep.symbolic_sqrt = true;
  } else {
    root = sqrt_psd(b(t));
    if (b.is_constant()) {
      droot = ComplexMatrix(b.dim());
    } else {
      constexpr double h = 1e-5;
      droot = (sqrt_psd(b(t + h)) - sqrt_psd(b(t - h))) / Complex(2.0 * h);
    }
  }
  const ComplexMatrix g = a(t) * root - droot;
  rep.sqrt_b = root;
  rep.g = g;
  rep.rhs_norm = frobenius_norm(g);
  rep.method = rep.symbolic_sqrt ? "symbolic sqrt(B)" : "pointwise sqrt(B), central difference";
  rep.rank_coefficient = numeric_rank(root, kRankTol);
  rep.rank_augmented = numeric_rank(hconcat(root, g), kRankTol);
  if (rep.rank_coefficient < rep.rank_augmented) {
    rep.status = SolveStatus::NoSolution;
    return rep;
  }
  const std::size_t n = b.dim();
  const std::size_t rank_g = numeric_rank(g, kRankTol);
  ComplexMatrix x = pseudo_inverse(root, kRankTol) * g * pseudo_inverse(g, kRankTol);
  rep.status = rep.rank_coefficient == n && rank_g == n
                   ? SolveStatus::Unique
                   : SolveStatus::NonUniqueSolutionReturned;
  rep.residual = frobenius_norm(root * x * g - g);
  rep.solution = std::move(x);
  return rep;
}

SolveReport solve_lyapunov(const ComplexMatrix& b, const ComplexMatrix& r,
                           const Tolerances& tol) {
  if (!b.is_square() || r.rows() != b.rows() || r.cols() != b.cols()) {
    throw DimensionMismatch("solve_lyapunov: incompatible shapes");
  }
  const std::size_t n = b.rows();
  const EigenSpectrum eig = hermitian_eigen(b, tol);
  const ComplexMatrix& u = eig.vectors;
  const ComplexMatrix rt = u.adjoint() * r * u;
  double bmax = 0.0;
  for (double v : eig.values) bmax = std::max(bmax, std::abs(v));
  const double denom_tol = tol.singular * std::max(1.0, bmax);
  const double rhs_tol = 1e-10 * (1.0 + max_abs(r));

  SolveReport rep;
  rep.rhs_norm = frobenius_norm(r);
  ComplexMatrix xt(n);
  bool unique = true;
  std::size_t solvable_pairs = 0;
  std::size_t blocked_pairs = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = eig.values[j] + eig.values[k];
      if (std::abs(d) > denom_tol) {
        xt(j, k) = rt(j, k) / d;
        ++solvable_pairs;
      } else if (std::abs(rt(j, k)) <= rhs_tol) {
        unique = false;
      } else {
        ++blocked_pairs;
      }
    }
  }
  rep.rank_coefficient = solvable_pairs;
  rep.rank_augmented = solvable_pairs + blocked_pairs;
  rep.method = "eigenbasis";
  if (blocked_pairs > 0) {
    rep.status = SolveStatus::NoSolution;
    return rep;
  }
  ComplexMatrix x = u * xt * u.adjoint();
  if (is_hermitian(r)) x = hermitian_part(x);
  rep.status = unique ? SolveStatus::Unique : SolveStatus::NonUniqueSolutionReturned;
  rep.residual = frobenius_norm(b * x + x * b - r);
  rep.solution = std::move(x);
  return rep;
}

ComplexMatrix h_lambda_by_quadrature(const ComplexMatrix& b, const ComplexMatrix& r,
                                     std::optional<double> tau_max,
                                     const QuadratureConfig& cfg) {
  const EigenSpectrum eig = hermitian_eigen(b);
  const Tolerances& tol = default_tolerances();
  const double top = std::max(1.0, std::abs(eig.values.back()));
  if (eig.values.front() < -tol.psd * top) {
    throw NotPositiveDefinite("h_lambda: B is not positive semidefinite");
  }
  const std::size_t n = b.rows();
  const ComplexMatrix rt = eig.vectors.adjoint() * r * eig.vectors;
  double smallest_positive = 0.0;
  std::vector<bool> kernel(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (eig.values[j] <= tol.singular * top) {
      kernel[j] = true;
    } else if (smallest_positive == 0.0) {
      smallest_positive = eig.values[j];
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (kernel[j] && kernel[k] && std::abs(rt(j, k)) > 1e-10 * (1.0 + max_abs(r))) {
        throw NotPositiveDefinite(
            "h_lambda: right-hand side does not vanish on the kernel of B");
      }
  if (max_abs(r) == 0.0 || smallest_positive == 0.0) return ComplexMatrix(n);

  const double end = tau_max ? *tau_max : std::max(50.0, 23.0 / smallest_positive);
  auto integrand = [&](double tau) {
    const ComplexMatrix e = matrix_exp(b * Complex(-tau));
    return ComplexMatrix(e * r * e);
  };
  // Geometric pieces keep the panel width proportional to the local decay.
  ComplexMatrix total(n);
  double lo = 0.0;
  double hi = 1.0;
  while (lo < end) {
    hi = std::min(hi, end);
    QuadratureConfig piece = cfg;
    piece.h = std::min(cfg.h, (hi - lo) / 8.0);
    piece.atol = std::min(cfg.atol, 1e-12);
    piece.rtol = std::min(cfg.rtol, 1e-11);
    total += integrate_matrix(integrand, lo, hi, piece).value;
    lo = hi;
    hi = 2.0 * hi;
  }
  return hermitian_part(total);
}

MuSolution sep_case_mu(const ComplexMatrix& b, const ComplexMatrix& s,
                       const Tolerances& tol) {
  const std::size_t n = b.rows();
  const EigenSpectrum eig = hermitian_eigen(b, tol);
  const double top = std::max(1.0, std::abs(eig.values.back()));
  std::size_t zeros = 0;
  for (double v : eig.values)
    if (v <= tol.singular * top) ++zeros;
  const std::size_t rank = n - zeros;
  if (rank + 1 < n) {
    throw RankTooLow(fmt::format("rank B = {} < n - 1 = {}", rank, n - 1));
  }
  MuSolution out;
  if (rank == n) {
    out.report = solve_lyapunov(b, s, tol);
    out.report.method = "case I (B > 0)";
    return out;
  }
  // Kernel direction is the first eigenvector (ascending order).
  const ComplexMatrix st = eig.vectors.adjoint() * s * eig.vectors;
  out.mu = -0.5 * st(0, 0).real();
  const ComplexMatrix rhs = s + ComplexMatrix::identity(n) * Complex(2.0 * out.mu);
  out.report = solve_lyapunov(b, rhs, tol);
  out.report.method = "case II (rank B = n - 1)";
  return out;
}

ComplexMatrix a_alpha_beta_gamma(const ComplexMatrix& a, double alpha, double beta,
                                 double gamma) {
  return a * Complex(alpha) + a.adjoint() * Complex(beta) +
         ComplexMatrix::identity(a.rows()) * Complex(gamma);
}

namespace {

// Least-squares sigma with B = sigma * S; nullopt when the fit is not exact.
std::optional<double> proportional(const ComplexMatrix& b, const ComplexMatrix& s) {
  double ss = 0.0;
  double bs = 0.0;
  for (std::size_t i = 0; i < s.data().size(); ++i) {
    ss += std::norm(s.data()[i]);
    bs += (std::conj(s.data()[i]) * b.data()[i]).real();
  }
  if (ss == 0.0) return std::nullopt;
  const double sigma = bs / ss;
  if (sigma == 0.0) return std::nullopt;
  if (frobenius_norm(b - s * Complex(sigma)) > 1e-10 * (1.0 + frobenius_norm(b))) {
    return std::nullopt;
  }
  return sigma;
}

bool is_psd(const ComplexMatrix& m) {
  if (!is_hermitian(m)) return false;
  const EigenSpectrum e = hermitian_eigen(m);
  return e.values.front() >= -default_tolerances().psd * std::max(1.0, std::abs(e.values.back()));
}

bool is_diagonal_matrix(const ComplexMatrix& m, double tol) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

// Block construction for diagonal Sep with contiguous runs of equal values
// and a block diagonal B with the same partition.
std::optional<ComplexMatrix> block_case(const ComplexMatrix& b, const ComplexMatrix& s) {
  const std::size_t n = b.rows();
  const double tol = 1e-12 * (1.0 + max_abs(s) + max_abs(b));
  if (!is_diagonal_matrix(s, tol)) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(s(i, i).imag()) > tol) return std::nullopt;
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || std::abs(s(i, i).real() - s(i - 1, i - 1).real()) > tol) starts.push_back(i);
  }
  starts.push_back(n);
  std::vector<std::size_t> block_of(n);
  for (std::size_t k = 0; k + 1 < starts.size(); ++k)
    for (std::size_t i = starts[k]; i < starts[k + 1]; ++i) block_of[i] = k;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (block_of[i] != block_of[j] && std::abs(b(i, j)) > tol) return std::nullopt;

  ComplexMatrix h(n);
  for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
    const std::size_t lo = starts[k];
    const std::size_t m = starts[k + 1] - lo;
    const double nu = s(lo, lo).real();
    ComplexMatrix blk(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) blk(i, j) = b(lo + i, lo + j);
    if (std::abs(nu) <= tol) {
      if (max_abs(blk) > tol) return std::nullopt;
      continue;
    }
    ComplexMatrix inv;
    try {
      inv = hermitian_inverse(blk);
    } catch (const Error&) {
      return std::nullopt;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) h(lo + i, lo + j) = nu * inv(i, j);
  }
  return h;
}

SolveReport finish(SolveReport rep, const ComplexMatrix& b, const ComplexMatrix& s,
                   ComplexMatrix x, const std::string& method) {
  rep.rhs_norm = frobenius_norm(s);
  rep.residual = frobenius_norm(b * x - s);
  rep.method = method;
  rep.solution = std::move(x);
  return rep;
}

}  // namespace

SolveReport solve_sep_equation(const ComplexMatrix& b, const ComplexMatrix& a, double alpha,
                               double beta, double gamma) {
  if (std::abs(alpha + beta - 1.0) > 1e-12) {
    throw HypothesisNotSatisfied(
        fmt::format("alpha + beta = {} differs from 1", alpha + beta));
  }
  const std::size_t n = b.rows();
  const ComplexMatrix s = separator(a_alpha_beta_gamma(a, alpha, beta, gamma));
  SolveReport rep;
  rep.rank_coefficient = numeric_rank(b, kRankTol);
  rep.rank_augmented = numeric_rank(hconcat(b, s), kRankTol);
  const SolveStatus found = rep.rank_coefficient == n ? SolveStatus::Unique
                                                      : SolveStatus::NonUniqueSolutionReturned;

  if (max_abs(s) <= 1e-12 * (1.0 + max_abs(a))) {
    rep.status = found;
    return finish(rep, b, s, ComplexMatrix(n), "IV");
  }
  if (auto sigma = proportional(b, s)) {
    rep.status = found;
    return finish(rep, b, s, ComplexMatrix::identity(n) / Complex(*sigma), "I");
  }
  if (is_psd(s)) {
    const ComplexMatrix root = sqrt_psd(s);
    if (auto sigma = proportional(b, root)) {
      rep.status = found;
      return finish(rep, b, s, root / Complex(*sigma), "II");
    }
  }
  if (auto h = block_case(b, s)) {
    if (residual_ok(frobenius_norm(b * *h - s), frobenius_norm(s))) {
      rep.status = found;
      return finish(rep, b, s, std::move(*h), "III");
    }
  }
  SolveReport general = solve_bx_eq_a(b, s);
  if (!general.solvable()) {
    general.method = "general";
    return general;
  }
  ComplexMatrix h = hermitian_part(*general.solution);
  if (!residual_ok(frobenius_norm(b * h - s), frobenius_norm(s))) {
    SolveReport none;
    none.status = SolveStatus::NoHermitianSolution;
    none.method = "general";
    none.residual = general.residual;
    none.rhs_norm = general.rhs_norm;
    none.rank_coefficient = general.rank_coefficient;
    none.rank_augmented = general.rank_augmented;
    return none;
  }
  rep.status = general.status;
  return finish(rep, b, s, std::move(h), "general");
}

SolveReport solve_sep_equation(const MatrixFunction& b, const MatrixFunction& a,
                               const Expr& alpha, const Expr& beta, const Expr& gamma,
                               double t) {
  return solve_sep_equation(b(t), a(t), eval_expr(alpha, t), eval_expr(beta, t),
                            eval_expr(gamma, t));
}

std::vector<Complex> characteristic_polynomial(const ComplexMatrix& m) {
  // Faddeev-LeVerrier: coefficients of det(zI - M), highest degree first.
  const std::size_t n = m.rows();
  std::vector<Complex> c(n + 1);
  c[0] = 1.0;
  ComplexMatrix mk(n);
  const ComplexMatrix id = ComplexMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + id * c[k - 1];
    c[k] = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& monic) {
  const std::size_t n = monic.size() - 1;
  if (n == 0) return {};
  auto eval = [&](Complex z) {
    Complex v = monic[0];
    for (std::size_t k = 1; k <= n; ++k) v = v * z + monic[k];
    return v;
  };
  // Cauchy bound on the root moduli.
  double radius = 0.0;
  for (std::size_t k = 1; k <= n; ++k) radius = std::max(radius, std::abs(monic[k]));
  radius = 1.0 + radius;
  std::vector<Complex> z(n);
  const Complex seed(0.4, 0.9);
  for (std::size_t k = 0; k < n; ++k) z[k] = radius * 0.5 * std::pow(seed, static_cast<double>(k + 1));
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      if (den == Complex(0.0)) den = Complex(1e-300);
      const Complex step = eval(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change <= 1e-15 * radius) return z;
  }
  // Multiple roots converge linearly; accept a loose finish.
  double worst = 0.0;
  for (const Complex& r : z) worst = std::max(worst, std::abs(eval(r)));
  if (worst <= 1e-10 * std::pow(radius, static_cast<double>(n))) return z;
  throw NoConvergence("polynomial root iteration did not converge");
}

OmegaNCheck omega_n_check(const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() > 8) {
    throw DimensionMismatch("omega_n_check supports square matrices up to 8x8");
  }
  const std::size_t n = m.rows();
  OmegaNCheck out;
  out.matrix = m;
  // M = cI + skew-Hermitian has spectrum c + i*R exactly.
  const ComplexMatrix herm = hermitian_part(m);
  const double c = herm.trace().real() / static_cast<double>(n);
  const double scale = 1.0 + max_abs(m);
  if (max_abs(herm - ComplexMatrix::identity(n) * Complex(c)) <= 1e-13 * scale) {
    const EigenSpectrum skew = hermitian_eigen(
        hermitian_part((m - ComplexMatrix::identity(n) * Complex(c)) * Complex(0.0, -1.0)));
    for (double v : skew.values) out.eigenvalues.push_back(Complex(c, v));
  } else {
    const double norm = std::max(1.0, max_abs(m));
    const std::vector<Complex> roots =
        polynomial_roots(characteristic_polynomial(m / Complex(norm)));
    std::vector<Complex> z;
    for (const Complex& r : roots) z.push_back(r * norm);
    // Average clusters that come from repeated roots.
    double zmax = 0.0;
    for (const Complex& r : z) zmax = std::max(zmax, std::abs(r));
    const double cluster = 1e-5 * (1.0 + zmax);
    std::vector<bool> used(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (used[i]) continue;
      std::vector<std::size_t> members{i};
      for (std::size_t j = i + 1; j < z.size(); ++j)
        if (!used[j] && std::abs(z[j] - z[i]) <= cluster) members.push_back(j);
      Complex mean = 0.0;
      for (std::size_t j : members) mean += z[j];
      mean /= static_cast<double>(members.size());
      for (std::size_t j : members) {
        used[j] = true;
        out.eigenvalues.push_back(mean);
      }
    }
  }
  double lo = out.eigenvalues.front().real();
  double hi = lo;
  double biggest = 0.0;
  for (const Complex& v : out.eigenvalues) {
    out.eigen_real_parts.push_back(v.real());
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
    biggest = std::max(biggest, std::abs(v));
  }
  out.spread = hi - lo;
  out.passes = out.spread <= 1e-8 * (1.0 + biggest);
  return out;
}

}  // namespace hamosc
