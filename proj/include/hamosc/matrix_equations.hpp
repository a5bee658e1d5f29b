#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamosc/matrix.hpp"
#include "hamosc/problem.hpp"
#include "hamosc/quadrature.hpp"

namespace hamosc {

enum class SolveStatus { Unique, NonUniqueSolutionReturned, NoSolution, NoHermitianSolution };

const char* solve_status_name(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::NoSolution;
  std::optional<ComplexMatrix> solution;
  /// Frobenius norm of the equation residual for the returned solution.
  double residual = 0.0;
  /// Norm of the right-hand side the residual is measured against.
  double rhs_norm = 0.0;
  std::size_t rank_coefficient = 0;
  std::size_t rank_augmented = 0;
  /// Which construction produced the solution.
  std::string method;

  bool solvable() const {
    return status == SolveStatus::Unique ||
           status == SolveStatus::NonUniqueSolutionReturned;
  }
};

/// B X = A. Unique when B is invertible; otherwise the ranks of B and [B|A]
/// decide and the minimum-norm solution is returned.
SolveReport solve_bx_eq_a(const ComplexMatrix& b, const ComplexMatrix& a);

/// sqrt(B) X G = G with G = A sqrt(B) - sqrt(B)'. The `method` field records
/// whether sqrt(B) was built symbolically or pointwise.
struct SqrtEquationReport : SolveReport {
  ComplexMatrix sqrt_b;
  ComplexMatrix g;
  bool symbolic_sqrt = false;
};
SqrtEquationReport solve_sqrt_b_equation(const MatrixFunction& b, const MatrixFunction& a,
                                         double t);

/// B X + X B = R, solved in the eigenbasis of B. Returns the Hermitian part
/// when R is Hermitian.
SolveReport solve_lyapunov(const ComplexMatrix& b, const ComplexMatrix& r,
                           const Tolerances& tol = default_tolerances());

/// Integral over [0, tau_max] of exp(-tau B) R exp(-tau B). B must be PSD and
/// R must vanish on the kernel of B; throws NotPositiveDefinite otherwise.
ComplexMatrix h_lambda_by_quadrature(const ComplexMatrix& b, const ComplexMatrix& r,
                                     std::optional<double> tau_max = std::nullopt,
                                     const QuadratureConfig& cfg = {});

struct MuSolution {
  double mu = 0.0;
  SolveReport report;
};

/// Solves B X + X B = 2 mu I + S for B of rank n-1 or n, choosing mu so the
/// kernel component of the right-hand side vanishes. S is the Hermitian data
/// (Lambda_0 + Lambda_0^* + A + A^*). Throws RankTooLow.
MuSolution sep_case_mu(const ComplexMatrix& b, const ComplexMatrix& s,
                       const Tolerances& tol = default_tolerances());

/// alpha A + beta A^* + gamma I
ComplexMatrix a_alpha_beta_gamma(const ComplexMatrix& a, double alpha, double beta,
                                 double gamma);

/// B X = Sep(alpha A + beta A^* + gamma I) at time t, with a Hermitian
/// solution required. Cases are tried in the order IV, I, II, III, general.
/// Throws HypothesisNotSatisfied when alpha + beta != 1 at t.
SolveReport solve_sep_equation(const MatrixFunction& b, const MatrixFunction& a,
                               const Expr& alpha, const Expr& beta, const Expr& gamma,
                               double t);
/// Same on already evaluated data.
SolveReport solve_sep_equation(const ComplexMatrix& b, const ComplexMatrix& a,
                               double alpha, double beta, double gamma);

struct OmegaNCheck {
  ComplexMatrix matrix;
  std::vector<Complex> eigenvalues;
  std::vector<double> eigen_real_parts;
  double spread = 0.0;
  bool passes = false;
};

/// Do all eigenvalues of M share one real part? n <= 8.
OmegaNCheck omega_n_check(const ComplexMatrix& m);

/// Characteristic polynomial coefficients, monic, highest degree first.
std::vector<Complex> characteristic_polynomial(const ComplexMatrix& m);

/// Roots of a monic polynomial by simultaneous iteration. Throws NoConvergence.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& monic);

}  // namespace hamosc
