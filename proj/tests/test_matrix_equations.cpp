#include <gtest/gtest.h>

#include <cmath>

#include "hamosc/catalog.hpp"
#include "hamosc/error.hpp"
#include "hamosc/matrix_equations.hpp"
#include "hamosc/properties.hpp"

using namespace hamosc;

namespace {
double diff(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs(a - b); }
}  // namespace

TEST(SolveBxEqA, IdentityCoefficient) {
  Rng rng(1);
  const ComplexMatrix a = random_matrix(rng, 3);
  const auto r = solve_bx_eq_a(ComplexMatrix::identity(3), a);
  EXPECT_EQ(r.status, SolveStatus::Unique);
  EXPECT_LT(diff(*r.solution, a), 1e-14);
}

TEST(SolveBxEqA, Example32HasNoSolution) {
  const auto r = solve_bx_eq_a(ComplexMatrix::diagonal({1.0, 0.0}),
                               ComplexMatrix{{0.0, 1.0}, {0.0, 1.0}});
  EXPECT_EQ(r.status, SolveStatus::NoSolution);
  EXPECT_EQ(r.rank_coefficient, 1u);
  EXPECT_EQ(r.rank_augmented, 2u);
  EXPECT_FALSE(r.solvable());
}

TEST(SolveBxEqA, SingularButConsistent) {
  const auto r =
      solve_bx_eq_a(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({1.0, 0.0}));
  EXPECT_EQ(r.status, SolveStatus::NonUniqueSolutionReturned);
  EXPECT_LT(diff(*r.solution, ComplexMatrix::diagonal({1.0, 0.0})), 1e-14);
}

TEST(SqrtEquation, IdentityB) {
  const MatrixFunction b = MatrixFunction::parse_real({{"1", "0"}, {"0", "1"}});
  const MatrixFunction a = MatrixFunction::parse_real({{"2", "1"}, {"0", "3"}});
  const auto r = solve_sqrt_b_equation(b, a, 0.5);
  ASSERT_TRUE(r.solvable());
  EXPECT_LT(diff(r.g, a(0.5)), 1e-14);
  // X = I solves sqrt(B) X G = G when G = A is invertible.
  EXPECT_LT(diff(*r.solution * r.g, r.g), 1e-10);
}

TEST(SqrtEquation, Example32AdmitsZero) {
  const CatalogEntry* e = find_catalog_entry("example_3_2");
  ASSERT_NE(e, nullptr);
  const auto r = solve_sqrt_b_equation(e->problem.b, e->problem.a, 1.0);
  ASSERT_TRUE(r.solvable());
  EXPECT_LT(r.residual, 1e-10 * (1.0 + r.rhs_norm));
}

TEST(SqrtEquation, ZeroGGivesZero) {
  const MatrixFunction b = MatrixFunction::parse_real({{"1", "0"}, {"0", "1"}});
  const MatrixFunction a = MatrixFunction::parse_real({{"0", "0"}, {"0", "0"}});
  const auto r = solve_sqrt_b_equation(b, a, 0.0);
  EXPECT_EQ(r.status, SolveStatus::NonUniqueSolutionReturned);
  EXPECT_EQ(max_abs(*r.solution), 0.0);
}

TEST(Lyapunov, Examples) {
  const ComplexMatrix b = ComplexMatrix::diagonal({1.0, 2.0});
  const ComplexMatrix r{{2.0, 3.0}, {3.0, 8.0}};
  auto s = solve_lyapunov(b, r);
  ASSERT_TRUE(s.solvable());
  EXPECT_LT(diff(*s.solution, ComplexMatrix{{1.0, 1.0}, {1.0, 2.0}}), 1e-14);
  Rng rng(2);
  const ComplexMatrix m = random_hermitian(rng, 3);
  s = solve_lyapunov(ComplexMatrix::identity(3), Complex(2.0) * m);
  EXPECT_LT(diff(*s.solution, m), 1e-13);
  s = solve_lyapunov(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0}));
  EXPECT_EQ(s.status, SolveStatus::NoSolution);
}

TEST(HLambdaQuadrature, Examples) {
  Rng rng(3);
  const ComplexMatrix m = random_hermitian(rng, 2);
  EXPECT_LT(diff(h_lambda_by_quadrature(ComplexMatrix::identity(2), m), m / Complex(2.0)), 1e-7);
  EXPECT_LT(diff(h_lambda_by_quadrature(ComplexMatrix::diagonal({1.0, 2.0}),
                                        ComplexMatrix{{2.0, 3.0}, {3.0, 8.0}}),
                 ComplexMatrix{{1.0, 1.0}, {1.0, 2.0}}),
            1e-7);
  EXPECT_EQ(max_abs(h_lambda_by_quadrature(ComplexMatrix::identity(2), ComplexMatrix(2))), 0.0);
}

// Invariant: the eigenbasis solution has residual <= 1e-8 (1 + ||R||).
TEST(LyapunovProperty, ResidualBound) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
    const ComplexMatrix b = random_positive_definite(rng, n);
    const ComplexMatrix r = random_hermitian(rng, n);
    const auto s = solve_lyapunov(b, r);
    ASSERT_TRUE(s.solvable());
    const ComplexMatrix x = *s.solution;
    EXPECT_LT(frobenius_norm(b * x + x * b - r), 1e-8 * (1.0 + frobenius_norm(r)));
    EXPECT_LT(hermitian_residual(x), 1e-12 * (1.0 + max_abs(x)));
  }
}

TEST(SepCaseMu, RankDeficientB) {
  // B = diag(0, 1), S = [[c, d], [d, e]]: mu = -c/2 removes the kernel part.
  const double c = 3.0, d = 0.7, e = -1.2;
  const auto m = sep_case_mu(ComplexMatrix::diagonal({0.0, 1.0}), ComplexMatrix{{c, d}, {d, e}});
  EXPECT_NEAR(m.mu, -c / 2.0, 1e-12);
  ASSERT_TRUE(m.report.solvable());
  const ComplexMatrix x = *m.report.solution;
  const ComplexMatrix b = ComplexMatrix::diagonal({0.0, 1.0});
  const ComplexMatrix rhs = Complex(2.0 * m.mu) * ComplexMatrix::identity(2) +
                            ComplexMatrix{{c, d}, {d, e}};
  EXPECT_LT(max_abs(b * x + x * b - rhs), 1e-10);
}

TEST(SepCaseMu, PositiveDefiniteReducesToLyapunov) {
  const ComplexMatrix b = ComplexMatrix::diagonal({1.0, 2.0});
  const ComplexMatrix s{{2.0, 3.0}, {3.0, 8.0}};
  const auto m = sep_case_mu(b, s);
  const ComplexMatrix x = *m.report.solution;
  const ComplexMatrix rhs = Complex(2.0 * m.mu) * ComplexMatrix::identity(2) + s;
  EXPECT_LT(max_abs(b * x + x * b - rhs), 1e-12);
  EXPECT_THROW(sep_case_mu(ComplexMatrix(2), s), RankTooLow);
}

TEST(SepEquation, VanishingSeparatorGivesZero) {
  Rng rng(5);
  ComplexMatrix free = random_matrix(rng, 3, false);
  const ComplexMatrix a = example_3_3_matrix(1, free);
  const auto r = solve_sep_equation(ComplexMatrix::identity(3), a, 1.0, 0.0, 0.0);
  ASSERT_TRUE(r.solvable());
  EXPECT_EQ(max_abs(*r.solution), 0.0);
}

TEST(SepEquation, ScaledSeparatorGivesHalfIdentity) {
  const ComplexMatrix a{{1.0, 0.0}, {0.0, 2.0}};
  const ComplexMatrix b = Complex(2.0) * separator(a_alpha_beta_gamma(a, 1.0, 0.0, 0.0));
  const auto r = solve_sep_equation(b, a, 1.0, 0.0, 0.0);
  ASSERT_TRUE(r.solvable());
  EXPECT_LT(diff(*r.solution, ComplexMatrix::identity(2) / Complex(2.0)), 1e-12);
}

TEST(SepEquation, RankObstruction) {
  // Sep(diag(0, -1)) = diag(0, 1).
  const auto r = solve_sep_equation(ComplexMatrix::diagonal({1.0, 0.0}),
                                    ComplexMatrix::diagonal({0.0, -1.0}), 1.0, 0.0, 0.0);
  EXPECT_EQ(r.status, SolveStatus::NoSolution);
  EXPECT_EQ(r.rank_coefficient, 1u);
  EXPECT_EQ(r.rank_augmented, 2u);
}

TEST(SepEquation, AlphaBetaMustSumToOne) {
  const MatrixFunction b = MatrixFunction::parse_real({{"1", "0"}, {"0", "1"}});
  EXPECT_THROW(solve_sep_equation(b, b, Expr::number(0.3), Expr::number(0.3), Expr(), 0.0),
               HypothesisNotSatisfied);
}

TEST(OmegaN, Examples) {
  EXPECT_FALSE(omega_n_check(ComplexMatrix::diagonal({1.0, 2.0})).passes);
  const ComplexMatrix skew{{Complex(0, 1), 2.0}, {-2.0, 0.0}};
  EXPECT_TRUE(omega_n_check(skew).passes);
  const auto c = omega_n_check(Complex(1.5) * ComplexMatrix::identity(2) + skew);
  EXPECT_TRUE(c.passes);
  for (double re : c.eigen_real_parts) EXPECT_NEAR(re, 1.5, 1e-8);
}

TEST(Polynomial, RootsOfKnownCubic) {
  // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
  auto roots = polynomial_roots({1.0, 0.0, -7.0, 6.0});
  std::vector<double> re;
  for (auto z : roots) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-10);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -3.0, 1e-10);
  EXPECT_NEAR(re[1], 1.0, 1e-10);
  EXPECT_NEAR(re[2], 2.0, 1e-10);
  const auto p = characteristic_polynomial(ComplexMatrix::diagonal({1.0, 2.0, -3.0}));
  EXPECT_NEAR(std::abs(p[2] - Complex(-7.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p[3] - Complex(6.0)), 0.0, 1e-12);
}
