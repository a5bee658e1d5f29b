#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hamosc/catalog.hpp"
#include "hamosc/dynamics.hpp"
#include "hamosc/error.hpp"

using namespace hamosc;

namespace {

constexpr double kPi = std::numbers::pi;

HamiltonianProblem make(std::vector<std::vector<std::string>> a,
                        std::vector<std::vector<std::string>> b,
                        std::vector<std::vector<std::string>> c, double t0 = 0.0) {
  HamiltonianProblem p;
  p.n = a.size();
  p.a = MatrixFunction::parse_real(a);
  p.b = MatrixFunction::parse_real(b, {true, true, false});
  p.c = MatrixFunction::parse_real(c, {true, true, false});
  p.t0 = t0;
  return p;
}

}  // namespace

TEST(Hamiltonian, Example31DeterminantIsCosSquared) {
  const auto& p = find_catalog_entry("example_3_1")->problem;
  const Trajectory tr = integrate_hamiltonian(p, ConjoinedInitialData::standard(2), 10.0);
  for (std::size_t i = 0; i < tr.size(); i += 11) {
    const double c = std::cos(tr.t[i]);
    EXPECT_NEAR(std::abs(tr.det_phi[i] * std::exp(2 * tr.log_scale[i]) - c * c), 0.0, 1e-6);
  }
  EXPECT_LT(tr.stats.max_conjoined_residual, 1e-6);
}

TEST(Hamiltonian, DecoupledHarmonicIsCosine) {
  const auto p = make({{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "1"}}, {{"-1", "0"}, {"0", "-1"}});
  const Trajectory tr = integrate_hamiltonian(p, ConjoinedInitialData::standard(2), 8.0);
  for (std::size_t i = 0; i < tr.size(); i += 9) {
    const ComplexMatrix expected = Complex(std::cos(tr.t[i])) * ComplexMatrix::identity(2);
    EXPECT_LT(max_abs(tr.phi[i] - expected), 1e-6);
  }
}

TEST(Hamiltonian, HyperbolicIsCoshWithoutZeros) {
  const auto p = make({{"0"}}, {{"1"}}, {{"1"}});
  const Trajectory tr = integrate_hamiltonian(p, ConjoinedInitialData::standard(1), 5.0);
  EXPECT_NEAR(tr.phi.back()(0, 0).real() * std::exp(tr.log_scale.back()), std::cosh(5.0),
              1e-6 * std::cosh(5.0));
  EXPECT_TRUE(find_det_zeros(p, tr).zeros.empty());
}

TEST(Hamiltonian, RescalingKeepsLongHyperbolicRunsFinite) {
  const auto p = make({{"0"}}, {{"1"}}, {{"1"}});
  DynamicsConfig cfg;
  cfg.rescale_at = 1e20;
  const Trajectory tr = integrate_hamiltonian(p, ConjoinedInitialData::standard(1), 200.0, cfg);
  EXPECT_GT(tr.stats.rescalings, 0u);
  EXPECT_NEAR(tr.log_scale.back() + std::log(std::abs(tr.phi.back()(0, 0))),
              200.0 - std::log(2.0), 1e-5);
}

TEST(NormalizedDet, ScaleFreeAndBounded) {
  const ComplexMatrix phi{{1.0, 2.0}, {3.0, 4.0}};
  const ComplexMatrix psi{{0.5, 0.0}, {1.0, -1.0}};
  const Complex d = normalized_det(phi, psi);
  EXPECT_LE(std::abs(d), 1.0);
  EXPECT_LT(std::abs(normalized_det(Complex(1e30) * phi, Complex(1e30) * psi) - d), 1e-14);
  EXPECT_EQ(normalized_det(ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}}, psi), Complex(0.0));
}

TEST(DetZeros, Example31TouchZeros) {
  const auto& p = find_catalog_entry("example_3_1")->problem;
  const auto s = simulate(p, ConjoinedInitialData::standard(2), 10.0);
  ASSERT_EQ(s.zeros.zeros.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(s.zeros.zeros[k].t, kPi / 2 + k * kPi, 1e-6);
    EXPECT_EQ(s.zeros.zeros[k].kind, DetZero::Kind::Dip);
  }
}

TEST(DetZeros, ScalarHarmonicSignChanges) {
  const auto p = make({{"0"}}, {{"1"}}, {{"-1"}});
  const auto s = simulate(p, ConjoinedInitialData::standard(1), 20.0);
  ASSERT_EQ(s.zeros.zeros.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(s.zeros.zeros[k].t, kPi / 2 + k * kPi, 1e-7);
    EXPECT_EQ(s.zeros.zeros[k].kind, DetZero::Kind::SignChange);
  }
  EXPECT_TRUE(s.oscillation_observed);
}

TEST(DetZeros, OscillationObservedRule) {
  EXPECT_FALSE(oscillation_observed({}, 0.0, 30.0));
  EXPECT_FALSE(oscillation_observed({1.0, 2.0}, 0.0, 30.0));
  EXPECT_TRUE(oscillation_observed({1.0, 25.0}, 0.0, 30.0));
  EXPECT_FALSE(oscillation_observed({25.0}, 0.0, 30.0));
}

TEST(InitialData, Validation) {
  ConjoinedInitialData init = ConjoinedInitialData::standard(2);
  EXPECT_NO_THROW(init.validate(2));
  EXPECT_THROW(init.validate(3), SchemaError);
  init.y0 = ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}};
  EXPECT_THROW(init.validate(2), SchemaError);
}

TEST(MatrixRiccati, ScalarTangent) {
  const auto p = make({{"0"}}, {{"1"}}, {{"-1"}});
  const auto r = integrate_matrix_riccati(p, ComplexMatrix(1), 3.0);
  ASSERT_TRUE(r.blowup.blew_up());
  EXPECT_NEAR(r.blowup.t_star, kPi / 2, 1e-4);
  for (std::size_t i = 0; i < r.t.size(); i += 13)
    if (r.t[i] < 1.3) EXPECT_NEAR(r.y[i](0, 0).real(), -std::tan(r.t[i]), 1e-6);
}

TEST(MatrixRiccati, ZeroStaysZero) {
  const auto p = make({{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "2"}}, {{"0", "0"}, {"0", "0"}});
  const auto r = integrate_matrix_riccati(p, ComplexMatrix(2), 5.0);
  EXPECT_FALSE(r.blowup.blew_up());
  for (const auto& y : r.y) EXPECT_EQ(max_abs(y), 0.0);
}

TEST(MatrixRiccati, DiagonalSystemIsEntrywiseScalar) {
  // Y' + 2 Y^2 + 2Y - 3 = 0 in the first entry, Y' + Y^2 + 1 = 0 in the second.
  const auto p = make({{"1", "0"}, {"0", "0"}}, {{"2", "0"}, {"0", "1"}}, {{"3", "0"}, {"0", "-1"}});
  const auto m = integrate_matrix_riccati(p, ComplexMatrix(2), 1.2);
  const auto s1 = solve_scalar_riccati(
      ScalarRiccatiProblem{Expr::number(2), Expr::number(2), Expr::number(-3), 0.0, 0.0}, 1.2);
  EXPECT_NEAR(m.y.back()(0, 0).real(), s1.trajectory.y.back(), 1e-6);
  EXPECT_NEAR(m.y.back()(1, 1).real(), -std::tan(1.2), 1e-6);
  EXPECT_EQ(std::abs(m.y.back()(0, 1)), 0.0);
}

TEST(CorrespondenceCheck, Example31) {
  const auto& p = find_catalog_entry("example_3_1")->problem;
  const auto c = check_correspondence(p, ConjoinedInitialData::standard(2), 3.0);
  EXPECT_TRUE(c.holds());
  ASSERT_TRUE(c.first_zero && c.blowup_time);
  EXPECT_NEAR(*c.first_zero, kPi / 2, 1e-4);
  EXPECT_NEAR(*c.blowup_time, kPi / 2, 1e-3);
}

TEST(CorrespondenceCheck, HyperbolicHasNeither) {
  const auto p = make({{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "1"}}, {{"1", "0"}, {"0", "1"}});
  const auto c = check_correspondence(p, ConjoinedInitialData::standard(2), 20.0);
  EXPECT_TRUE(c.holds());
  EXPECT_FALSE(c.first_zero.has_value());
  EXPECT_FALSE(c.blowup_time.has_value());
}

TEST(CorrespondenceCheck, EulerScalar) {
  const auto& p = find_catalog_entry("euler_n1")->problem;
  const auto c = check_correspondence(p, ConjoinedInitialData::standard(1), 60.0);
  EXPECT_TRUE(c.holds()) << c.max_residual;
}

TEST(TrajectoryCsv, HeaderAndRows) {
  const auto p = make({{"0"}}, {{"1"}}, {{"-1"}});
  const Trajectory tr = integrate_hamiltonian(p, ConjoinedInitialData::standard(1), 1.0);
  std::ostringstream out;
  write_trajectory_csv(out, tr);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,phi_re_1_1,phi_im_1_1,det_re,det_im,log_scale");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, tr.size());
}
