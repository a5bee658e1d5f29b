#include <gtest/gtest.h>

#include <cmath>

#include "hamosc/catalog.hpp"
#include "hamosc/criteria.hpp"

using namespace hamosc;

namespace {

constexpr auto kOsc = VerdictStatus::OscillatoryTrendCertified;
constexpr auto kInc = VerdictStatus::Inconclusive;
constexpr auto kNA = VerdictStatus::NotApplicable;

HamiltonianProblem make(std::vector<std::vector<std::string>> a,
                        std::vector<std::vector<std::string>> b,
                        std::vector<std::vector<std::string>> c) {
  HamiltonianProblem p;
  p.n = a.size();
  p.a = MatrixFunction::parse_real(a);
  p.b = MatrixFunction::parse_real(b, {true, true, false});
  p.c = MatrixFunction::parse_real(c, {true, true, false});
  return p;
}

HamiltonianProblem harmonic(std::size_t n, const char* c_diag = "-1") {
  std::vector<std::vector<std::string>> z(n, std::vector<std::string>(n, "0")), id = z, c = z;
  for (std::size_t i = 0; i < n; ++i) {
    id[i][i] = "1";
    c[i][i] = c_diag;
  }
  return make(z, id, c);
}

const HamiltonianProblem& catalog_problem(const char* name) {
  return find_catalog_entry(name)->problem;
}

double end_value(const CriterionVerdict& v, std::size_t i) {
  return v.traces.at(i).trace.value_at_end();
}

}  // namespace

TEST(T1_1, ScalarHarmonic) {
  const auto v = check_T1_1(harmonic(1));
  EXPECT_EQ(v.status, kOsc);
  ASSERT_EQ(v.traces.size(), 2u);
  EXPECT_NEAR(end_value(v, 0), 200.0, 1e-6);
  EXPECT_NEAR(end_value(v, 1), 200.0, 1e-6);
}

TEST(T1_1, Example31IsInconclusive) {
  EXPECT_EQ(check_T1_1(catalog_problem("example_3_1")).status, kInc);
}

TEST(T1_1, SingularBIsNotApplicable) {
  const auto p = make({{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "0"}}, {{"-1", "0"}, {"0", "-1"}});
  const auto v = check_T1_1(p);
  EXPECT_EQ(v.status, kNA);
  ASSERT_NE(v.failed_hypothesis(), nullptr);
}

TEST(T3_1, HarmonicAndExample32) {
  const auto v = check_T3_1(harmonic(2));
  EXPECT_EQ(v.status, kOsc);
  const auto w = check_T3_1(catalog_problem("example_3_2"));
  EXPECT_EQ(w.status, kNA);
  const auto* h = w.failed_hypothesis();
  ASSERT_NE(h, nullptr);
  EXPECT_NE(h->evidence.find("rank"), std::string::npos) << h->evidence;
}

TEST(T3_1, AgreesWithT1_1WhenBPositive) {
  for (const char* name : {"harmonic_n1", "harmonic_n2", "example_3_1", "hyperbolic_control",
                           "skew_drift"}) {
    EXPECT_EQ(check_T3_1(catalog_problem(name)).status, check_T1_1(catalog_problem(name)).status)
        << name;
  }
}

TEST(T3_2, HarmonicAndExample32) {
  EXPECT_EQ(check_T3_2(harmonic(2)).status, kOsc);
  EXPECT_EQ(check_T3_2(catalog_problem("example_3_2")).status, kNA);
  EXPECT_NE(check_T3_2(harmonic(2, "1")).status, kOsc);
}

// A = a [[0, 1], [-1, 0]], B = I, C = -I: tr[A A* + C] = 2a^2 - 2, so J(t) = (2 - 2a^2) t.
TEST(T3_3, SkewDriftClosedForm) {
  const auto v = check_T3_3(catalog_problem("skew_drift"));
  EXPECT_EQ(v.status, kOsc);
  EXPECT_NEAR(v.traces.back().trace.value_at_end(), 1.5 * 200.0, 1e-6);
  const auto w = check_T3_3(catalog_problem("example_3_1"));
  EXPECT_EQ(w.status, kInc);
  EXPECT_NEAR(w.traces.back().trace.value_at_end(), 0.0, 1e-9);
}

TEST(T3_4, Example31AndHarmonic) {
  const auto v = check_T3_4(catalog_problem("example_3_1"));
  EXPECT_EQ(v.status, kOsc);
  // -tr of 4 C integrated: C = -I in n = 2 gives 8 (t - t0).
  const auto* t = v.trace(v.traces.back().name);
  EXPECT_NEAR(t->trace.value_at_end(), 8.0 * 200.0, 1e-6);
  const auto h = check_T3_4(harmonic(3));
  EXPECT_EQ(h.status, kOsc);
  EXPECT_NEAR(h.traces.back().trace.value_at_end(), 4.0 * 3 * 200.0, 1e-6);
  EXPECT_EQ(check_T3_4(harmonic(2, "1")).status, kInc);
}

TEST(T3_5, Example32AndHarmonic) {
  const auto v = check_T3_5(catalog_problem("example_3_2"));
  EXPECT_EQ(v.status, kOsc);
  EXPECT_NEAR(v.traces.back().trace.value_at_end(), 200.0, 1e-6);
  const auto h = check_T3_5(harmonic(3));
  EXPECT_EQ(h.status, kOsc);
  EXPECT_NEAR(h.traces.back().trace.value_at_end(), 600.0, 1e-6);
  EXPECT_EQ(check_T3_5(harmonic(2, "1")).status, kInc);
}

TEST(T3_6, HarmonicWithZeroLambda) {
  CriterionConfig cfg;
  cfg.lambda = MatrixFunction::parse_real({{"0", "0"}, {"0", "0"}});
  const auto v = check_T3_6(harmonic(2), cfg);
  EXPECT_EQ(v.status, kOsc);
}

TEST(C3_1, SkewAIsLeightonType) {
  const auto v = check_C3_1(catalog_problem("skew_drift"));
  EXPECT_EQ(v.status, kOsc);
  EXPECT_EQ(check_C3_1(catalog_problem("example_3_1")).status, kOsc);
  // A = diag(1, 2): the eigenvalues have different real parts, so Omega_n fails.
  const auto w = check_C3_1(make({{"1", "0"}, {"0", "2"}}, {{"1", "0"}, {"0", "1"}},
                                 {{"-1", "0"}, {"0", "-1"}}));
  EXPECT_EQ(w.status, kNA);
}

TEST(T3_7, HarmonicUsesSeparatorShortcut) {
  const auto v = check_T3_7_and_C2_2(harmonic(3));
  EXPECT_EQ(v.criterion_id, "C2.2");
  EXPECT_EQ(v.status, kOsc);
  EXPECT_NEAR(v.traces.back().trace.value_at_end(), 3.0 * 200.0, 1e-6);
}

TEST(T3_7, VanishingSumCIsInconclusive) {
  const auto p = make({{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "1"}}, {{"1", "-1"}, {"-1", "1"}});
  EXPECT_EQ(check_T3_7_and_C2_2(p).status, kInc);
}

TEST(T3_7, Example33Branches) {
  for (const char* name : {"example_3_3_q1", "example_3_3_q2", "example_3_3_q3"}) {
    const CatalogEntry* e = find_catalog_entry(name);
    const auto v = check_T3_7_and_C2_2(e->problem, e->configure({}));
    EXPECT_EQ(v.criterion_id, "C2.2") << name;
    EXPECT_EQ(v.status, kOsc) << name;
  }
}

TEST(RunAll, Example31Narrative) {
  const auto r = run_all(catalog_problem("example_3_1"));
  EXPECT_EQ(r.find("T1.1")->status, kInc);
  EXPECT_EQ(r.find("T3.4")->status, kOsc);
  ASSERT_TRUE(r.simulation.has_value());
  EXPECT_TRUE(r.simulation->oscillation_observed);
  EXPECT_TRUE(r.disagreements.empty());
}

TEST(RunAll, Example32Narrative) {
  const auto r = run_all(catalog_problem("example_3_2"));
  EXPECT_EQ(r.find("T3.1")->status, kNA);
  EXPECT_EQ(r.find("T3.2")->status, kNA);
  EXPECT_EQ(r.find("T3.5")->status, kOsc);
}

TEST(RunAll, HyperbolicControlCertifiesNothing) {
  const auto r = run_all(catalog_problem("hyperbolic_control"));
  for (const auto& v : r.verdicts) EXPECT_NE(v.status, kOsc) << v.criterion_id;
  EXPECT_TRUE(r.simulation->zeros.zeros.empty());
}

TEST(RunAll, HorizonIsConfigurable) {
  CriterionConfig cfg;
  cfg.divergence.horizon = 50.0;
  const auto v = check_T3_4(harmonic(1), cfg);
  EXPECT_NEAR(v.traces.back().trace.horizon(), 50.0, 1e-12);
  EXPECT_NEAR(v.traces.back().trace.value_at_end(), 4.0 * 50.0, 1e-6);
}
