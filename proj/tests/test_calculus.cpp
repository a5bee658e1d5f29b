#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hamosc/divergence.hpp"
#include "hamosc/error.hpp"
#include "hamosc/ode.hpp"
#include "hamosc/properties.hpp"
#include "hamosc/quadrature.hpp"

using namespace hamosc;

TEST(Quadrature, ScalarExamples) {
  EXPECT_NEAR(integrate_scalar([](double t) { return std::sin(t); }, 0.0, std::numbers::pi).value,
              2.0, 1e-8);
  EXPECT_NEAR(integrate_scalar([](double t) { return t * t; }, 0.0, 1.0).value, 1.0 / 3.0,
              1e-14);
  const auto r = integrate_scalar([](double t) { return 1.0 / t; }, 1.0, 10.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::log(10.0), 1e-9);
}

TEST(Quadrature, MatrixExamples) {
  auto v = integrate_matrix(
      [](double t) { return ComplexMatrix::diagonal({1.0, 2.0 * t}); }, 0.0, 1.0);
  EXPECT_LT(max_abs(v.value - ComplexMatrix::identity(2)), 1e-14);
  v = integrate_matrix([](double) { return ComplexMatrix(3); }, 0.0, 5.0);
  EXPECT_EQ(max_abs(v.value), 0.0);
  v = integrate_matrix([](double t) { return ComplexMatrix{{0.0, t}, {t, 0.0}}; }, 0.0, 1.0);
  EXPECT_LT(max_abs(v.value - ComplexMatrix{{0.0, 0.5}, {0.5, 0.0}}), 1e-14);
}

TEST(Quadrature, DomainErrorPropagates) {
  EXPECT_THROW(integrate_scalar([](double t) -> double {
                 if (t > 0.5) throw DomainError("boom", t);
                 return t;
               }, 0.0, 1.0),
               DomainError);
}

TEST(Quadrature, CumulativeMatchesAntiderivative) {
  const std::vector<double> pts{0.5, 1.0, 3.0, 7.5, 20.0};
  const auto v = cumulative_integral([](double t) { return std::cos(t); }, 0.0, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(v[i], std::sin(pts[i]), 1e-9);
}

// Invariant: Simpson is exact on cubics.
TEST(QuadratureProperty, ExactOnCubics) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double c0 = rng.uniform(-5, 5), c1 = rng.uniform(-5, 5), c2 = rng.uniform(-5, 5),
                 c3 = rng.uniform(-5, 5);
    const double a = rng.uniform(-3, 3), b = a + rng.uniform(0.1, 6);
    auto prim = [&](double t) {
      return c0 * t + c1 * t * t / 2 + c2 * t * t * t / 3 + c3 * t * t * t * t / 4;
    };
    const auto r = integrate_scalar(
        [&](double t) { return c0 + c1 * t + c2 * t * t + c3 * t * t * t; }, a, b);
    const double exact = prim(b) - prim(a);
    EXPECT_NEAR(r.value, exact, 1e-12 * (1.0 + std::abs(exact)));
  }
}

TEST(Divergence, LinearDiverges) {
  const auto tr = classify_divergence([](double t) { return t; }, 0.0, 100.0, 10.0, 8);
  EXPECT_EQ(tr.classification, Trend::DivergesToPlusInfinity);
  EXPECT_DOUBLE_EQ(tr.value_at_end(), 100.0);
  EXPECT_DOUBLE_EQ(tr.horizon(), 100.0);
}

TEST(Divergence, SaturatingIsBounded) {
  const auto tr = classify_divergence([](double t) { return 1.0 - 1.0 / t; }, 1.0, 200.0, 10.0, 8);
  EXPECT_EQ(tr.classification, Trend::Bounded);
}

TEST(Divergence, LogarithmicFailsDoublingTest) {
  const auto tr =
      classify_divergence([](double t) { return 20.0 * std::log(t); }, 1.0, 201.0, 10.0, 8);
  EXPECT_EQ(tr.classification, Trend::Undetermined);
}

TEST(Divergence, OscillatingGrowthNeedsCoarseCheckpoints) {
  auto f = [](double t) { return t * (2.0 + std::sin(t)); };
  const double two_pi = 2.0 * std::numbers::pi;
  // Fine spacing catches the downswings of sin in the trailing window.
  const auto fine = classify_divergence(f, 0.0, 16 * two_pi + 4.0, 10.0, 4, 256);
  EXPECT_NE(fine.classification, Trend::DivergesToPlusInfinity);
  // Checkpoints on whole periods see f = 2t.
  const auto coarse = classify_divergence(f, 0.0, 16 * two_pi, 10.0, 4, 16);
  EXPECT_EQ(coarse.classification, Trend::DivergesToPlusInfinity);
}

TEST(Divergence, EvaluationFailureIsUndetermined) {
  const auto tr = classify_divergence(
      [](double t) -> double {
        if (t > 50.0) throw DomainError("f", t);
        return t;
      },
      0.0, 100.0, 10.0, 8);
  EXPECT_EQ(tr.classification, Trend::Undetermined);
  ASSERT_TRUE(tr.failed_at.has_value());
  EXPECT_GT(*tr.failed_at, 50.0);
}

TEST(Divergence, ThresholdScalesWithInitialValue) {
  DivergenceConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.threshold_for(0.0), 10.0);
  EXPECT_DOUBLE_EQ(cfg.threshold_for(-4.0), 50.0);
  cfg.theta = 3.0;
  EXPECT_DOUBLE_EQ(cfg.threshold_for(100.0), 3.0);
}

// Invariant: for increasing monomials, certification at T persists at T' > T.
TEST(DivergenceProperty, MonotoneInHorizon) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = rng.uniform(0.3, 3.0);
    const double c = rng.uniform(0.1, 5.0);
    auto f = [&](double t) { return c * std::pow(t, p); };
    double t_end = rng.uniform(5.0, 50.0);
    bool certified = false;
    for (int k = 0; k < 6; ++k, t_end *= 1.7) {
      const auto tr = classify_divergence(f, 0.0, t_end, 10.0, 8);
      const bool now = tr.classification == Trend::DivergesToPlusInfinity;
      if (certified) EXPECT_TRUE(now) << "p=" << p << " c=" << c << " T=" << t_end;
      certified = certified || now;
    }
  }
}

TEST(Ode, ExponentialDecay) {
  const auto sol = integrate_ode([](double, const OdeState& y, OdeState& d) { d[0] = -y[0]; },
                                 0.0, {1.0}, 5.0);
  EXPECT_EQ(sol.status, OdeStatus::Completed);
  EXPECT_DOUBLE_EQ(sol.t.back(), 5.0);
  EXPECT_NEAR(sol.y.back()[0], std::exp(-5.0), 1e-9);
}

TEST(Ode, HarmonicOscillatorPhase) {
  OdeConfig cfg;
  cfg.rtol = 1e-11;
  cfg.atol = 1e-13;
  const auto sol = integrate_ode(
      [](double, const OdeState& y, OdeState& d) {
        d[0] = y[1];
        d[1] = -y[0];
      },
      0.0, {1.0, 0.0}, 20.0, cfg);
  EXPECT_NEAR(sol.y.back()[0], std::cos(20.0), 1e-9);
  EXPECT_NEAR(sol.y.back()[1], -std::sin(20.0), 1e-9);
}

TEST(Ode, HooksStopAndModify) {
  OdeHooks hooks;
  hooks.stop = [](double, const OdeState& y) { return y[0] > 10.0; };
  int resets = 0;
  hooks.post_step = [&](double, OdeState& y) {
    if (y[1] > 2.0) {
      y[1] = 0.0;
      ++resets;
    }
  };
  const auto sol = integrate_ode(
      [](double, const OdeState&, OdeState& d) {
        d[0] = 1.0;
        d[1] = 1.0;
      },
      0.0, {0.0, 0.0}, 100.0, {}, hooks);
  EXPECT_EQ(sol.status, OdeStatus::Stopped);
  EXPECT_GT(sol.y.back()[0], 10.0);
  EXPECT_LT(sol.t.back(), 11.0);
  EXPECT_GE(resets, 4);
  for (const auto& y : sol.y) EXPECT_LE(y[1], 2.0 + 1e-12);
}

TEST(Ode, AcceptHookRejectsSteps) {
  double last = 0.0;
  OdeHooks hooks;
  hooks.accept = [&](double t, const OdeState&) {
    if (t - last > 0.01) return false;
    last = t;
    return true;
  };
  const auto sol = integrate_ode([](double, const OdeState&, OdeState& d) { d[0] = 1.0; }, 0.0,
                                 {0.0}, 3.0, {}, hooks);
  EXPECT_EQ(sol.status, OdeStatus::Completed);
  EXPECT_GT(sol.rejected, 0u);
  for (std::size_t i = 1; i < sol.t.size(); ++i) EXPECT_LE(sol.t[i] - sol.t[i - 1], 0.01 + 1e-15);
  EXPECT_NEAR(sol.y.back()[0], 3.0, 1e-12);
}
