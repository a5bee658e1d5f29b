#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamosc/divergence.hpp"
#include "hamosc/dynamics.hpp"
#include "hamosc/functional.hpp"
#include "hamosc/problem.hpp"
#include "hamosc/quadrature.hpp"
#include "hamosc/verdict.hpp"

namespace hamosc {

struct CriterionConfig {
  /// Defaults to the plain trace.
  std::optional<PositiveFunctional> g;
  DivergenceConfig divergence{};
  QuadratureConfig quadrature{0.25, 1e-9, 1e-7, 8};
  /// Points of [t0, t0 + horizon] at which hypotheses are sampled.
  int hypothesis_samples = 64;
  /// Lambda(t) for T3.6 and C3.1; chosen automatically when unset.
  std::optional<MatrixFunction> lambda;
  Expr alpha = Expr::number(1.0);
  Expr beta = Expr::number(0.0);
  Expr gamma = Expr::number(0.0);
  /// Use nu_0(B) instead of lambda_1(B) / n where the remarks allow it.
  bool use_nu0 = false;
  /// Step of the central differences used for F', H'.
  double fd_step = 1e-5;

  PositiveFunctional functional(std::size_t n) const {
    return g ? *g : PositiveFunctional::trace(n);
  }
};

CriterionVerdict check_T1_1(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
CriterionVerdict check_T3_1(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
CriterionVerdict check_T3_2(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
CriterionVerdict check_T3_3(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
CriterionVerdict check_T3_4(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
CriterionVerdict check_T3_5(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
CriterionVerdict check_T3_6(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
CriterionVerdict check_C3_1(const HamiltonianProblem& p, const CriterionConfig& cfg = {});
/// Reported as C2.2 when Sep(alpha A + beta A* + gamma I) vanishes on the
/// sample grid, as T3.7 otherwise.
CriterionVerdict check_T3_7_and_C2_2(const HamiltonianProblem& p,
                                     const CriterionConfig& cfg = {});

struct RunAllReport {
  std::string problem;
  std::vector<CriterionVerdict> verdicts;
  std::optional<SimulationSummary> simulation;
  std::string simulation_error;
  /// Criteria that certify oscillation while the simulation does not see it.
  std::vector<std::string> disagreements;

  const CriterionVerdict* find(const std::string& id) const;
};

/// Every checker in a fixed order, plus a simulation from Phi0 = I, Y0 = 0
/// over the same horizon unless `simulate` is false.
RunAllReport run_all(const HamiltonianProblem& p, const CriterionConfig& cfg = {},
                     bool simulate = true);

}  // namespace hamosc
