#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hamosc/divergence.hpp"
#include "hamosc/expr.hpp"
#include "hamosc/ode.hpp"
#include "hamosc/quadrature.hpp"
#include "hamosc/verdict.hpp"

namespace hamosc {

using ScalarFn = std::function<double(double)>;

/// y' + a(t) y^2 + b(t) y + c(t) = 0, y(t0) = y0.
struct ScalarRiccatiProblem {
  Expr a;
  Expr b;
  Expr c;
  double y0 = 0.0;
  double t0 = 0.0;
};

struct RiccatiConfig {
  OdeConfig ode{};
  double blowup_bound = 1e8;
  double bracket = 1e-6;
};

struct BlowUpReport {
  enum class Status { ExistsOnWholeInterval, BlowUp };
  Status status = Status::ExistsOnWholeInterval;
  double t_star = 0.0;
  /// Sign of y as it leaves every bound.
  int direction = 0;
  /// Lower end of the bracket around t_star, or t_end.
  double max_existence_right_end = 0.0;
  double bracket_width = 0.0;

  bool blew_up() const { return status == Status::BlowUp; }
};

struct ScalarTrajectory {
  std::vector<double> t;
  std::vector<double> y;
};

struct ScalarRiccatiResult {
  ScalarTrajectory trajectory;
  BlowUpReport blowup;
};

/// Throws NumericalBreakdown when the step size underflows short of the
/// blow-up bound.
ScalarRiccatiResult solve_scalar_riccati(const ScalarRiccatiProblem& p, double t_end,
                                         const RiccatiConfig& cfg = {});
ScalarRiccatiResult solve_scalar_riccati(const ScalarFn& a, const ScalarFn& b,
                                         const ScalarFn& c, double y0, double t0,
                                         double t_end, const RiccatiConfig& cfg = {});

/// phi' = a11 phi + a12 psi, psi' = a21 phi + a22 psi.
struct TwoByTwoSystem {
  ScalarFn a11 = [](double) { return 0.0; };
  ScalarFn a12 = [](double) { return 0.0; };
  ScalarFn a21 = [](double) { return 0.0; };
  ScalarFn a22 = [](double) { return 0.0; };

  double e(double t) const { return a11(t) - a22(t); }
  static TwoByTwoSystem from_exprs(const Expr& a11, const Expr& a12, const Expr& a21,
                                   const Expr& a22);
};

struct CorrespondenceReport {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> phi;
  std::vector<double> psi;
  std::vector<double> phi_direct;
  std::vector<double> psi_direct;
  /// max relative deviation between the reconstruction and direct
  /// integration of the linear system.
  double max_residual = 0.0;
  BlowUpReport blowup;
};

/// Integrates y' + a12 y^2 + E y - a21 = 0 from y0, rebuilds (phi, psi) by
/// phi = phi0 exp(int(a12 y + a11)), psi = y phi, and compares against the
/// linear system integrated directly from (phi0, y0 phi0). Stops before a
/// blow-up of y.
CorrespondenceReport riccati_system_correspondence(const TwoByTwoSystem& sys, double t0,
                                                   double y0, double t_end,
                                                   double phi0 = 1.0,
                                                   const RiccatiConfig& cfg = {});

/// Zeros of phi for the solution with (phi, psi)(t0) = (phi0, psi0).
std::vector<double> scalar_system_zeros(const TwoByTwoSystem& sys, double t0, double t_end,
                                        double phi0 = 1.0, double psi0 = 0.0,
                                        const OdeConfig& cfg = {});

struct Theorem22Config {
  DivergenceConfig divergence{};
  QuadratureConfig quadrature{};
  /// Points sampled for the sign hypothesis on a12.
  int sign_samples = 256;
};

/// Both weighted integrals int a12 exp(-int E) and -int a21 exp(int E)
/// certified divergent, with a12 >= 0 sampled, gives Oscillatory.
CriterionVerdict theorem_2_2_oscillation_check(const TwoByTwoSystem& sys, double t0,
                                               const Theorem22Config& cfg = {},
                                               const std::string& id = "T2.2");

/// Comparison pair: equation (a, b, c) with y0(t1) and
/// equation (a1, b1, c1) started from lambda >= y0(t1).
struct ComparisonInstance {
  ScalarFn a, b, c;
  ScalarFn a1, b1, c1;
  double t1 = 0.0;
  double t2 = 1.0;
  double y0_start = 0.0;
  double lambda = 0.0;
};

struct ComparisonReport {
  bool holds = true;
  /// min over the common grid of y1 - y0.
  double min_gap = 0.0;
  double t_reached = 0.0;
  std::vector<double> violations;
};

/// Throws HypothesisNotSatisfied naming the failing condition.
ComparisonReport verify_comparison_theorem_2_1(const ComparisonInstance& inst,
                                               const RiccatiConfig& cfg = {});

struct Lemma22Instance {
  ScalarFn a;
  ScalarFn e, de;
  ScalarFn e1, de1;
  double t0 = 0.0;
  double t1 = 1.0;
};

struct Lemma22Report {
  bool holds = true;
  double min_gap = 0.0;
  /// End of the range actually compared (y0 may blow up before t1).
  double t_reached = 0.0;
};

/// Solves y' + a y^2 + e' = 0 with y(t0) = -e(t0) for e and e1 and checks
/// y1 > y0. Throws HypothesisNotSatisfied.
Lemma22Report verify_lemma_2_2(const Lemma22Instance& inst, double strict_tol = 0.0,
                               const RiccatiConfig& cfg = {});

}  // namespace hamosc
