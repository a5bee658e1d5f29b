#include "hamosc/scalar_riccati.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hamosc/error.hpp"

namespace hamosc {

namespace {

ScalarFn expr_fn(Expr e) {
  return [e = std::move(e)](double t) { return eval_expr(e, t); };
}

}  // namespace

ScalarRiccatiResult solve_scalar_riccati(const ScalarRiccatiProblem& p, double t_end,
                                         const RiccatiConfig& cfg) {
  return solve_scalar_riccati(expr_fn(p.a), expr_fn(p.b), expr_fn(p.c), p.y0, p.t0, t_end,
                              cfg);
}

ScalarRiccatiResult solve_scalar_riccati(const ScalarFn& a, const ScalarFn& b,
                                         const ScalarFn& c, double y0, double t0,
                                         double t_end, const RiccatiConfig& cfg) {
  const OdeRhs rhs = [&](double t, const OdeState& y, OdeState& dy) {
    dy[0] = -(a(t) * y[0] * y[0] + b(t) * y[0] + c(t));
  };
  OdeHooks hooks;
  hooks.stop = [&](double, const OdeState& y) { return std::abs(y[0]) > cfg.blowup_bound; };
  OdeConfig ode = cfg.ode;
  ode.h_min = std::min(ode.h_min, 1e-15);
  const OdeSolution sol = integrate_ode(rhs, t0, {y0}, t_end, ode, hooks);

  ScalarRiccatiResult out;
  out.trajectory.t = sol.t;
  for (const auto& s : sol.y) out.trajectory.y.push_back(s[0]);
  BlowUpReport& rep = out.blowup;
  if (sol.status == OdeStatus::Completed) {
    rep.status = BlowUpReport::Status::ExistsOnWholeInterval;
    rep.max_existence_right_end = t_end;
    return out;
  }
  if (sol.status == OdeStatus::StepUnderflow) {
    throw NumericalBreakdown(
        fmt::format("step size underflow with |y| = {:.3g}", std::abs(out.trajectory.y.back())),
        sol.t.back());
  }
  // 1/y is close to linear near a pole; extrapolate it to zero.
  const std::size_t k = sol.t.size();
  const double t2 = sol.t[k - 1];
  const double u2 = 1.0 / out.trajectory.y[k - 1];
  double t_star = t2;
  if (k >= 2) {
    const double t1 = sol.t[k - 2];
    const double u1 = 1.0 / out.trajectory.y[k - 2];
    if (u2 != u1) t_star = t2 - u2 * (t2 - t1) / (u2 - u1);
  }
  t_star = std::max(t_star, t2);
  rep.status = BlowUpReport::Status::BlowUp;
  rep.t_star = t_star;
  rep.direction = out.trajectory.y.back() > 0 ? 1 : -1;
  rep.max_existence_right_end = t2;
  rep.bracket_width = t_star - t2;
  return out;
}

TwoByTwoSystem TwoByTwoSystem::from_exprs(const Expr& a11, const Expr& a12, const Expr& a21,
                                          const Expr& a22) {
  return {expr_fn(a11), expr_fn(a12), expr_fn(a21), expr_fn(a22)};
}

CorrespondenceReport riccati_system_correspondence(const TwoByTwoSystem& sys, double t0,
                                                   double y0, double t_end, double phi0,
                                                   const RiccatiConfig& cfg) {
  // State: y, L = int (a12 y + a11), phi, psi.
  const OdeRhs rhs = [&](double t, const OdeState& s, OdeState& d) {
    const double a11 = sys.a11(t), a12 = sys.a12(t), a21 = sys.a21(t), a22 = sys.a22(t);
    d[0] = -(a12 * s[0] * s[0] + (a11 - a22) * s[0] - a21);
    d[1] = a12 * s[0] + a11;
    d[2] = a11 * s[2] + a12 * s[3];
    d[3] = a21 * s[2] + a22 * s[3];
  };
  // Stop well before the pole so the comparison stays meaningful.
  const double stop_bound = std::min(cfg.blowup_bound, 1e4);
  OdeHooks hooks;
  hooks.stop = [&](double, const OdeState& s) { return std::abs(s[0]) > stop_bound; };
  const OdeSolution sol =
      integrate_ode(rhs, t0, {y0, 0.0, phi0, y0 * phi0}, t_end, cfg.ode, hooks);

  CorrespondenceReport rep;
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const OdeState& s = sol.y[i];
    const double phi = phi0 * std::exp(s[1]);
    const double psi = s[0] * phi;
    rep.t.push_back(sol.t[i]);
    rep.y.push_back(s[0]);
    rep.phi.push_back(phi);
    rep.psi.push_back(psi);
    rep.phi_direct.push_back(s[2]);
    rep.psi_direct.push_back(s[3]);
    const double dev = std::max(std::abs(phi - s[2]) / (1.0 + std::abs(s[2])),
                                std::abs(psi - s[3]) / (1.0 + std::abs(s[3])));
    rep.max_residual = std::max(rep.max_residual, dev);
  }
  if (sol.status == OdeStatus::Stopped) {
    rep.blowup.status = BlowUpReport::Status::BlowUp;
    rep.blowup.max_existence_right_end = sol.t.back();
    rep.blowup.direction = rep.y.back() > 0 ? 1 : -1;
  } else {
    rep.blowup.max_existence_right_end = sol.t.back();
  }
  return rep;
}

std::vector<double> scalar_system_zeros(const TwoByTwoSystem& sys, double t0, double t_end,
                                        double phi0, double psi0, const OdeConfig& cfg) {
  const OdeRhs rhs = [&](double t, const OdeState& s, OdeState& d) {
    d[0] = sys.a11(t) * s[0] + sys.a12(t) * s[1];
    d[1] = sys.a21(t) * s[0] + sys.a22(t) * s[1];
  };
  const OdeSolution sol = integrate_ode(rhs, t0, {phi0, psi0}, t_end, cfg);
  std::vector<double> zeros;
  for (std::size_t i = 1; i < sol.t.size(); ++i) {
    const double f0 = sol.y[i - 1][0];
    const double f1 = sol.y[i][0];
    if (f1 == 0.0) {
      zeros.push_back(sol.t[i]);
      continue;
    }
    if (f0 == 0.0 || (f0 > 0.0) == (f1 > 0.0)) continue;
    // Bisection on a re-integrated local segment.
    double lo = sol.t[i - 1];
    double hi = sol.t[i];
    const OdeState start = sol.y[i - 1];
    const double sign_lo = f0 > 0.0 ? 1.0 : -1.0;
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      const OdeSolution part = integrate_ode(rhs, sol.t[i - 1], start, mid, cfg);
      const double fm = part.y.back()[0];
      if (fm * sign_lo > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    zeros.push_back(0.5 * (lo + hi));
  }
  return zeros;
}

namespace {

bool identically_zero(const ScalarFn& f, double t0, double t1, int samples) {
  for (int k = 0; k <= samples; ++k) {
    if (f(t0 + (t1 - t0) * k / samples) != 0.0) return false;
  }
  return true;
}

DivergenceTrace failed_trace(const std::vector<double>& pts, double theta, int window,
                             const DomainError& e) {
  DivergenceTrace tr;
  tr.checkpoints = pts;
  tr.threshold = theta;
  tr.window = window;
  tr.failed_at = e.t();
  tr.note = e.what();
  return tr;
}

}  // namespace

CriterionVerdict theorem_2_2_oscillation_check(const TwoByTwoSystem& sys, double t0,
                                               const Theorem22Config& cfg,
                                               const std::string& id) {
  CriterionVerdict v;
  v.criterion_id = id;
  v.notes.push_back("weight read as a single a12 factor; inner integrals start at t0");
  const DivergenceConfig& dc = cfg.divergence;
  const double t_end = t0 + dc.horizon;

  HypothesisResult sign{"a12(t) >= 0", true, "", std::nullopt};
  try {
    for (int k = 0; k <= cfg.sign_samples; ++k) {
      const double t = t0 + dc.horizon * k / cfg.sign_samples;
      const double a12 = sys.a12(t);
      if (a12 < 0.0) {
        sign.passed = false;
        sign.witness_t = t;
        sign.evidence = fmt::format("a12({:.6g}) = {:.6g}", t, a12);
        break;
      }
    }
    if (sign.passed) sign.evidence = fmt::format("sampled at {} points", cfg.sign_samples + 1);
  } catch (const DomainError& e) {
    sign.passed = false;
    sign.witness_t = e.t();
    sign.evidence = e.what();
  }
  v.hypotheses.push_back(sign);
  if (!sign.passed) {
    v.status = VerdictStatus::NotApplicable;
    return v;
  }

  const std::vector<double> pts = uniform_checkpoints(t0, t_end, dc.checkpoints);
  const double theta = dc.threshold_for(0.0);
  const ScalarFn e_fn = [&](double t) { return sys.e(t); };
  const bool e_zero = identically_zero(e_fn, t0, t_end, cfg.sign_samples);

  auto weighted = [&](const ScalarFn& f, double sign_e) -> DivergenceTrace {
    try {
      std::vector<double> values;
      if (e_zero) {
        values = cumulative_integral(f, t0, pts, cfg.quadrature);
      } else {
        double acc = 0.0;
        double l_prev = 0.0;  // int_{t0}^{prev} E
        double prev = t0;
        QuadratureConfig inner = cfg.quadrature;
        inner.max_depth = std::min(inner.max_depth, 8);
        for (double t : pts) {
          const double seg_start = prev;
          const double l_start = l_prev;
          const ScalarFn g = [&](double s) {
            const double l = l_start + integrate_scalar(e_fn, seg_start, s, inner).value;
            return f(s) * std::exp(sign_e * l);
          };
          acc += integrate_scalar(g, prev, t, cfg.quadrature).value;
          l_prev += integrate_scalar(e_fn, prev, t, inner).value;
          prev = t;
          values.push_back(acc);
        }
      }
      return classify_values(pts, std::move(values), 0.0, theta, dc.window);
    } catch (const DomainError& e) {
      return failed_trace(pts, theta, dc.window, e);
    }
  };

  v.traces.push_back({"int a12 exp(-int E)", weighted(sys.a12, -1.0)});
  v.traces.push_back(
      {"-int a21 exp(int E)", weighted([&](double t) { return -sys.a21(t); }, 1.0)});
  v.status = settle(v);
  return v;
}

ComparisonReport verify_comparison_theorem_2_1(const ComparisonInstance& in,
                                               const RiccatiConfig& cfg) {
  if (in.lambda < in.y0_start) {
    throw HypothesisNotSatisfied("lambda must be at least y0(t1)");
  }
  // State: y0, eta1 (linear comparison solution), P, K, y1.
  // eta0 is y0 itself; eta1 solves eta' + b1 eta + c1 = 0 with eta1(t1) = lambda.
  const OdeRhs rhs = [&](double t, const OdeState& s, OdeState& d) {
    const double y0 = s[0];
    d[0] = -(in.a(t) * y0 * y0 + in.b(t) * y0 + in.c(t));
    d[1] = -(in.b1(t) * s[1] + in.c1(t));
    d[2] = in.a1(t) * (y0 + s[1]) + in.b1(t);
    d[3] = std::exp(s[2]) * ((in.a(t) - in.a1(t)) * y0 * y0 + (in.b(t) - in.b1(t)) * y0 +
                             in.c(t) - in.c1(t));
    d[4] = -(in.a1(t) * s[4] * s[4] + in.b1(t) * s[4] + in.c1(t));
  };
  OdeHooks hooks;
  hooks.stop = [&](double, const OdeState& s) {
    return std::abs(s[0]) > cfg.blowup_bound || std::abs(s[4]) > cfg.blowup_bound ||
           std::abs(s[2]) > 600.0;
  };
  const OdeSolution sol =
      integrate_ode(rhs, in.t1, {in.y0_start, in.lambda, 0.0, 0.0, in.lambda}, in.t2, cfg.ode,
                    hooks);
  ComparisonReport rep;
  rep.min_gap = in.lambda - in.y0_start;
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const double t = sol.t[i];
    const OdeState& s = sol.y[i];
    if (in.a1(t) < 0.0) {
      throw HypothesisNotSatisfied(fmt::format("a1({:.6g}) = {:.6g} < 0", t, in.a1(t)));
    }
    if (in.lambda - in.y0_start + s[3] < -1e-9) {
      throw HypothesisNotSatisfied(
          fmt::format("comparison integral negative at t = {:.6g}", t));
    }
    const double gap = s[4] - s[0];
    rep.min_gap = std::min(rep.min_gap, gap);
    if (gap < -1e-6) {
      rep.holds = false;
      rep.violations.push_back(t);
    }
  }
  rep.t_reached = sol.t.back();
  return rep;
}

Lemma22Report verify_lemma_2_2(const Lemma22Instance& in, double strict_tol,
                               const RiccatiConfig& cfg) {
  for (int k = 0; k <= 256; ++k) {
    const double t = in.t0 + (in.t1 - in.t0) * k / 256.0;
    if (in.a(t) < 0.0) {
      throw HypothesisNotSatisfied(fmt::format("a({:.6g}) < 0", t));
    }
    if (!(in.e(t) > in.e1(t) && in.e1(t) > 0.0)) {
      throw HypothesisNotSatisfied(fmt::format("e > e1 > 0 fails at t = {:.6g}", t));
    }
  }
  const ScalarFn zero = [](double) { return 0.0; };
  const ScalarRiccatiResult r0 =
      solve_scalar_riccati(in.a, zero, in.de, -in.e(in.t0), in.t0, in.t1, cfg);
  const double t_reached = r0.blowup.blew_up() ? r0.blowup.max_existence_right_end : in.t1;

  Lemma22Report rep;
  rep.t_reached = t_reached;
  rep.min_gap = in.e(in.t0) - in.e1(in.t0);
  // Joint integration keeps both solutions on one grid.
  const OdeRhs joint = [&](double t, const OdeState& y, OdeState& dy) {
    const double a = in.a(t);
    dy[0] = -(a * y[0] * y[0] + in.de(t));
    dy[1] = -(a * y[1] * y[1] + in.de1(t));
  };
  OdeHooks hooks;
  hooks.stop = [&](double, const OdeState& y) {
    return std::abs(y[0]) > cfg.blowup_bound || std::abs(y[1]) > cfg.blowup_bound;
  };
  const OdeSolution sol = integrate_ode(joint, in.t0, {-in.e(in.t0), -in.e1(in.t0)},
                                        t_reached, cfg.ode, hooks);
  for (const OdeState& s : sol.y) {
    const double gap = s[1] - s[0];
    rep.min_gap = std::min(rep.min_gap, gap);
    if (!(gap > -strict_tol)) rep.holds = false;
  }
  return rep;
}

}  // namespace hamosc
