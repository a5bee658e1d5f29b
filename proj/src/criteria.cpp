#include "hamosc/criteria.hpp"

#include <cmath>
#include <functional>
#include <memory>

#include <fmt/format.h>

#include "hamosc/error.hpp"
#include "hamosc/matrix_equations.hpp"
#include "hamosc/scalar_riccati.hpp"

namespace hamosc {

namespace {

struct Coeffs {
  ComplexMatrix a, b, c;
};

Coeffs at(const HamiltonianProblem& p, double t) { return {p.a(t), p.b(t), p.c(t)}; }

std::vector<double> sample_times(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  const int k = std::max(2, cfg.hypothesis_samples);
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(p.t0 + cfg.divergence.horizon * i / (k - 1));
  return out;
}

using Violation = std::function<std::optional<std::string>(double)>;

/// Runs `check` at every sample; the first violation becomes the witness.
HypothesisResult sampled(const std::string& name, const std::vector<double>& pts,
                         const Violation& check) {
  HypothesisResult h{name, true, fmt::format("sampled at {} points", pts.size()), {}};
  for (double t : pts) {
    std::optional<std::string> bad;
    try {
      bad = check(t);
    } catch (const DomainError& e) {
      bad = e.what();
      t = e.t();
    } catch (const Error& e) {
      bad = e.what();
    }
    if (bad) {
      h.passed = false;
      h.evidence = *bad;
      h.witness_t = t;
      return h;
    }
  }
  return h;
}

HypothesisResult real_coefficients(const HamiltonianProblem& p,
                                   const std::vector<double>& pts) {
  return sampled("A, B, C real", pts, [&](double t) -> std::optional<std::string> {
    const Coeffs k = at(p, t);
    for (const auto& [m, name] : {std::pair{&k.a, "A"}, {&k.b, "B"}, {&k.c, "C"}}) {
      if (!is_real(*m, 1e-14 * (1.0 + max_abs(*m)))) {
        return fmt::format("{} has an imaginary part at t = {:.6g}", name, t);
      }
    }
    return std::nullopt;
  });
}

HypothesisResult b_positive_definite(const HamiltonianProblem& p,
                                     const std::vector<double>& pts) {
  return sampled("B(t) > 0", pts, [&](double t) -> std::optional<std::string> {
    const EigenSpectrum s = hermitian_eigen(p.b(t));
    if (is_singular_psd(s) || s.values.front() <= 0.0) {
      return fmt::format("lambda_1(B({:.6g})) = {:.6g}", t, s.values.front());
    }
    return std::nullopt;
  });
}

HypothesisResult b_psd(const HamiltonianProblem& p, const std::vector<double>& pts) {
  return sampled("B(t) >= 0", pts, [&](double t) -> std::optional<std::string> {
    const EigenSpectrum s = hermitian_eigen(p.b(t));
    const double scale = std::max(1.0, std::abs(s.values.back()));
    if (s.values.front() < -default_tolerances().psd * scale) {
      return fmt::format("lambda_1(B({:.6g})) = {:.6g}", t, s.values.front());
    }
    return std::nullopt;
  });
}

/// Value `point(t) + int_{t0}^t integrand` at the checkpoints, classified.
DivergenceTrace assemble(const std::function<double(double)>& point,
                         const std::function<double(double)>& integrand, double t0,
                         const CriterionConfig& cfg) {
  const DivergenceConfig& dc = cfg.divergence;
  const std::vector<double> pts = uniform_checkpoints(t0, t0 + dc.horizon, dc.checkpoints);
  double initial = 0.0;
  try {
    initial = point ? point(t0) : 0.0;
    std::vector<double> values = integrand
                                     ? cumulative_integral(integrand, t0, pts, cfg.quadrature)
                                     : std::vector<double>(pts.size(), 0.0);
    if (point) {
      for (std::size_t i = 0; i < pts.size(); ++i) values[i] += point(pts[i]);
    }
    return classify_values(pts, std::move(values), initial, dc.threshold_for(initial),
                           dc.window);
  } catch (const Error& e) {
    DivergenceTrace tr;
    tr.checkpoints = pts;
    tr.threshold = dc.threshold_for(initial);
    tr.window = dc.window;
    if (const auto* de = dynamic_cast<const DomainError*>(&e)) tr.failed_at = de->t();
    tr.note = e.what();
    return tr;
  }
}

/// For time-independent data a scalar function is evaluated once.
ScalarFn freeze_if(bool constant, ScalarFn f, double t0) {
  if (!constant) return f;
  auto cache = std::make_shared<std::optional<double>>();
  return [f = std::move(f), cache, t0](double) {
    if (!*cache) *cache = f(t0);
    return **cache;
  };
}

using MatrixFn = std::function<ComplexMatrix(double)>;

/// Central difference, or zero for time-independent data.
ComplexMatrix derivative(const MatrixFn& f, double t, double h, bool constant) {
  if (constant) return ComplexMatrix(f(t).rows());
  return (f(t + h) - f(t - h)) / Complex(2.0 * h);
}

double lambda1_over_n(const ComplexMatrix& b) {
  return std::max(0.0, lambda_min(b)) / static_cast<double>(b.rows());
}

Theorem22Config t22_config(const CriterionConfig& cfg) {
  Theorem22Config c;
  c.divergence = cfg.divergence;
  c.quadrature = cfg.quadrature;
  return c;
}

/// Prepends this criterion's hypotheses to a delegated 2x2 system verdict.
CriterionVerdict merge_delegated(CriterionVerdict own, CriterionVerdict delegated) {
  for (auto& h : delegated.hypotheses) own.hypotheses.push_back(std::move(h));
  own.traces = std::move(delegated.traces);
  for (auto& n : delegated.notes) own.notes.push_back(std::move(n));
  own.status = settle(own);
  return own;
}

bool finish_if_failed(CriterionVerdict& v) {
  if (v.failed_hypothesis()) {
    v.status = VerdictStatus::NotApplicable;
    return true;
  }
  return false;
}

std::string rank_evidence(const SolveReport& r, double t, const char* lhs, const char* rhs) {
  return fmt::format("rank {} = {}, rank [{} | {}] = {} at t = {:.6g}", lhs,
                     r.rank_coefficient, lhs, rhs, r.rank_augmented, t);
}

}  // namespace

CriterionVerdict check_T1_1(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T1.1";
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(real_coefficients(p, pts));
  v.hypotheses.push_back(b_positive_definite(p, pts));
  if (finish_if_failed(v)) return v;
  const PositiveFunctional g = cfg.functional(p.n);
  const bool k = p.is_constant();

  const ScalarFn inv_g = freeze_if(k, [&](double t) {
    return 1.0 / g(hermitian_inverse(p.b(t))).real();
  }, p.t0);
  const ScalarFn point = freeze_if(k, [&](double t) {
    const Coeffs c = at(p, t);
    return -g(hermitian_inverse(c.b) * c.a).real();
  }, p.t0);
  const ScalarFn integrand = freeze_if(k, [&](double t) {
    const Coeffs c = at(p, t);
    return -g(c.c + c.a.adjoint() * hermitian_inverse(c.b) * c.a).real();
  }, p.t0);
  v.traces.push_back({"int 1/g[B^-1]", assemble(nullptr, inv_g, p.t0, cfg)});
  v.traces.push_back(
      {"g[-int(C + A* B^-1 A) - B^-1 A]", assemble(point, integrand, p.t0, cfg)});
  v.status = settle(v);
  return v;
}

namespace {

HypothesisResult eq_3_1_solvable(const HamiltonianProblem& p, const std::vector<double>& pts) {
  return sampled("B X = A solvable", pts, [&](double t) -> std::optional<std::string> {
    const SolveReport r = solve_bx_eq_a(p.b(t), p.a(t));
    if (!r.solvable()) return rank_evidence(r, t, "B", "A");
    return std::nullopt;
  });
}

ComplexMatrix f_3_1(const HamiltonianProblem& p, double t) {
  const SolveReport r = solve_bx_eq_a(p.b(t), p.a(t));
  if (!r.solvable()) throw HypothesisNotSatisfied(fmt::format("B X = A unsolvable at t={}", t));
  return *r.solution;
}

}  // namespace

CriterionVerdict check_T3_1(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T3.1";
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(real_coefficients(p, pts));
  v.hypotheses.push_back(b_psd(p, pts));
  v.hypotheses.push_back(eq_3_1_solvable(p, pts));
  if (finish_if_failed(v)) return v;
  const PositiveFunctional g = cfg.functional(p.n);
  const bool k = p.is_constant();
  v.auxiliary.emplace_back("F(t0)", f_3_1(p, p.t0));
  v.notes.push_back("F is the minimum-norm solution of B X = A");

  const ScalarFn nu = freeze_if(k, [&](double t) { return nu_g(g, p.b(t)); }, p.t0);
  const ScalarFn point = freeze_if(k, [&](double t) { return -g(f_3_1(p, t)).real(); }, p.t0);
  const ScalarFn integrand = freeze_if(k, [&](double t) {
    const Coeffs c = at(p, t);
    return -g(c.c + c.a.adjoint() * f_3_1(p, t)).real();
  }, p.t0);
  v.traces.push_back({"int nu_g(B)", assemble(nullptr, nu, p.t0, cfg)});
  v.traces.push_back({"g(J_F)", assemble(point, integrand, p.t0, cfg)});
  v.status = settle(v);
  return v;
}

CriterionVerdict check_T3_2(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T3.2";
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(real_coefficients(p, pts));
  v.hypotheses.push_back(b_psd(p, pts));
  v.hypotheses.push_back(eq_3_1_solvable(p, pts));
  if (finish_if_failed(v)) return v;
  const PositiveFunctional g = cfg.functional(p.n);
  const bool k = p.is_constant();
  v.auxiliary.emplace_back("F(t0)", f_3_1(p, p.t0));
  v.notes.push_back(k ? "F' = 0 for constant coefficients"
                      : "F' by central differences of the minimum-norm F");
  v.notes.push_back("a21 = +g[C + A* F + F'], the sign that keeps the scalar Riccati inequality");

  const MatrixFn f = [&](double t) { return f_3_1(p, t); };
  TwoByTwoSystem sys;
  sys.a12 = freeze_if(k, [&](double t) { return nu_g(g, p.b(t)); }, p.t0);
  sys.a21 = freeze_if(k, [&, f](double t) {
    const Coeffs c = at(p, t);
    const ComplexMatrix df = derivative(f, t, cfg.fd_step, k);
    return g(c.c + c.a.adjoint() * f(t) + df).real();
  }, p.t0);
  return merge_delegated(std::move(v), theorem_2_2_oscillation_check(sys, p.t0,
                                                                     t22_config(cfg), "T3.2"));
}

CriterionVerdict check_T3_3(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T3.3";
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(b_positive_definite(p, pts));
  if (finish_if_failed(v)) return v;
  const bool k = p.is_constant();
  const double n = static_cast<double>(p.n);

  const ScalarFn weight = freeze_if(k, [&](double t) {
    const ComplexMatrix b = p.b(t);
    return cfg.use_nu0 ? nu_0(b) : lambda_min(b);
  }, p.t0);
  const ScalarFn point = freeze_if(k, [&](double t) {
    const Coeffs c = at(p, t);
    return (hermitian_part(c.a) * hermitian_inverse(c.b)).trace().real();
  }, p.t0);
  const ScalarFn integrand = freeze_if(k, [&](double t) {
    const Coeffs c = at(p, t);
    const ComplexMatrix binv = hermitian_inverse(c.b);
    const double im_tr = c.a.trace().imag();
    return -(c.a * binv * c.a.adjoint() + c.c).trace().real() +
           lambda_min(c.b) / n * im_tr * im_tr;
  }, p.t0);
  v.traces.push_back({cfg.use_nu0 ? "int nu_0(B)" : "int lambda_1(B)",
                      assemble(nullptr, weight, p.t0, cfg)});
  v.traces.push_back({"J", assemble(point, integrand, p.t0, cfg)});
  if (cfg.use_nu0) v.notes.push_back("lambda_1(B) replaced by nu_0(B)");
  v.status = settle(v);
  return v;
}

CriterionVerdict check_T3_4(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T3.4";
  v.notes.push_back("the undefined G in condition VI is read as C");
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(b_positive_definite(p, pts));
  if (finish_if_failed(v)) return v;
  const bool k = p.is_constant();

  const ScalarFn inv_tr = freeze_if(k, [&](double t) {
    return 1.0 / hermitian_inverse(p.b(t)).trace().real();
  }, p.t0);
  const ScalarFn point = freeze_if(k, [&](double t) {
    const Coeffs c = at(p, t);
    const ComplexMatrix s = c.a + c.a.adjoint();
    return -2.0 * (s * hermitian_inverse(c.b)).trace().real();
  }, p.t0);
  const ScalarFn integrand = freeze_if(k, [&](double t) {
    const Coeffs c = at(p, t);
    const ComplexMatrix s = c.a + c.a.adjoint();
    return -(s * hermitian_inverse(c.b) * s + Complex(4.0) * c.c).trace().real();
  }, p.t0);
  v.traces.push_back({"int 1/tr(B^-1)", assemble(nullptr, inv_tr, p.t0, cfg)});
  v.traces.push_back({"-tr[2(A+A*)B^-1 + int((A+A*)B^-1(A+A*) + 4C)]",
                      assemble(point, integrand, p.t0, cfg)});
  v.status = settle(v);
  return v;
}

CriterionVerdict check_T3_5(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T3.5";
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(b_psd(p, pts));
  v.hypotheses.push_back(sampled(
      "sqrt(B) X G = G solvable", pts, [&](double t) -> std::optional<std::string> {
        const SqrtEquationReport r = solve_sqrt_b_equation(p.b, p.a, t);
        if (!r.solvable()) return rank_evidence(r, t, "sqrt(B)", "G");
        return std::nullopt;
      }));
  if (finish_if_failed(v)) return v;
  const bool k = p.is_constant();
  const double n = static_cast<double>(p.n);

  auto a_f = [&](double t) {
    const SqrtEquationReport r = solve_sqrt_b_equation(p.b, p.a, t);
    if (!r.solvable()) throw HypothesisNotSatisfied("sqrt(B) X G = G unsolvable");
    return ComplexMatrix(*r.solution * r.g);
  };
  {
    const SqrtEquationReport r0 = solve_sqrt_b_equation(p.b, p.a, p.t0);
    v.auxiliary.emplace_back("F(t0)", *r0.solution);
    v.auxiliary.emplace_back("A_F(t0)", *r0.solution * r0.g);
    v.notes.push_back(r0.method);
  }
  const ScalarFn point = freeze_if(k, [&](double t) { return -a_f(t).trace().real(); }, p.t0);
  const ScalarFn integrand = freeze_if(k, [&](double t) {
    const ComplexMatrix af = a_f(t);
    const ComplexMatrix b = p.b(t);
    const double im_tr = af.trace().imag();
    return -(af * af.adjoint() + b * p.c(t)).trace().real() + im_tr * im_tr / n;
  }, p.t0);
  v.traces.push_back({"J_2", assemble(point, integrand, p.t0, cfg)});
  v.status = settle(v);
  return v;
}

namespace {

bool in_omega_n(const ComplexMatrix& m) { return omega_n_check(m).passes; }

enum class LambdaPolicy { User, SkewCompatible, Zero, ScalarMu };

const char* policy_note(LambdaPolicy p) {
  switch (p) {
    case LambdaPolicy::User: return "Lambda supplied by the user";
    case LambdaPolicy::SkewCompatible: return "Lambda = -(A + A*)/2, so F = 0";
    case LambdaPolicy::Zero: return "Lambda = 0";
    case LambdaPolicy::ScalarMu: return "Lambda = mu(t) I with mu from the kernel of B";
  }
  return "";
}

struct LambdaSolution {
  ComplexMatrix lambda;
  ComplexMatrix f;
};

LambdaSolution solve_3_24(const HamiltonianProblem& p, const CriterionConfig& cfg,
                          LambdaPolicy policy, double t) {
  const Coeffs c = at(p, t);
  const ComplexMatrix s = c.a + c.a.adjoint();
  const std::size_t n = p.n;
  switch (policy) {
    case LambdaPolicy::SkewCompatible:
      return {Complex(-0.5) * s, ComplexMatrix(n)};
    case LambdaPolicy::ScalarMu: {
      const MuSolution mu = sep_case_mu(c.b, s);
      if (!mu.report.solvable()) throw HypothesisNotSatisfied("Lambda equation unsolvable with Lambda = mu I");
      return {Complex(mu.mu) * ComplexMatrix::identity(n), *mu.report.solution};
    }
    case LambdaPolicy::User:
    case LambdaPolicy::Zero: {
      const ComplexMatrix lambda =
          policy == LambdaPolicy::User ? (*cfg.lambda)(t) : ComplexMatrix(n);
      const SolveReport r = solve_lyapunov(c.b, lambda + lambda.adjoint() + s);
      if (!r.solvable() || r.status == SolveStatus::NoHermitianSolution) {
        throw HypothesisNotSatisfied(
            fmt::format("B X + X B = Lambda + Lambda* + A + A* has no Hermitian solution "
                        "at t = {:.6g}", t));
      }
      return {lambda, *r.solution};
    }
  }
  return {};
}

std::optional<LambdaPolicy> choose_policy(const HamiltonianProblem& p,
                                          const CriterionConfig& cfg) {
  if (cfg.lambda) return LambdaPolicy::User;
  for (LambdaPolicy pol :
       {LambdaPolicy::SkewCompatible, LambdaPolicy::Zero, LambdaPolicy::ScalarMu}) {
    try {
      const LambdaSolution s = solve_3_24(p, cfg, pol, p.t0);
      if (in_omega_n(s.lambda)) return pol;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

}  // namespace

CriterionVerdict check_T3_6(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T3.6";
  v.notes.push_back(
      "scalar system phi' = tr(Lambda + Lambda*)/n phi + a12 psi, psi' = -tr(D_F) phi");
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(b_psd(p, pts));
  if (finish_if_failed(v)) return v;
  const std::optional<LambdaPolicy> policy = choose_policy(p, cfg);
  if (!policy) {
    v.hypotheses.push_back({"Lambda in Omega_n with the Lambda equation solvable", false,
                            "no candidate Lambda works at t0", p.t0});
    v.status = VerdictStatus::NotApplicable;
    return v;
  }
  v.notes.push_back(policy_note(*policy));
  v.hypotheses.push_back(sampled(
      "Lambda in Omega_n with a Hermitian solution of the Lambda equation", pts,
      [&](double t) -> std::optional<std::string> {
        const LambdaSolution s = solve_3_24(p, cfg, *policy, t);
        const OmegaNCheck om = omega_n_check(s.lambda);
        if (!om.passes) {
          return fmt::format("eigenvalue real parts of Lambda spread by {:.3g}", om.spread);
        }
        return std::nullopt;
      }));
  if (finish_if_failed(v)) return v;
  const LambdaSolution s0 = solve_3_24(p, cfg, *policy, p.t0);
  v.auxiliary.emplace_back("Lambda(t0)", s0.lambda);
  v.auxiliary.emplace_back("F(t0)", s0.f);

  const bool k = p.is_constant() && (!cfg.lambda || cfg.lambda->is_constant());
  const double n = static_cast<double>(p.n);
  const MatrixFn f = [&, pol = *policy](double t) { return solve_3_24(p, cfg, pol, t).f; };
  TwoByTwoSystem sys;
  sys.a11 = freeze_if(k, [&, pol = *policy](double t) {
    const ComplexMatrix l = solve_3_24(p, cfg, pol, t).lambda;
    return (l + l.adjoint()).trace().real() / n;
  }, p.t0);
  sys.a12 = freeze_if(k, [&](double t) {
    const ComplexMatrix b = p.b(t);
    return cfg.use_nu0 ? nu_0(b) : lambda1_over_n(b);
  }, p.t0);
  sys.a21 = freeze_if(k, [&, f](double t) {
    const Coeffs c = at(p, t);
    const ComplexMatrix ft = f(t);
    const ComplexMatrix d = -derivative(f, t, cfg.fd_step, k) + ft * c.b * ft - ft * c.a -
                            c.a.adjoint() * ft - c.c;
    return -d.trace().real();
  }, p.t0);
  return merge_delegated(std::move(v), theorem_2_2_oscillation_check(sys, p.t0,
                                                                     t22_config(cfg), "T3.6"));
}

CriterionVerdict check_C3_1(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "C3.1";
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(b_psd(p, pts));
  const MatrixFn lambda = [&](double t) -> ComplexMatrix {
    if (cfg.lambda) return (*cfg.lambda)(t);
    const ComplexMatrix a = p.a(t);
    return Complex(-0.5) * (a + a.adjoint());
  };
  v.notes.push_back(cfg.lambda ? "Lambda supplied by the user" : "Lambda = -(A + A*)/2");
  v.hypotheses.push_back(
      sampled("Lambda + A skew", pts, [&](double t) -> std::optional<std::string> {
        const ComplexMatrix m = lambda(t) + p.a(t);
        const ComplexMatrix h = m + m.adjoint();
        if (max_abs(h) > 1e-10 * (1.0 + max_abs(m))) {
          return fmt::format("|(Lambda + A) + (Lambda + A)*| = {:.3g} at t = {:.6g}",
                             max_abs(h), t);
        }
        return std::nullopt;
      }));
  v.hypotheses.push_back(
      sampled("Lambda in Omega_n", pts, [&](double t) -> std::optional<std::string> {
        const OmegaNCheck om = omega_n_check(lambda(t));
        if (!om.passes) {
          return fmt::format("eigenvalue real parts of Lambda({:.6g}) spread by {:.3g}", t,
                             om.spread);
        }
        return std::nullopt;
      }));
  if (finish_if_failed(v)) return v;
  v.auxiliary.emplace_back("Lambda(t0)", lambda(p.t0));

  const bool k = p.is_constant() && (!cfg.lambda || cfg.lambda->is_constant());
  const double n = static_cast<double>(p.n);
  TwoByTwoSystem sys;
  sys.a11 = freeze_if(k, [&, lambda](double t) {
    const ComplexMatrix l = lambda(t);
    return (l + l.adjoint()).trace().real() / n;
  }, p.t0);
  sys.a12 = freeze_if(k, [&](double t) { return nu_0(p.b(t)); }, p.t0);
  sys.a21 = freeze_if(k, [&](double t) { return p.c(t).trace().real(); }, p.t0);
  return merge_delegated(std::move(v), theorem_2_2_oscillation_check(sys, p.t0,
                                                                     t22_config(cfg), "C3.1"));
}

CriterionVerdict check_T3_7_and_C2_2(const HamiltonianProblem& p, const CriterionConfig& cfg) {
  CriterionVerdict v;
  v.criterion_id = "T3.7";
  const auto pts = sample_times(p, cfg);
  v.hypotheses.push_back(
      sampled("alpha + beta = 1", pts, [&](double t) -> std::optional<std::string> {
        const double s = eval_expr(cfg.alpha, t) + eval_expr(cfg.beta, t);
        if (std::abs(s - 1.0) > 1e-12) return fmt::format("alpha + beta = {:.12g}", s);
        return std::nullopt;
      }));
  v.hypotheses.push_back(b_psd(p, pts));
  if (finish_if_failed(v)) return v;

  auto sep_at = [&](double t) {
    return separator(a_alpha_beta_gamma(p.a(t), eval_expr(cfg.alpha, t),
                                        eval_expr(cfg.beta, t), eval_expr(cfg.gamma, t)));
  };
  bool sep_zero = true;
  for (double t : pts) {
    try {
      const ComplexMatrix s = sep_at(t);
      if (max_abs(s) > 1e-10 * (1.0 + max_abs(p.a(t)))) {
        sep_zero = false;
        break;
      }
    } catch (const Error&) {
      sep_zero = false;
      break;
    }
  }
  const bool coeff_const = !cfg.alpha.depends_on_t() && !cfg.beta.depends_on_t() &&
                           !cfg.gamma.depends_on_t();
  const bool k = p.is_constant() && coeff_const;
  const ScalarFn gamma = freeze_if(coeff_const, [&](double t) {
    return eval_expr(cfg.gamma, t);
  }, p.t0);

  if (sep_zero) {
    v.criterion_id = "C2.2";
    v.hypotheses.push_back({"Sep(alpha A + beta A* + gamma I) = 0", true,
                            fmt::format("sampled at {} points", pts.size()), {}});
    v.notes.push_back("H = 0; weights exp(-int gamma) and exp(int gamma)");
    TwoByTwoSystem sys;
    sys.a11 = gamma;
    sys.a12 = freeze_if(k, [&](double t) { return nu_0(p.b(t)); }, p.t0);
    sys.a21 = freeze_if(k, [&](double t) { return sum_entries(p.c(t)).real(); }, p.t0);
    return merge_delegated(std::move(v),
                           theorem_2_2_oscillation_check(sys, p.t0, t22_config(cfg), "C2.2"));
  }

  const MatrixFn h = [&](double t) {
    const SolveReport r = solve_sep_equation(p.b, p.a, cfg.alpha, cfg.beta, cfg.gamma, t);
    if (!r.solvable() || r.status == SolveStatus::NoHermitianSolution) {
      throw HypothesisNotSatisfied(
          fmt::format("B X = Sep(A_abg) has no Hermitian solution at t = {:.6g}", t));
    }
    return *r.solution;
  };
  v.hypotheses.push_back(sampled("Hermitian solution of B X = Sep(A_abg)", pts,
                                 [&](double t) -> std::optional<std::string> {
                                   h(t);
                                   return std::nullopt;
                                 }));
  if (finish_if_failed(v)) return v;
  {
    const SolveReport r0 = solve_sep_equation(p.b, p.a, cfg.alpha, cfg.beta, cfg.gamma, p.t0);
    v.auxiliary.emplace_back("H(t0)", *r0.solution);
    v.notes.push_back("Sep equation case " + r0.method);
  }
  v.notes.push_back("scalar system phi' = gamma phi + a12 psi, psi' = -Sum(K_H) phi - gamma psi");
  TwoByTwoSystem sys;
  sys.a11 = gamma;
  sys.a22 = [gamma](double t) { return -gamma(t); };
  sys.a12 = freeze_if(k, [&](double t) {
    const ComplexMatrix b = p.b(t);
    return cfg.use_nu0 ? nu_0(b) : lambda1_over_n(b);
  }, p.t0);
  sys.a21 = freeze_if(k, [&, h](double t) {
    const Coeffs c = at(p, t);
    const ComplexMatrix ht = h(t);
    const ComplexMatrix kh = derivative(h, t, cfg.fd_step, k) + ht * c.b * ht +
                             c.a.adjoint() * ht + ht * c.a - c.c;
    return -sum_entries(kh).real();
  }, p.t0);
  return merge_delegated(std::move(v),
                         theorem_2_2_oscillation_check(sys, p.t0, t22_config(cfg), "T3.7"));
}

const CriterionVerdict* RunAllReport::find(const std::string& id) const {
  for (const auto& v : verdicts)
    if (v.criterion_id == id) return &v;
  return nullptr;
}

RunAllReport run_all(const HamiltonianProblem& p, const CriterionConfig& cfg, bool simulate_too) {
  RunAllReport rep;
  rep.problem = p.label;
  using Checker = CriterionVerdict (*)(const HamiltonianProblem&, const CriterionConfig&);
  const Checker checkers[] = {check_T1_1, check_T3_1, check_T3_2, check_T3_3, check_T3_4,
                              check_T3_5, check_T3_6, check_C3_1, check_T3_7_and_C2_2};
  for (Checker c : checkers) rep.verdicts.push_back(c(p, cfg));
  if (!simulate_too) return rep;
  try {
    rep.simulation = simulate(p, ConjoinedInitialData::standard(p.n),
                              p.t0 + cfg.divergence.horizon);
  } catch (const Error& e) {
    rep.simulation_error = e.what();
  }
  for (const auto& v : rep.verdicts) {
    if (v.status != VerdictStatus::OscillatoryTrendCertified) continue;
    if (!rep.simulation || !rep.simulation->oscillation_observed) {
      rep.disagreements.push_back(v.criterion_id);
    }
  }
  return rep;
}

}  // namespace hamosc
