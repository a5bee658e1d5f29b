// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hamosc/catalog.hpp"
#include "hamosc/criteria.hpp"
#include "hamosc/dynamics.hpp"
#include "hamosc/matrix_equations.hpp"
#include "hamosc/properties.hpp"
#include "hamosc/scalar_riccati.hpp"

using namespace hamosc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool zeros_match_half_pi(const std::vector<double>& zeros, int count, double tol,
                         std::string* why) {
  if (static_cast<int>(zeros.size()) < count) {
    *why = fmt::format("only {} zeros", zeros.size());
    return false;
  }
  for (int k = 0; k < count; ++k) {
    const double expected = kPi / 2 + k * kPi;
    if (std::abs(zeros[k] - expected) > tol) {
      *why = fmt::format("zero {} at {:.8f}, expected {:.8f}", k, zeros[k], expected);
      return false;
    }
  }
  return true;
}

Outcome example_3_1() {
  Outcome o;
  const auto start = Clock::now();
  const CatalogEntry* e = find_catalog_entry("example_3_1");
  const RunAllReport r = run_all(e->problem, e->configure({}));
  o.require(r.find("T1.1")->status == VerdictStatus::Inconclusive, "T1.1 is not Inconclusive");
  o.require(r.find("T3.4")->status == VerdictStatus::OscillatoryTrendCertified,
            "T3.4 is not Oscillatory");
  o.require(r.simulation.has_value(), "simulation failed: " + r.simulation_error);
  if (r.simulation) {
    std::string why;
    o.require(zeros_match_half_pi(r.simulation->zeros.times(), 6, 1e-4, &why), why);
  }
  const double s = seconds_since(start);
  o.require(s < 5.0, fmt::format("took {:.2f} s", s));
  if (o.pass) o.detail = fmt::format("{} zeros, {:.2f} s", r.simulation->zeros.zeros.size(), s);
  return o;
}

Outcome example_3_2() {
  Outcome o;
  const auto start = Clock::now();
  const CatalogEntry* e = find_catalog_entry("example_3_2");
  const CriterionConfig cfg = e->configure({});
  for (const auto& v : {check_T3_1(e->problem, cfg), check_T3_2(e->problem, cfg)}) {
    o.require(v.status == VerdictStatus::NotApplicable, v.criterion_id + " is applicable");
    const HypothesisResult* h = v.failed_hypothesis();
    o.require(h && h->witness_t && h->evidence.find("rank") != std::string::npos,
              v.criterion_id + " has no rank witness");
  }
  const CriterionVerdict t35 = check_T3_5(e->problem, cfg);
  o.require(t35.status == VerdictStatus::OscillatoryTrendCertified, "T3.5 is not Oscillatory");
  const double m = 1.0;
  double worst = 0.0;
  if (!t35.traces.empty()) {
    const DivergenceTrace& j2 = t35.traces.back().trace;
    const std::size_t k = j2.values.size();
    for (int i = 1; i <= 10; ++i) {
      const std::size_t idx = i * k / 10 - 1;
      worst = std::max(worst, std::abs(j2.values[idx] - m * (j2.checkpoints[idx] - e->problem.t0)));
    }
    o.require(worst <= 1e-6, fmt::format("|J2 - m(t - t0)| = {:.3g}", worst));
  } else {
    o.require(false, "T3.5 produced no trace");
  }
  const double s = seconds_since(start);
  o.require(s < 5.0, fmt::format("took {:.2f} s", s));
  if (o.pass) o.detail = fmt::format("max |J2 - m(t - t0)| = {:.2g}, {:.2f} s", worst, s);
  return o;
}

Outcome example_3_3() {
  Outcome o;
  Rng rng(33);
  const std::vector<std::string> shapes = {"{a}*sin({b}*t) + {c}", "{a}*cos({b}*t)^2 - {c}",
                                           "{a}*t/(1 + {b}*t^2) + {c}", "{a}*exp(-{b}*t) + {c}*t"};
  const double weights[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
  double worst = 0.0;
  for (int branch = 1; branch <= 3; ++branch) {
    auto random_rows = [&]() {
      std::vector<std::vector<std::string>> rows(3, std::vector<std::string>(3));
      for (auto& row : rows)
        for (auto& cell : row) {
          const std::string& shape = shapes[rng.integer(0, 3)];
          cell = fmt::format(fmt::runtime(shape), fmt::arg("a", rng.uniform(-2, 2)),
                             fmt::arg("b", rng.uniform(0.1, 2)), fmt::arg("c", rng.uniform(-2, 2)));
        }
      return rows;
    };
    std::vector<std::vector<std::string>> skew;
    if (branch == 3) {
      skew = std::vector<std::vector<std::string>>(3, std::vector<std::string>(3, "0"));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          const double v = rng.uniform(-1, 1);
          skew[i][j] = fmt::format("{}", v);
          skew[j][i] = fmt::format("{}", -v);
        }
    }
    const MatrixFunction a = example_3_3_function(branch, random_rows(), skew);
    const double alpha = weights[branch - 1][0], beta = weights[branch - 1][1];
    for (int k = 0; k < 50; ++k) {
      const double t = rng.uniform(0.0, 50.0);
      const ComplexMatrix sep = separator(a_alpha_beta_gamma(a(t), alpha, beta, 0.0));
      worst = std::max(worst, max_abs(sep));
    }
  }
  o.require(worst <= 1e-10, fmt::format("max |Sep| = {:.3g}", worst));
  if (o.pass) o.detail = fmt::format("max |Sep| = {:.2g} over 150 points", worst);
  return o;
}

Outcome property_suites() {
  Outcome o;
  const auto start = Clock::now();
  const auto results = run_all_properties();
  int cases = 0;
  for (const auto& r : results) {
    cases += r.cases;
    o.require(r.cases == 200, r.suite + " ran " + std::to_string(r.cases) + " cases");
    o.require(r.passed(), fmt::format("{} failed {} cases", r.suite, r.failures));
  }
  const double s = seconds_since(start);
  o.require(s < 30.0, fmt::format("took {:.2f} s", s));
  if (o.pass) o.detail = fmt::format("{} suites, {} cases, {:.2f} s", results.size(), cases, s);
  return o;
}

Outcome correspondence() {
  Outcome o;
  Rng rng(55);
  double worst_residual = 0.0, worst_time = 0.0;
  int with_zero = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    HamiltonianProblem p;
    p.n = n;
    p.a = MatrixFunction::constant(Complex(0.5) * random_matrix(rng, n));
    p.b = MatrixFunction::constant(random_positive_definite(rng, n, 0.2));
    p.c = MatrixFunction::constant(Complex(-1.0) * random_positive_definite(rng, n, 0.2));
    const CorrespondenceCheck c = check_correspondence(p, ConjoinedInitialData::standard(n), 10.0);
    worst_residual = std::max(worst_residual, c.max_residual);
    if (c.first_zero && c.blowup_time) {
      ++with_zero;
      worst_time = std::max(worst_time, std::abs(*c.first_zero - *c.blowup_time));
    }
    o.require(c.residual_ok, fmt::format("trial {} residual {:.3g}", trial, c.max_residual));
    o.require(c.times_match, fmt::format("trial {} zero/blow-up mismatch", trial));
  }
  o.require(worst_residual <= 1e-5, fmt::format("residual {:.3g}", worst_residual));
  o.require(worst_time <= 1e-3, fmt::format("time gap {:.3g}", worst_time));
  if (o.pass)
    o.detail = fmt::format("30 problems ({} with a zero), residual {:.2g}, time gap {:.2g}",
                           with_zero, worst_residual, worst_time);
  return o;
}

Outcome soundness() {
  Outcome o;
  int oscillatory = 0, controls = 0;
  o.require(catalog().size() >= 8, "catalog has fewer than 8 entries");
  for (const CatalogEntry& e : catalog()) {
    const RunAllReport r = run_all(e.problem, e.configure({}));
    if (!r.simulation) {
      o.require(false, e.name + ": simulation failed: " + r.simulation_error);
      continue;
    }
    const std::size_t zeros = r.simulation->zeros.zeros.size();
    for (const auto& v : r.verdicts) {
      if (v.status != VerdictStatus::OscillatoryTrendCertified) continue;
      ++oscillatory;
      o.require(zeros >= 2, fmt::format("{}: {} certifies with {} zeros", e.name,
                                        v.criterion_id, zeros));
      o.require(!e.non_oscillatory_control,
                fmt::format("{}: {} certifies the control", e.name, v.criterion_id));
    }
    if (e.non_oscillatory_control) ++controls;
  }
  o.require(controls >= 1, "no non-oscillatory control in the catalog");
  if (o.pass)
    o.detail = fmt::format("{} entries, {} oscillatory verdicts, {} control(s)", catalog().size(),
                           oscillatory, controls);
  return o;
}

Outcome solver_cross_validation() {
  Outcome o;
  Rng rng(77);
  double worst_gap = 0.0, worst_ratio = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
    const ComplexMatrix b = random_positive_definite(rng, n, 0.5);
    const ComplexMatrix r = random_hermitian(rng, n);
    const SolveReport s = solve_lyapunov(b, r);
    if (!s.solvable()) {
      o.require(false, fmt::format("trial {} unsolvable", trial));
      continue;
    }
    const ComplexMatrix q = h_lambda_by_quadrature(b, r);
    worst_gap = std::max(worst_gap, max_abs(*s.solution - q));
    worst_ratio = std::max(worst_ratio, s.residual / (1.0 + s.rhs_norm));
  }
  o.require(worst_gap <= 1e-6, fmt::format("solvers differ by {:.3g}", worst_gap));
  o.require(worst_ratio <= 1e-8, fmt::format("residual ratio {:.3g}", worst_ratio));
  if (o.pass)
    o.detail = fmt::format("50 instances, max gap {:.2g}, max residual ratio {:.2g}", worst_gap,
                           worst_ratio);
  return o;
}

Outcome scalar_sanity() {
  Outcome o;
  const auto r = solve_scalar_riccati(ScalarRiccatiProblem{Expr::number(1), Expr(), Expr::number(1), 0.0, 0.0}, 3.0);
  o.require(r.blowup.blew_up(), "no blow-up");
  o.require(std::abs(r.blowup.t_star - kPi / 2) <= 1e-4,
            fmt::format("blow-up at {:.8f}", r.blowup.t_star));
  TwoByTwoSystem sys;
  sys.a12 = [](double) { return 1.0; };
  sys.a21 = [](double) { return -1.0; };
  const auto v = theorem_2_2_oscillation_check(sys, 0.0);
  o.require(v.status == VerdictStatus::OscillatoryTrendCertified, "T2.2 verdict not Oscillatory");
  const auto zeros = scalar_system_zeros(sys, 0.0, 6 * kPi);
  std::string why;
  o.require(zeros_match_half_pi(zeros, 6, 1e-4, &why), why);
  if (o.pass)
    o.detail = fmt::format("blow-up at {:.7f}, {} zeros", r.blowup.t_star, zeros.size());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"example_3_1_reproduction", example_3_1},
      {"example_3_2_reproduction", example_3_2},
      {"example_3_3_separator_vanishes", example_3_3},
      {"property_suites", property_suites},
      {"riccati_correspondence", correspondence},
      {"catalog_soundness", soundness},
      {"solver_cross_validation", solver_cross_validation},
      {"scalar_sanity", scalar_sanity},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
