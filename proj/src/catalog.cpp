#include "hamosc/catalog.hpp"

#include "hamosc/error.hpp"

namespace hamosc {

namespace {

using Rows = std::vector<std::vector<std::string>>;

HamiltonianProblem make(const std::string& label, const Rows& a, const Rows& b, const Rows& c,
                        double t0 = 0.0) {
  HamiltonianProblem p;
  p.n = a.size();
  p.label = label;
  p.t0 = t0;
  p.a = MatrixFunction::parse_real(a);
  MatrixFlags herm;
  herm.hermitian = true;
  p.b = MatrixFunction::parse_real(b, herm);
  p.c = MatrixFunction::parse_real(c, herm);
  validate_problem(p);
  return p;
}

const Rows kFree3 = {{"0.4", "0.3*sin(t)", "-0.2"},
                     {"0.1", "-0.5", "0.25*cos(2*t)"},
                     {"0.2", "0.15", "-0.3"}};
const Rows kSkew3 = {{"0", "0.5", "0.2*sin(t)"},
                     {"-0.5", "0", "0.1"},
                     {"-0.2*sin(t)", "-0.1", "0"}};
const Rows kI3 = {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}};
const Rows kMinusI3 = {{"-1", "0", "0"}, {"0", "-1", "0"}, {"0", "0", "-1"}};

CatalogEntry example_3_3_entry(int branch) {
  CatalogEntry e;
  e.name = "example_3_3_q" + std::to_string(branch);
  e.summary = "n = 3, A = A_Q" + std::to_string(branch) + ", B = I, C = -I";
  e.problem.n = 3;
  e.problem.label = e.name;
  e.problem.a = example_3_3_function(branch, kFree3, branch == 3 ? kSkew3 : Rows{});
  MatrixFlags herm;
  herm.hermitian = true;
  e.problem.b = MatrixFunction::parse_real(kI3, herm);
  e.problem.c = MatrixFunction::parse_real(kMinusI3, herm);
  validate_problem(e.problem);
  const char* alpha = branch == 1 ? "1" : branch == 2 ? "0" : "0.5";
  e.alpha = parse_expr(alpha);
  e.beta = parse_expr(branch == 1 ? "0" : branch == 2 ? "1" : "0.5");
  e.gamma = Expr::number(0.0);
  e.notes = {
      std::string("alpha = ") + alpha + ", gamma = 0; alpha is piecewise (1 on Q1, 0 on Q2, "
                                        "1/2 on Q3) and this entry is the Q" +
          std::to_string(branch) + " branch",
      "Sep(alpha A + beta A* + gamma I) vanishes identically, so Corollary 2.2 applies",
  };
  if (branch == 3) {
    e.notes.push_back("a skew-symmetric A_0(t) is added on Q3");
    e.notes.push_back(
        "the last column uses the row sums -sum_k a_jk of the leading block so that every "
        "row and column sums to zero");
  }
  return e;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;
  {
    CatalogEntry e;
    e.name = "harmonic_n1";
    e.summary = "x'' + x = 0 as n = 1: A = 0, B = 1, C = -1";
    e.notes = {"det Phi = cos t"};
    e.problem = make(e.name, {{"0"}}, {{"1"}}, {{"-1"}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "harmonic_n2";
    e.summary = "two decoupled oscillators: A = 0, B = I, C = -I";
    e.notes = {"det Phi = cos^2 t"};
    e.problem = make(e.name, {{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "1"}},
                     {{"-1", "0"}, {"0", "-1"}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "example_3_1";
    e.summary = "A = A0 = [[0,1],[-1,0]], B = I, C = -A0^T A0";
    e.notes = {"Example 3.1: Theorem 1.1 does not apply, Theorem 3.4 does",
               "Phi = exp(A0 t) cos t, so det Phi = cos^2 t"};
    e.problem = make(e.name, {{"0", "1"}, {"-1", "0"}}, {{"1", "0"}, {"0", "1"}},
                     {{"-1", "0"}, {"0", "-1"}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "example_3_2";
    e.summary = "n = 2, m = 1: B = diag(1, 0), A = [[0, A1], [0, A2]] with A1 = A2 = 1, C = -I";
    e.notes = {"Example 3.2: B X = A has no solution, so Theorems 3.1 and 3.2 do not apply",
               "C = I gives J_2 = -m (t - t0) and C = -I gives J_2 = m (t - t0); this "
               "entry uses C = -I and example_3_2_literal keeps C = I"};
    e.problem = make(e.name, {{"0", "1"}, {"0", "1"}}, {{"1", "0"}, {"0", "0"}},
                     {{"-1", "0"}, {"0", "-1"}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "example_3_2_literal";
    e.summary = "Example 3.2 exactly as printed, C = I";
    e.notes = {"J_2 = -m (t - t0) under this sign, so Theorem 3.5 gives nothing"};
    e.problem = make(e.name, {{"0", "1"}, {"0", "1"}}, {{"1", "0"}, {"0", "0"}},
                     {{"1", "0"}, {"0", "1"}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "hyperbolic_control";
    e.summary = "A = 0, B = I, C = I: Phi = cosh t I, never singular";
    e.notes = {"non-oscillatory control; no criterion may certify oscillation"};
    e.problem = make(e.name, {{"0", "0"}, {"0", "0"}}, {{"1", "0"}, {"0", "1"}},
                     {{"1", "0"}, {"0", "1"}});
    e.non_oscillatory_control = true;
    out.push_back(e);
  }
  for (int branch = 1; branch <= 3; ++branch) out.push_back(example_3_3_entry(branch));
  {
    CatalogEntry e;
    e.name = "skew_drift";
    e.summary = "A = [[0, 1/2], [-1/2, 0]], B = I, C = -I";
    e.notes = {"J(t) of Theorem 3.3 grows like (n - tr A A*) t = 1.5 t"};
    e.problem = make(e.name, {{"0", "0.5"}, {"-0.5", "0"}}, {{"1", "0"}, {"0", "1"}},
                     {{"-1", "0"}, {"0", "-1"}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "euler_n1";
    e.summary = "Euler equation x'' + x / t^2 = 0 on [1, inf): A = 0, B = 1, C = -1/t^2";
    e.notes = {"oscillatory, but zeros are spaced geometrically (ln t steps of 2 pi/sqrt 3)",
               "every integral criterion here converges, so the expected verdicts are "
               "Inconclusive"};
    e.problem = make(e.name, {{"0"}}, {{"1"}}, {{"-1/t^2"}}, 1.0);
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "time_varying";
    e.summary = "A = 0, B = diag(1 + sin(t)/2, 1), C = -diag(1, 1 + cos(t)/2)";
    e.notes = {"smooth periodic coefficients with B > 0"};
    e.problem = make(e.name, {{"0", "0"}, {"0", "0"}}, {{"1 + 0.5*sin(t)", "0"}, {"0", "1"}},
                     {{"-1", "0"}, {"0", "-1 - 0.5*cos(t)"}});
    out.push_back(e);
  }
  return out;
}

}  // namespace

CriterionConfig CatalogEntry::configure(CriterionConfig cfg) const {
  if (alpha) cfg.alpha = *alpha;
  if (beta) cfg.beta = *beta;
  if (gamma) cfg.gamma = *gamma;
  return cfg;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

ComplexMatrix example_3_3_matrix(int branch, const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (n < 2) throw DimensionMismatch("Example 3.3 needs n >= 2");
  const std::size_t l = n - 1;
  ComplexMatrix m(n);
  auto col_sum = [&](std::size_t k) {  // sum_{j<n} a_jk
    Complex s = 0.0;
    for (std::size_t j = 0; j < l; ++j) s += a(j, k);
    return s;
  };
  auto row_sum = [&](std::size_t j) {  // sum_{k<n} a_jk
    Complex s = 0.0;
    for (std::size_t k = 0; k < l; ++k) s += a(j, k);
    return s;
  };
  switch (branch) {
    case 1:
      for (std::size_t j = 0; j < l; ++j)
        for (std::size_t k = 0; k < n; ++k) m(j, k) = a(j, k);
      for (std::size_t k = 0; k < n; ++k) m(l, k) = -col_sum(k);
      break;
    case 2:
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < l; ++k) m(j, k) = a(j, k);
        m(j, l) = -row_sum(j);
      }
      break;
    case 3: {
      Complex total = 0.0;
      for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t k = 0; k < l; ++k) {
          m(j, k) = a(j, k);
          total += a(j, k);
        }
        m(j, l) = -row_sum(j);
      }
      for (std::size_t k = 0; k < l; ++k) m(l, k) = -col_sum(k);
      m(l, l) = total;
      break;
    }
    default:
      throw DimensionMismatch("Example 3.3 branch must be 1, 2 or 3");
  }
  return m;
}

MatrixFunction example_3_3_function(int branch, const Rows& a, const Rows& skew) {
  const std::size_t n = a.size();
  if (n < 2) throw DimensionMismatch("Example 3.3 needs n >= 2");
  const std::size_t l = n - 1;
  std::vector<std::vector<Expr>> e(n, std::vector<Expr>(n));
  for (std::size_t j = 0; j < n; ++j) {
    if (a[j].size() != n) throw DimensionMismatch("matrix rows must have length n");
    for (std::size_t k = 0; k < n; ++k) e[j][k] = parse_expr(a[j][k]);
  }
  std::vector<std::vector<Expr>> m(n, std::vector<Expr>(n));
  auto col_sum = [&](std::size_t k) {
    Expr s;
    for (std::size_t j = 0; j < l; ++j) s = s + e[j][k];
    return s;
  };
  auto row_sum = [&](std::size_t j) {
    Expr s;
    for (std::size_t k = 0; k < l; ++k) s = s + e[j][k];
    return s;
  };
  switch (branch) {
    case 1:
      for (std::size_t j = 0; j < l; ++j)
        for (std::size_t k = 0; k < n; ++k) m[j][k] = e[j][k];
      for (std::size_t k = 0; k < n; ++k) m[l][k] = -col_sum(k);
      break;
    case 2:
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < l; ++k) m[j][k] = e[j][k];
        m[j][l] = -row_sum(j);
      }
      break;
    case 3: {
      Expr total;
      for (std::size_t j = 0; j < l; ++j) {
        for (std::size_t k = 0; k < l; ++k) {
          m[j][k] = e[j][k];
          total = total + e[j][k];
        }
        m[j][l] = -row_sum(j);
      }
      for (std::size_t k = 0; k < l; ++k) m[l][k] = -col_sum(k);
      m[l][l] = total;
      break;
    }
    default:
      throw DimensionMismatch("Example 3.3 branch must be 1, 2 or 3");
  }
  if (!skew.empty()) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m[j][k] = m[j][k] + parse_expr(skew[j][k]);
  }
  std::vector<EntryExpr> entries;
  for (auto& row : m)
    for (auto& x : row) entries.push_back({x, Expr()});
  MatrixFlags flags;
  flags.real = true;
  return MatrixFunction(n, std::move(entries), flags);
}

}  // namespace hamosc
