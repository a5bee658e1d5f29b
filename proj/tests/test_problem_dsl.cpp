#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "hamosc/catalog.hpp"
#include "hamosc/error.hpp"
#include "hamosc/expr.hpp"
#include "hamosc/problem.hpp"

using namespace hamosc;

TEST(ParseExpr, Structure) {
  const Expr e = parse_expr("t^2 - 1");
  ASSERT_EQ(e.kind(), ExprKind::Sub);
  EXPECT_EQ(e.lhs().kind(), ExprKind::Pow);
  EXPECT_EQ(e.lhs().lhs().kind(), ExprKind::Variable);
  EXPECT_TRUE(e.rhs().is_number(1.0));
  const Expr s = parse_expr("sin(2*t)");
  ASSERT_EQ(s.kind(), ExprKind::Call);
  EXPECT_EQ(s.function(), Function::Sin);
  EXPECT_EQ(s.lhs().kind(), ExprKind::Mul);
}

TEST(ParseExpr, UnbalancedParenReportsOffset) {
  try {
    parse_expr("1/(1+t");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("offset 6"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_expr("foo(t)"), UnknownIdentifier);
}

TEST(EvalExpr, Examples) {
  EXPECT_DOUBLE_EQ(eval_expr(parse_expr("t^2"), 3.0), 9.0);
  EXPECT_DOUBLE_EQ(eval_expr(parse_expr("exp(0)"), 0.0), 1.0);
  EXPECT_THROW(eval_expr(parse_expr("1/t"), 0.0), DomainError);
  EXPECT_THROW(eval_expr(parse_expr("log(t)"), -1.0), DomainError);
  EXPECT_NEAR(eval_expr(parse_expr("pi + e"), 0.0), M_PI + M_E, 1e-15);
}

TEST(DiffExpr, Examples) {
  EXPECT_NEAR(eval_expr(diff_expr(parse_expr("t^2")), 1.5), 3.0, 1e-15);
  const Expr d = diff_expr(parse_expr("sin(t)"));
  for (double t : {0.0, 1.0, 2.5}) EXPECT_NEAR(eval_expr(d, t), std::cos(t), 1e-15);
}

TEST(DiffExpr, MatchesCentralDifferences) {
  const Expr f = parse_expr("exp(2*t)/t");
  const Expr df = diff_expr(f);
  for (double t : {0.5, 1.0, 2.0}) {
    const double h = 1e-5;
    const double fd = (eval_expr(f, t + h) - eval_expr(f, t - h)) / (2 * h);
    EXPECT_NEAR(eval_expr(df, t), fd, 1e-6 * (1.0 + std::abs(fd)));
  }
}

TEST(PrintExpr, RoundTrips) {
  for (const char* src : {"t^2 - 1", "sin(2*t)/(1+t)", "-cos(t)^2", "sqrt(abs(t)) - 3*t",
                          "exp(-t/2)*cosh(t)", "2^(t-1)"}) {
    const Expr e = parse_expr(src);
    EXPECT_EQ(parse_expr(print_expr(e)), e) << src;
  }
}

TEST(MatrixFunction, Evaluation) {
  const MatrixFunction id = MatrixFunction::parse_real({{"1", "0"}, {"0", "1"}});
  EXPECT_TRUE(id.is_constant());
  EXPECT_EQ(id(3.7), ComplexMatrix::identity(2));
  const MatrixFunction a = MatrixFunction::parse_real({{"0", "t"}, {"-t", "0"}});
  EXPECT_FALSE(a.is_constant());
  EXPECT_EQ(a(2.0), (ComplexMatrix{{0.0, 2.0}, {-2.0, 0.0}}));
  const MatrixFunction da = a.derivative();
  EXPECT_EQ(da(5.0), (ComplexMatrix{{0.0, 1.0}, {-1.0, 0.0}}));
}

TEST(Problem, CatalogExample31) {
  const CatalogEntry* e = find_catalog_entry("example_3_1");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->problem.n, 2u);
  EXPECT_TRUE(e->problem.a.is_constant());
  EXPECT_EQ(e->problem.b(5.0), ComplexMatrix::identity(2));
  const ComplexMatrix a0 = e->problem.a(0.0);
  EXPECT_EQ(a0 + a0.adjoint(), ComplexMatrix(2));
}

namespace {
const char* kGood = R"({
  "n": 2, "t0": 0, "label": "x",
  "A": {"entries": [["0", "1"], ["-1", "0"]]},
  "B": {"entries": [["1", "0"], ["0", "1"]], "flags": ["hermitian"]},
  "C": {"entries": [["-1", {"re": "0", "im": "t"}], [{"re": "0", "im": "-t"}, "-1"]]}
})";
}

TEST(Problem, LoadsAndRoundTrips) {
  const HamiltonianProblem p = load_problem_text(kGood);
  EXPECT_EQ(p.n, 2u);
  EXPECT_EQ(p.c(2.0)(0, 1), Complex(0.0, 2.0));
  const HamiltonianProblem q = problem_from_json(problem_to_json(p));
  for (double t : {0.0, 1.3, 4.0}) {
    EXPECT_EQ(q.a(t), p.a(t));
    EXPECT_EQ(q.b(t), p.b(t));
    EXPECT_EQ(q.c(t), p.c(t));
  }
  EXPECT_EQ(problem_to_json(q), problem_to_json(p));
}

TEST(Problem, RejectsNonHermitianC) {
  auto doc = nlohmann::json::parse(kGood);
  doc["C"]["entries"][0][1] = "1";
  EXPECT_THROW(problem_from_json(doc), HermitianViolation);
}

TEST(Problem, RejectsMismatchedDimensions) {
  auto doc = nlohmann::json::parse(kGood);
  doc["B"]["entries"] = {{"1"}};
  EXPECT_THROW(problem_from_json(doc), SchemaError);
  doc = nlohmann::json::parse(kGood);
  doc["n"] = 3;
  EXPECT_THROW(problem_from_json(doc), SchemaError);
}

TEST(Problem, RejectsMalformedDocuments) {
  EXPECT_THROW(load_problem_text("{"), SchemaError);
  auto doc = nlohmann::json::parse(kGood);
  doc["A"]["entries"][0][0] = "sin(";
  EXPECT_THROW(problem_from_json(doc), SchemaError);
  doc = nlohmann::json::parse(kGood);
  doc["A"]["flags"] = {"constant"};
  doc["A"]["entries"][0][0] = "t";
  EXPECT_THROW(problem_from_json(doc), SchemaError);
  doc = nlohmann::json::parse(kGood);
  doc.erase("C");
  EXPECT_THROW(problem_from_json(doc), SchemaError);
}
