#include "hamosc/problem.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace hamosc {

using nlohmann::json;

MatrixFunction::MatrixFunction(std::size_t n, std::vector<EntryExpr> entries,
                               MatrixFlags declared)
    : n_(n), entries_(std::move(entries)), flags_(declared) {
  if (entries_.size() != n_ * n_) {
    throw DimensionMismatch(fmt::format(
        "matrix function needs {} entries, got {}", n_ * n_, entries_.size()));
  }
  bool has_t = false;
  for (const auto& e : entries_) has_t = has_t || e.re.depends_on_t() || e.im.depends_on_t();
  flags_.constant = !has_t;
}

MatrixFunction MatrixFunction::constant(const ComplexMatrix& m) {
  std::vector<EntryExpr> entries;
  entries.reserve(m.rows() * m.cols());
  for (const Complex& z : m.data()) {
    entries.push_back({Expr::number(z.real()), Expr::number(z.imag())});
  }
  MatrixFlags flags;
  flags.hermitian = is_hermitian(m, 0.0);
  flags.real = is_real(m);
  return MatrixFunction(m.rows(), std::move(entries), flags);
}

MatrixFunction MatrixFunction::parse_real(
    const std::vector<std::vector<std::string>>& rows, MatrixFlags declared) {
  const std::size_t n = rows.size();
  std::vector<EntryExpr> entries;
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionMismatch("matrix rows must have length n");
    for (const auto& src : row) entries.push_back({parse_expr(src), Expr()});
  }
  declared.real = true;
  return MatrixFunction(n, std::move(entries), declared);
}

bool MatrixFunction::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && !(entry(i, j).re.is_number(0.0) && entry(i, j).im.is_number(0.0)))
        return false;
  return true;
}

ComplexMatrix MatrixFunction::operator()(double t) const {
  ComplexMatrix m(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const EntryExpr& e = entry(i, j);
      try {
        m(i, j) = Complex(eval_expr(e.re, t), eval_expr(e.im, t));
      } catch (const DomainError& err) {
        throw DomainError(fmt::format("entry ({},{}): {}", i + 1, j + 1, err.what()), t);
      }
    }
  }
  return m;
}

MatrixFunction MatrixFunction::derivative() const {
  std::vector<EntryExpr> d;
  d.reserve(entries_.size());
  for (const auto& e : entries_) d.push_back({diff_expr(e.re), diff_expr(e.im)});
  MatrixFlags flags = flags_;
  return MatrixFunction(n_, std::move(d), flags);
}

MatrixFunction MatrixFunction::diagonal_sqrt() const {
  if (!is_diagonal()) throw DimensionMismatch("diagonal_sqrt needs a diagonal function");
  std::vector<EntryExpr> s(entries_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    s[i * n_ + i] = {apply(Function::Sqrt, entry(i, i).re), Expr()};
  }
  MatrixFlags flags;
  flags.hermitian = true;
  flags.real = true;
  return MatrixFunction(n_, std::move(s), flags);
}

void validate_flags(const MatrixFunction& m, const std::string& name, double t0,
                    int samples, double span) {
  for (int k = 0; k < samples; ++k) {
    const double t = t0 + span * k / std::max(1, samples - 1);
    const ComplexMatrix v = m(t);
    if (m.flags().hermitian) {
      const double r = hermitian_residual(v);
      if (r > default_tolerances().hermitian * (1.0 + max_abs(v))) {
        throw HermitianViolation(name, t, r);
      }
    }
    if (m.flags().real && !is_real(v)) {
      throw SchemaError(fmt::format("matrix {} is flagged real but has an imaginary part at t={}",
                                    name, t));
    }
  }
}

void validate_problem(const HamiltonianProblem& p, int samples, double span) {
  if (p.a.dim() != p.n || p.b.dim() != p.n || p.c.dim() != p.n) {
    throw SchemaError("A, B and C must all have dimension n");
  }
  if (p.n == 0) throw SchemaError("dimension must be positive");
  // B and C are Hermitian in every problem, declared or not.
  auto check_hermitian = [&](const MatrixFunction& m, const std::string& name) {
    for (int k = 0; k < samples; ++k) {
      const double t = p.t0 + span * k / std::max(1, samples - 1);
      const ComplexMatrix v = m(t);
      const double r = hermitian_residual(v);
      if (r > default_tolerances().hermitian * (1.0 + max_abs(v))) {
        throw HermitianViolation(name, t, r);
      }
    }
  };
  check_hermitian(p.b, "B");
  check_hermitian(p.c, "C");
  validate_flags(p.a, "A", p.t0, samples, span);
  validate_flags(p.b, "B", p.t0, samples, span);
  validate_flags(p.c, "C", p.t0, samples, span);
}

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw SchemaError(fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

Expr parse_field(const json& v, const std::string& where) {
  if (v.is_string()) return parse_expr(v.get<std::string>());
  if (v.is_number()) return Expr::number(v.get<double>());
  throw SchemaError(where + " must be a string expression");
}

}  // namespace

MatrixFunction matrix_function_from_json(const json& doc, std::size_t n,
                                         const std::string& name) {
  require_keys(doc, {"entries", "flags"}, "matrix " + name);
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw SchemaError("matrix " + name + " needs an 'entries' array");
  }
  const json& rows = doc["entries"];
  if (rows.size() != n) {
    throw SchemaError(fmt::format("matrix {} has {} rows, expected {}", name, rows.size(), n));
  }
  std::vector<EntryExpr> entries;
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      throw SchemaError(fmt::format("row {} of matrix {} must have {} entries", i + 1, name, n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const json& cell = rows[i][j];
      const std::string where = fmt::format("{}[{}][{}]", name, i + 1, j + 1);
      EntryExpr e;
      try {
        if (cell.is_string() || cell.is_number()) {
          e.re = parse_field(cell, where);
        } else {
          require_keys(cell, {"re", "im"}, where);
          if (!cell.contains("re")) throw SchemaError(where + " needs 're'");
          e.re = parse_field(cell["re"], where + ".re");
          if (cell.contains("im")) e.im = parse_field(cell["im"], where + ".im");
        }
      } catch (const SyntaxError& err) {
        throw SchemaError(where + ": " + err.what());
      } catch (const UnknownIdentifier& err) {
        throw SchemaError(where + ": " + err.what());
      }
      entries.push_back(std::move(e));
    }
  }
  MatrixFlags flags;
  if (doc.contains("flags")) {
    if (!doc["flags"].is_array()) throw SchemaError("flags of " + name + " must be an array");
    for (const auto& f : doc["flags"]) {
      const std::string s = f.is_string() ? f.get<std::string>() : "";
      if (s == "hermitian") {
        flags.hermitian = true;
      } else if (s == "real") {
        flags.real = true;
      } else if (s == "constant") {
        flags.constant = true;
      } else {
        throw SchemaError(fmt::format("unknown flag '{}' on matrix {}", f.dump(), name));
      }
    }
  }
  const bool declared_constant = flags.constant;
  MatrixFunction m(n, std::move(entries), flags);
  if (declared_constant && !m.is_constant()) {
    throw SchemaError("matrix " + name + " is flagged constant but references t");
  }
  return m;
}

json matrix_function_to_json(const MatrixFunction& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      row.push_back({{"re", print_expr(m.entry(i, j).re)},
                     {"im", print_expr(m.entry(i, j).im)}});
    }
    rows.push_back(std::move(row));
  }
  json flags = json::array();
  if (m.flags().hermitian) flags.push_back("hermitian");
  if (m.flags().real) flags.push_back("real");
  if (m.flags().constant) flags.push_back("constant");
  return {{"entries", std::move(rows)}, {"flags", std::move(flags)}};
}

HamiltonianProblem problem_from_json(const json& doc) {
  require_keys(doc, {"n", "t0", "label", "A", "B", "C"}, "problem");
  for (const char* key : {"n", "A", "B", "C"}) {
    if (!doc.contains(key)) throw SchemaError(fmt::format("problem is missing '{}'", key));
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1 || doc["n"].get<long>() > 16) {
    throw SchemaError("'n' must be an integer in 1..16");
  }
  HamiltonianProblem p;
  p.n = doc["n"].get<std::size_t>();
  if (doc.contains("t0")) {
    if (!doc["t0"].is_number()) throw SchemaError("'t0' must be a number");
    p.t0 = doc["t0"].get<double>();
  }
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw SchemaError("'label' must be a string");
    p.label = doc["label"].get<std::string>();
  }
  p.a = matrix_function_from_json(doc["A"], p.n, "A");
  p.b = matrix_function_from_json(doc["B"], p.n, "B");
  p.c = matrix_function_from_json(doc["C"], p.n, "C");
  validate_problem(p);
  return p;
}

json problem_to_json(const HamiltonianProblem& p) {
  return {{"n", p.n},
          {"t0", p.t0},
          {"label", p.label},
          {"A", matrix_function_to_json(p.a)},
          {"B", matrix_function_to_json(p.b)},
          {"C", matrix_function_to_json(p.c)}};
}

HamiltonianProblem load_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(doc);
}

HamiltonianProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open problem file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_problem_text(buf.str());
}

}  // namespace hamosc
