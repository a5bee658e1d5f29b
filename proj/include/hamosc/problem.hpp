#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hamosc/expr.hpp"
#include "hamosc/matrix.hpp"

namespace hamosc {

struct EntryExpr {
  Expr re;
  Expr im;
};

struct MatrixFlags {
  bool hermitian = false;
  bool real = false;
  bool constant = false;
};

/// n x n matrix whose entries are (re, im) expressions in t.
class MatrixFunction {
 public:
  MatrixFunction() = default;
  /// `entries` is row-major with n*n elements. The constant flag is inferred
  /// when no entry references t; the other flags are taken as declared.
  MatrixFunction(std::size_t n, std::vector<EntryExpr> entries,
                 MatrixFlags declared = {});

  /// Literal entries; hermitian/real flags set when the matrix is.
  static MatrixFunction constant(const ComplexMatrix& m);
  /// Real-valued entries from expression sources (row-major rows).
  static MatrixFunction parse_real(const std::vector<std::vector<std::string>>& rows,
                                   MatrixFlags declared = {});

  std::size_t dim() const { return n_; }
  const EntryExpr& entry(std::size_t i, std::size_t j) const {
    return entries_[i * n_ + j];
  }
  const MatrixFlags& flags() const { return flags_; }
  bool is_constant() const { return flags_.constant; }
  /// Every off-diagonal entry is the literal 0.
  bool is_diagonal() const;

  /// Throws DomainError naming the failing entry.
  ComplexMatrix operator()(double t) const;
  ComplexMatrix eval(double t) const { return (*this)(t); }

  /// Entrywise symbolic derivative.
  MatrixFunction derivative() const;

  /// Entrywise sqrt of a diagonal function.
  MatrixFunction diagonal_sqrt() const;

 private:
  std::size_t n_ = 0;
  std::vector<EntryExpr> entries_;
  MatrixFlags flags_;
};

struct HamiltonianProblem {
  std::size_t n = 0;
  MatrixFunction a;
  MatrixFunction b;
  MatrixFunction c;
  double t0 = 0.0;
  std::string label;

  bool is_constant() const {
    return a.is_constant() && b.is_constant() && c.is_constant();
  }
  bool is_real() const {
    return a.flags().real && b.flags().real && c.flags().real;
  }
};

/// Samples B and C (and any declared flags) at `samples` points of
/// [t0, t0 + span]. Throws HermitianViolation, SchemaError or DomainError.
void validate_problem(const HamiltonianProblem& p, int samples = 16,
                      double span = 10.0);

/// Checks declared flags of one matrix by sampling. Throws
/// HermitianViolation or SchemaError.
void validate_flags(const MatrixFunction& m, const std::string& name, double t0,
                    int samples = 16, double span = 10.0);

HamiltonianProblem problem_from_json(const nlohmann::json& doc);
nlohmann::json problem_to_json(const HamiltonianProblem& p);
MatrixFunction matrix_function_from_json(const nlohmann::json& doc, std::size_t n,
                                         const std::string& name);
nlohmann::json matrix_function_to_json(const MatrixFunction& m);

/// Parses JSON text. Throws SchemaError on malformed documents.
HamiltonianProblem load_problem_text(const std::string& text);
HamiltonianProblem load_problem_file(const std::string& path);

}  // namespace hamosc
