#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamosc/criteria.hpp"
#include "hamosc/problem.hpp"

namespace hamosc {

struct CatalogEntry {
  std::string name;
  std::string summary;
  /// Provenance and caveats, printed by `catalog show`.
  std::vector<std::string> notes;
  HamiltonianProblem problem;
  /// Criterion settings the entry is meant to be checked with.
  std::optional<Expr> alpha, beta, gamma;
  /// True when simulation is expected to find no zeros.
  bool non_oscillatory_control = false;

  CriterionConfig configure(CriterionConfig cfg) const;
};

const std::vector<CatalogEntry>& catalog();
/// nullptr when unknown.
const CatalogEntry* find_catalog_entry(const std::string& name);

/// The A_{Q_j} matrices for n >= 2 from the free entries. `a` is
/// n x n; only the entries the construction keeps are read:
/// Q1 rows 1..n-1, Q2 columns 1..n-1, Q3 the leading (n-1) x (n-1) block.
ComplexMatrix example_3_3_matrix(int branch, const ComplexMatrix& a);
/// The same construction on expressions.
MatrixFunction example_3_3_function(int branch, const std::vector<std::vector<std::string>>& a,
                                    const std::vector<std::vector<std::string>>& skew = {});

}  // namespace hamosc
