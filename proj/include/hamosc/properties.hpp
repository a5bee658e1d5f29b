#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamosc/matrix.hpp"

namespace hamosc {

/// Deterministic generator (splitmix64) so that seeds replay across builds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi);

 private:
  std::uint64_t state_;
};

ComplexMatrix random_matrix(Rng& rng, std::size_t n, bool complex_entries = true);
ComplexMatrix random_hermitian(Rng& rng, std::size_t n);
/// M M*; with `singular` one column of M is zeroed first.
ComplexMatrix random_psd(Rng& rng, std::size_t n, bool singular = false);
ComplexMatrix random_positive_definite(Rng& rng, std::size_t n, double shift = 0.1);

struct PropertyOptions {
  std::uint64_t seed = 20240601;
  int cases = 200;
  /// Name of a suite whose checked quantity is deliberately corrupted, to
  /// show the harness catches violations. Empty for normal runs.
  std::string inject_fault;
};

struct Counterexample {
  std::string suite;
  std::uint64_t seed = 0;
  int case_index = 0;
  /// JSON object with the sampled matrices and both sides of the relation.
  std::string data;
};

struct PropertyResult {
  std::string suite;
  std::string statement;
  int cases = 0;
  int failures = 0;
  /// Smallest (lhs - rhs + tolerance) seen; negative means violated.
  double worst_margin = 0.0;
  std::optional<Counterexample> first_failure;

  bool passed() const { return failures == 0; }
};

std::vector<std::string> property_suite_names();
/// Throws std::invalid_argument for unknown names.
PropertyResult run_property_suite(const std::string& name, const PropertyOptions& opt = {});
std::vector<PropertyResult> run_all_properties(const PropertyOptions& opt = {});

/// Re-runs one case; returns its margin and fills `data` with the sample.
double replay_property_case(const std::string& name, std::uint64_t seed, int case_index,
                            bool fault = false, std::string* data = nullptr);

}  // namespace hamosc
