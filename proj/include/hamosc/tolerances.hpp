#pragma once

namespace hamosc {

/// Numerical thresholds shared by the matrix primitives and solvers.
struct Tolerances {
  /// Absolute entrywise tolerance for max|M - M*|, scaled by (1 + max|M|).
  double hermitian = 1e-10;
  /// A PSD matrix is singular when lambda_1 <= singular * max(1, lambda_n).
  double singular = 1e-12;
  /// Negative eigenvalues down to -psd * max(1, |lambda_n|) are accepted as zero.
  double psd = 1e-10;
  /// Numerical rank threshold, relative to the largest pivot / norm.
  double rank = 1e-10;
  int jacobi_max_sweeps = 100;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace hamosc
