#pragma once

#include "hamosc/matrix.hpp"

namespace hamosc {

/// Positive linear functional g(M) = trace(W M) with W Hermitian PSD.
///
/// Bounds of the form lambda_1(D) <= g(D) <= lambda_n(D) need trace(W) = 1;
/// the plain trace (W = I) is also a positive functional and is the one the
/// nu_0 quantities are built from. `normalized()` tells the two apart.
class PositiveFunctional {
 public:
  /// W = I.
  static PositiveFunctional trace(std::size_t n);
  /// W = I / n.
  static PositiveFunctional normalized_trace(std::size_t n);
  /// Validates W (Hermitian, PSD, nonzero). Throws NotHermitian / NotPSD.
  static PositiveFunctional from_weight(ComplexMatrix weight);

  const ComplexMatrix& weight() const { return weight_; }
  std::size_t dim() const { return weight_.rows(); }
  bool normalized() const { return normalized_; }

  /// trace(W M). Throws DimensionMismatch.
  Complex operator()(const ComplexMatrix& m) const;

 private:
  explicit PositiveFunctional(ComplexMatrix weight);

  ComplexMatrix weight_;
  bool normalized_ = false;
};

Complex apply_functional(const PositiveFunctional& g, const ComplexMatrix& m);

/// 0 when M is singular, 1 / g(M^{-1}) otherwise. Throws NotPSD.
double nu_g(const PositiveFunctional& g, const ComplexMatrix& m,
            const Tolerances& tol = default_tolerances());

/// nu_g for the plain trace: 0 when singular, 1 / trace(M^{-1}) otherwise.
double nu_0(const ComplexMatrix& m, const Tolerances& tol = default_tolerances());

}  // namespace hamosc
