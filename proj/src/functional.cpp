#include "hamosc/functional.hpp"

#include <cmath>

#include "hamosc/error.hpp"

namespace hamosc {

PositiveFunctional::PositiveFunctional(ComplexMatrix weight)
    : weight_(std::move(weight)) {
  normalized_ = std::abs(weight_.trace() - Complex(1.0)) <= 1e-12;
}

PositiveFunctional PositiveFunctional::trace(std::size_t n) {
  return PositiveFunctional(ComplexMatrix::identity(n));
}

PositiveFunctional PositiveFunctional::normalized_trace(std::size_t n) {
  return PositiveFunctional(ComplexMatrix::identity(n) /
                            Complex(static_cast<double>(n)));
}

PositiveFunctional PositiveFunctional::from_weight(ComplexMatrix weight) {
  if (!weight.is_square()) throw DimensionMismatch("functional weight must be square");
  const EigenSpectrum spectrum = hermitian_eigen(weight);
  const double top = std::max(1.0, std::abs(spectrum.values.back()));
  if (spectrum.values.front() < -default_tolerances().psd * top) {
    throw NotPSD("functional weight is not positive semidefinite");
  }
  if (spectrum.values.back() <= 0.0) {
    throw NotPSD("functional weight is zero");
  }
  return PositiveFunctional(hermitian_part(weight));
}

Complex PositiveFunctional::operator()(const ComplexMatrix& m) const {
  if (m.rows() != dim() || m.cols() != dim()) {
    throw DimensionMismatch("functional applied to a matrix of wrong dimension");
  }
  // trace(W M) = sum_ij W_ij M_ji
  Complex s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) s += weight_(i, j) * m(j, i);
  return s;
}

Complex apply_functional(const PositiveFunctional& g, const ComplexMatrix& m) {
  return g(m);
}

double nu_g(const PositiveFunctional& g, const ComplexMatrix& m,
            const Tolerances& tol) {
  const EigenSpectrum spectrum = hermitian_eigen(m, tol);
  const double top = std::max(1.0, std::abs(spectrum.values.back()));
  if (spectrum.values.front() < -tol.psd * top) {
    throw NotPSD("nu_g: matrix is not positive semidefinite");
  }
  if (is_singular_psd(spectrum, tol)) return 0.0;
  const ComplexMatrix inv = spectral_map(spectrum, [](double x) { return 1.0 / x; });
  return 1.0 / g(inv).real();
}

double nu_0(const ComplexMatrix& m, const Tolerances& tol) {
  return nu_g(PositiveFunctional::trace(m.rows()), m, tol);
}

}  // namespace hamosc
