#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "hamosc/tolerances.hpp"

namespace hamosc {

using Complex = std::complex<double>;

/// Dense complex matrix with row-major storage. Most of the library works
/// with square matrices of dimension 1..16; rectangular shapes exist only
/// for augmented matrices in rank tests.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit ComplexMatrix(std::size_t n) : ComplexMatrix(n, n) {}
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  /// Dimension of a square matrix.
  std::size_t dim() const { return rows_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);
ComplexMatrix operator/(ComplexMatrix a, Complex s);

double frobenius_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);
bool is_real(const ComplexMatrix& m, double tol = 0.0);

/// max|M - M*| over all entries.
double hermitian_residual(const ComplexMatrix& m);
/// Passes iff max|M - M*| <= tol.
bool is_hermitian(const ComplexMatrix& m, double tol);
/// Hermitian check with tolerance scaled by the entry magnitude.
bool is_hermitian(const ComplexMatrix& m);
/// (M + M*)/2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// [A | B]
ComplexMatrix hconcat(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenSpectrum {
  /// Ascending eigenvalues.
  std::vector<double> values;
  /// Unitary matrix whose columns are the matching eigenvectors.
  ComplexMatrix vectors;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
/// Throws NotHermitian or NoConvergence.
EigenSpectrum hermitian_eigen(const ComplexMatrix& m,
                              const Tolerances& tol = default_tolerances());
double lambda_min(const ComplexMatrix& m,
                  const Tolerances& tol = default_tolerances());
double lambda_max(const ComplexMatrix& m,
                  const Tolerances& tol = default_tolerances());

/// U diag(f(values)) U*
ComplexMatrix spectral_map(const EigenSpectrum& spectrum,
                           const std::function<double(double)>& f);
ComplexMatrix reconstruct(const EigenSpectrum& spectrum);

bool is_singular_psd(const EigenSpectrum& spectrum,
                     const Tolerances& tol = default_tolerances());

/// Principal square root of a Hermitian PSD matrix. Throws NotPSD.
ComplexMatrix sqrt_psd(const ComplexMatrix& m,
                       const Tolerances& tol = default_tolerances());

/// Inverse of a Hermitian positive definite matrix through its spectrum.
ComplexMatrix hermitian_inverse(const ComplexMatrix& m,
                                const Tolerances& tol = default_tolerances());

/// Sum of all entries.
Complex sum_entries(const ComplexMatrix& m);

/// The separator Sep(L): a Hermitian matrix built from the column sums of
/// the real parts (diagonal) and imaginary parts (last row and column).
ComplexMatrix separator(const ComplexMatrix& l);

/// Scaling and squaring with a [6/6] Pade core.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

/// Solve A X = B by LU with partial pivoting. Throws SingularMatrix.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);
Complex determinant(const ComplexMatrix& a);

/// Rank by Gaussian elimination with complete pivoting; pivots below
/// rel_tol * ||M||_F count as zero.
std::size_t numeric_rank(const ComplexMatrix& m, double rel_tol = 1e-10);

struct SingularValueDecomposition {
  ComplexMatrix u;
  std::vector<double> sigma;  // descending
  ComplexMatrix v;
};

/// One-sided Jacobi SVD of a square matrix, M = U diag(sigma) V*.
SingularValueDecomposition svd(const ComplexMatrix& m);

/// Moore-Penrose pseudo-inverse; singular values below
/// rel_tol * sigma_max are dropped.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rel_tol = 1e-10);

}  // namespace hamosc
