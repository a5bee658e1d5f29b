#include "hamosc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hamosc/error.hpp"

namespace hamosc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square");
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("matrix shapes differ");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw DimensionMismatch("ragged matrix literal");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Complex ComplexMatrix::trace() const {
  require_square(*this, "trace");
  Complex s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
  a -= b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a) {
  a *= -1.0;
  return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shapes");
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) {
  a *= s;
  return a;
}

ComplexMatrix operator*(ComplexMatrix a, Complex s) {
  a *= s;
  return a;
}

ComplexMatrix operator/(ComplexMatrix a, Complex s) {
  a *= 1.0 / s;
  return a;
}

double frobenius_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& m) {
  double r = 0.0;
  for (const auto& x : m.data()) r = std::max(r, std::abs(x));
  return r;
}

bool all_finite(const ComplexMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](const Complex& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

bool is_real(const ComplexMatrix& m, double tol) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [tol](const Complex& x) { return std::abs(x.imag()) <= tol; });
}

double hermitian_residual(const ComplexMatrix& m) {
  require_square(m, "hermitian_residual");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.is_square() && hermitian_residual(m) <= tol;
}

bool is_hermitian(const ComplexMatrix& m) {
  return is_hermitian(m, default_tolerances().hermitian * (1.0 + max_abs(m)));
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

ComplexMatrix hconcat(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hconcat row counts");
  ComplexMatrix r(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
  }
  return r;
}

// Each rotation first removes the phase of a_pq with a diagonal unitary and
// then applies the real symmetric Jacobi rotation, G = D * R.
EigenSpectrum hermitian_eigen(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "hermitian_eigen");
  if (!is_hermitian(m, tol.hermitian * (1.0 + max_abs(m)))) {
    throw NotHermitian("hermitian_eigen: input is not Hermitian");
  }
  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double norm = frobenius_norm(a);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (p != q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep < tol.jacobi_max_sweeps; ++sweep) {
    const double off = off_norm();
    if (off <= 4.0 * kEps * norm || off == 0.0) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip negligible couplings (Rutishauser's test).
        if (sweep > 3 && std::abs(app) + 100.0 * r == std::abs(app) &&
            std::abs(aqq) + 100.0 * r == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase_conj = std::conj(apq / r);
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex gpp = c, gpq = s;
        const Complex gqp = -s * phase_conj, gqq = c * phase_conj;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged) {
    if (off_norm() > 1e3 * kEps * norm) {
      throw NoConvergence("hermitian_eigen: Jacobi sweep budget exhausted");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  EigenSpectrum result;
  result.values.resize(n);
  result.vectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) result.vectors(i, k) = v(i, order[k]);
  }
  return result;
}

double lambda_min(const ComplexMatrix& m, const Tolerances& tol) {
  return hermitian_eigen(m, tol).values.front();
}

double lambda_max(const ComplexMatrix& m, const Tolerances& tol) {
  return hermitian_eigen(m, tol).values.back();
}

ComplexMatrix spectral_map(const EigenSpectrum& spectrum,
                           const std::function<double(double)>& f) {
  const std::size_t n = spectrum.values.size();
  const ComplexMatrix& u = spectrum.vectors;
  ComplexMatrix r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(spectrum.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex uik = u(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += uik * std::conj(u(j, k));
    }
  }
  return r;
}

ComplexMatrix reconstruct(const EigenSpectrum& spectrum) {
  return spectral_map(spectrum, [](double x) { return x; });
}

bool is_singular_psd(const EigenSpectrum& spectrum, const Tolerances& tol) {
  const double top = std::max(1.0, std::abs(spectrum.values.back()));
  return spectrum.values.front() <= tol.singular * top;
}

namespace {

void require_psd(const EigenSpectrum& spectrum, const Tolerances& tol,
                 const char* what) {
  const double top = std::max(1.0, std::abs(spectrum.values.back()));
  if (spectrum.values.front() < -tol.psd * top) {
    throw NotPSD(std::string(what) + ": matrix has a negative eigenvalue");
  }
}

}  // namespace

ComplexMatrix sqrt_psd(const ComplexMatrix& m, const Tolerances& tol) {
  const EigenSpectrum spectrum = hermitian_eigen(m, tol);
  require_psd(spectrum, tol, "sqrt_psd");
  return spectral_map(spectrum,
                      [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

ComplexMatrix hermitian_inverse(const ComplexMatrix& m, const Tolerances& tol) {
  const EigenSpectrum spectrum = hermitian_eigen(m, tol);
  if (spectrum.values.front() <= 0.0 || is_singular_psd(spectrum, tol)) {
    throw NotPositiveDefinite("hermitian_inverse: matrix is not positive definite");
  }
  return spectral_map(spectrum, [](double x) { return 1.0 / x; });
}

Complex sum_entries(const ComplexMatrix& m) {
  Complex s = 0.0;
  for (const auto& x : m.data()) s += x;
  return s;
}

ComplexMatrix separator(const ComplexMatrix& l) {
  require_square(l, "separator");
  const std::size_t n = l.rows();
  ComplexMatrix h(n);
  double total_imag = 0.0;
  for (const auto& x : l.data()) total_imag += x.imag();
  for (std::size_t k = 0; k < n; ++k) {
    double col_real = 0.0;
    for (std::size_t j = 0; j < n; ++j) col_real += l(j, k).real();
    h(k, k) = -col_real;
  }
  if (n >= 2) {
    const Complex i(0.0, 1.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      double col_imag = 0.0;
      for (std::size_t j = 0; j < n; ++j) col_imag += l(j, k).imag();
      const Complex hnk = -i * col_imag + (i / static_cast<double>(n)) * total_imag;
      h(n - 1, k) = hnk;
      h(k, n - 1) = std::conj(hnk);
    }
  }
  return h;
}

namespace {

double norm_inf(const ComplexMatrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    r = std::max(r, s);
  }
  return r;
}

struct LuFactors {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  double min_pivot = 0.0;
  double scale = 0.0;
};

LuFactors lu_factor(const ComplexMatrix& a) {
  require_square(a, "lu");
  const std::size_t n = a.rows();
  LuFactors f{a, std::vector<std::size_t>(n), 1,
              std::numeric_limits<double>::infinity(), max_abs(a)};
  std::iota(f.perm.begin(), f.perm.end(), 0);
  ComplexMatrix& lu = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        piv = i;
      }
    }
    f.min_pivot = std::min(f.min_pivot, best);
    if (best == 0.0) continue;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = lu(i, k) / lu(k, k);
      lu(i, k) = factor;
      if (factor == Complex(0.0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
    }
  }
  return f;
}

}  // namespace

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: row counts differ");
  const LuFactors f = lu_factor(a);
  if (f.min_pivot == 0.0 || f.min_pivot <= 1e-2 * kEps * f.scale) {
    throw SingularMatrix("solve: matrix is singular");
  }
  const std::size_t n = a.rows();
  ComplexMatrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b(f.perm[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Complex s = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x(j, c);
      x(ii, c) = s / f.lu(ii, ii);
    }
  }
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  return solve(a, ComplexMatrix::identity(a.rows()));
}

Complex determinant(const ComplexMatrix& a) {
  const LuFactors f = lu_factor(a);
  Complex d = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
  return d;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  require_square(m, "matrix_exp");
  const std::size_t n = m.rows();
  const double nrm = norm_inf(m);
  int squarings = 0;
  if (nrm > 0.5) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / 0.5))));
  const ComplexMatrix x = m * Complex(std::ldexp(1.0, -squarings));

  constexpr int q = 6;
  double c = 1.0;
  ComplexMatrix power = ComplexMatrix::identity(n);
  ComplexMatrix numer = ComplexMatrix::identity(n);
  ComplexMatrix denom = ComplexMatrix::identity(n);
  for (int k = 1; k <= q; ++k) {
    c = c * (q - k + 1) / (k * (2.0 * q - k + 1));
    power = power * x;
    numer += c * power;
    denom += ((k % 2 == 0) ? c : -c) * power;
  }
  ComplexMatrix e = solve(denom, numer);
  for (int s = 0; s < squarings; ++s) e = e * e;
  return e;
}

std::size_t numeric_rank(const ComplexMatrix& m, double rel_tol) {
  const double threshold = rel_tol * frobenius_norm(m);
  if (threshold == 0.0) return 0;
  ComplexMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t rank = 0;
  for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
    std::size_t pr = k, pc = k;
    double best = -1.0;
    for (std::size_t i = k; i < rows; ++i)
      for (std::size_t j = k; j < cols; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    if (best <= threshold) break;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(k, j), a(pr, j));
    for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, k), a(i, pc));
    for (std::size_t i = k + 1; i < rows; ++i) {
      const Complex factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < cols; ++j) a(i, j) -= factor * a(k, j);
    }
    ++rank;
  }
  return rank;
}

SingularValueDecomposition svd(const ComplexMatrix& m) {
  require_square(m, "svd");
  const std::size_t n = m.rows();
  ComplexMatrix w = m;
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto column_dot = [&](std::size_t p, std::size_t q) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::conj(w(i, p)) * w(i, q);
    return s;
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_dot(p, p).real();
        const double beta = column_dot(q, q).real();
        const Complex gamma = column_dot(p, q);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase_conj = std::conj(gamma / g);
        for (std::size_t i = 0; i < n; ++i) {
          w(i, q) *= phase_conj;
          v(i, q) *= phase_conj;
        }
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const Complex wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_dot(j, j).real());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SingularValueDecomposition r{ComplexMatrix(n), std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    r.sigma[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) {
      r.v(i, k) = v(i, j);
      r.u(i, k) = sigma[j] > 0.0 ? w(i, j) / sigma[j] : Complex(0.0);
    }
  }
  return r;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rel_tol) {
  const SingularValueDecomposition d = svd(m);
  const std::size_t n = m.rows();
  ComplexMatrix r(n);
  if (d.sigma.empty() || d.sigma.front() == 0.0) return r;
  const double cutoff = rel_tol * d.sigma.front();
  for (std::size_t k = 0; k < n; ++k) {
    if (d.sigma[k] <= cutoff) continue;
    const double inv = 1.0 / d.sigma[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r(i, j) += d.v(i, k) * inv * std::conj(d.u(j, k));
  }
  return r;
}

}  // namespace hamosc
