#include "hamosc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hamosc {

namespace {

// Shared driver for scalar and matrix integrands. V needs +, scalar *, and a
// norm function.
template <class V, class F, class Norm>
std::tuple<V, double, bool> simpson(const F& f, double t0, double t1,
                                    const QuadratureConfig& cfg, V zero, Norm norm) {
  if (t1 == t0) return {zero, 0.0, true};
  const double len = t1 - t0;
  std::size_t panels = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(std::abs(len) / cfg.h)));
  double h = len / static_cast<double>(panels);

  // Trapezoid sum T_N = h * (f0/2 + f1 + ... + fN/2).
  V ends = f(t0) + f(t1);
  V interior = zero;
  for (std::size_t k = 1; k < panels; ++k) interior = interior + f(t0 + k * h);
  V trap = (ends * 0.5 + interior) * h;

  V simpson_prev = zero;
  bool have_prev = false;
  double err = 0.0;
  for (int depth = 0; depth <= cfg.max_depth; ++depth) {
    V mids = zero;
    for (std::size_t k = 0; k < panels; ++k) mids = mids + f(t0 + (k + 0.5) * h);
    interior = interior + mids;
    panels *= 2;
    h *= 0.5;
    V trap_next = (ends * 0.5 + interior) * h;
    V simpson_now = (trap_next * 4.0 - trap) * (1.0 / 3.0);
    trap = trap_next;
    if (have_prev) {
      err = norm(simpson_now + simpson_prev * -1.0);
      if (err <= cfg.atol + cfg.rtol * norm(simpson_now)) return {simpson_now, err, true};
    }
    simpson_prev = simpson_now;
    have_prev = true;
  }
  return {simpson_prev, err, false};
}

}  // namespace

QuadratureResult integrate_scalar(const std::function<double(double)>& f, double t0,
                                  double t1, const QuadratureConfig& cfg) {
  auto [v, err, ok] = simpson<double>(f, t0, t1, cfg, 0.0,
                                      [](double x) { return std::abs(x); });
  return {v, err, ok};
}

MatrixQuadratureResult integrate_matrix(const std::function<ComplexMatrix(double)>& f,
                                        double t0, double t1,
                                        const QuadratureConfig& cfg) {
  const ComplexMatrix probe = f(t0);
  auto [v, err, ok] = simpson<ComplexMatrix>(
      f, t0, t1, cfg, ComplexMatrix(probe.rows(), probe.cols()),
      [](const ComplexMatrix& m) { return frobenius_norm(m); });
  return {v, err, ok};
}

std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        double t0, const std::vector<double>& points,
                                        const QuadratureConfig& cfg) {
  std::vector<double> out;
  out.reserve(points.size());
  double acc = 0.0;
  double prev = t0;
  for (double t : points) {
    acc += integrate_scalar(f, prev, t, cfg).value;
    out.push_back(acc);
    prev = t;
  }
  return out;
}

std::vector<ComplexMatrix> cumulative_matrix_integral(
    const std::function<ComplexMatrix(double)>& f, double t0,
    const std::vector<double>& points, const QuadratureConfig& cfg) {
  std::vector<ComplexMatrix> out;
  out.reserve(points.size());
  ComplexMatrix acc;
  double prev = t0;
  for (double t : points) {
    ComplexMatrix piece = integrate_matrix(f, prev, t, cfg).value;
    if (acc.rows() == 0) {
      acc = piece;
    } else {
      acc += piece;
    }
    out.push_back(acc);
    prev = t;
  }
  return out;
}

}  // namespace hamosc
