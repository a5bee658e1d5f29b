#pragma once

#include <functional>
#include <vector>

#include "hamosc/matrix.hpp"

namespace hamosc {

/// Composite Simpson built from successive trapezoid halvings.
struct QuadratureConfig {
  /// Base panel width; the interval gets at least two panels.
  double h = 0.25;
  double atol = 1e-10;
  double rtol = 1e-10;
  int max_depth = 12;
};

struct QuadratureResult {
  double value = 0.0;
  /// |I_h - I_{h/2}| of the last refinement.
  double error_estimate = 0.0;
  bool converged = false;
};

/// Integral of f over [t0, t1]. DomainError from f propagates.
QuadratureResult integrate_scalar(const std::function<double(double)>& f, double t0,
                                  double t1, const QuadratureConfig& cfg = {});

struct MatrixQuadratureResult {
  ComplexMatrix value;
  double error_estimate = 0.0;
  bool converged = false;
};

/// Entrywise integral; convergence is judged on the Frobenius norm.
MatrixQuadratureResult integrate_matrix(const std::function<ComplexMatrix(double)>& f,
                                        double t0, double t1,
                                        const QuadratureConfig& cfg = {});

/// Running integrals of f from t0 to each of the ascending `points`,
/// computed segment by segment.
std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        double t0, const std::vector<double>& points,
                                        const QuadratureConfig& cfg = {});

std::vector<ComplexMatrix> cumulative_matrix_integral(
    const std::function<ComplexMatrix(double)>& f, double t0,
    const std::vector<double>& points, const QuadratureConfig& cfg = {});

}  // namespace hamosc
