#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "hamosc/matrix.hpp"
#include "hamosc/ode.hpp"
#include "hamosc/problem.hpp"
#include "hamosc/scalar_riccati.hpp"

namespace hamosc {

/// Phi(t0) = phi0, Psi(t0) = y0 phi0 with y0 Hermitian.
struct ConjoinedInitialData {
  ComplexMatrix phi0;
  ComplexMatrix y0;

  static ConjoinedInitialData standard(std::size_t n);
  ComplexMatrix psi0() const { return y0 * phi0; }
  /// Throws SchemaError when shapes differ, y0 is not Hermitian or
  /// Phi0* Psi0 != Psi0* Phi0.
  void validate(std::size_t n) const;
};

struct DynamicsConfig {
  OdeConfig ode{};
  /// Accepted steps keep ||Phi*Psi - Psi*Phi|| <= conjoined_tol (1 + ||Phi*Psi||).
  double conjoined_tol = 1e-6;
  /// The state is divided by this factor once its largest entry exceeds it.
  double rescale_at = 1e100;
};

struct TrajectoryStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double max_conjoined_residual = 0.0;
  std::size_t rescalings = 0;
};

/// Samples of (Phi, Psi). Stored values equal the true solution divided by
/// exp(log_scale[i]); det_phi is the determinant of the stored Phi.
struct Trajectory {
  std::vector<double> t;
  std::vector<ComplexMatrix> phi;
  std::vector<ComplexMatrix> psi;
  std::vector<Complex> det_phi;
  std::vector<double> log_scale;
  TrajectoryStats stats;

  std::size_t size() const { return t.size(); }
};

/// Throws NumericalBreakdown on step underflow; DomainError from the
/// coefficients propagates.
Trajectory integrate_hamiltonian(const HamiltonianProblem& p, const ConjoinedInitialData& init,
                                 double t_end, const DynamicsConfig& cfg = {});

/// det Phi divided by the product of the column norms of [Phi; Psi]. Scale
/// free, bounded by 1 in modulus, and zero exactly where det Phi is.
Complex normalized_det(const ComplexMatrix& phi, const ComplexMatrix& psi);

struct DetZero {
  enum class Kind { SignChange, Dip };
  double t = 0.0;
  double width = 0.0;
  /// |normalized det| at t.
  double abs_min = 0.0;
  Kind kind = Kind::SignChange;
};

struct DetZeroList {
  std::vector<DetZero> zeros;
  /// Local minima of |det| that did not refine to a zero.
  std::vector<DetZero> suspected;

  std::vector<double> times() const;
};

struct ZeroSearchConfig {
  /// Grid minima below this fraction of the trailing median are refined.
  double dip_candidate = 0.05;
  /// A refined minimum is a zero when below this fraction of the median.
  double confirm = 1e-6;
  double merge = 1e-5;
  int median_window = 32;
  /// Tolerances for the local re-integration.
  double refine_rtol = 1e-12;
  double refine_atol = 1e-14;
};

/// Sign changes of Re det (real problems) and dips of |det|, each refined on
/// a re-integrated local segment.
DetZeroList find_det_zeros(const HamiltonianProblem& p, const Trajectory& traj,
                           const ZeroSearchConfig& zcfg = {}, const DynamicsConfig& cfg = {});

struct SimulationSummary {
  DetZeroList zeros;
  double t0 = 0.0;
  double t_end = 0.0;
  /// At least two zeros with the last one in the final third of the horizon.
  bool oscillation_observed = false;
};

SimulationSummary simulate(const HamiltonianProblem& p, const ConjoinedInitialData& init,
                           double t_end, const DynamicsConfig& cfg = {});

bool oscillation_observed(const std::vector<double>& zeros, double t0, double t_end);

struct MatrixRiccatiTrajectory {
  std::vector<double> t;
  std::vector<ComplexMatrix> y;
  /// Largest anti-Hermitian part removed by re-symmetrization.
  double max_discarded = 0.0;
  BlowUpReport blowup;
};

/// Y' + Y B Y + A* Y + Y A - C = 0. Blow-up when ||Y||_F exceeds
/// blowup_bound. Throws NumericalBreakdown on step underflow.
MatrixRiccatiTrajectory integrate_matrix_riccati(const HamiltonianProblem& p,
                                                 const ComplexMatrix& y0, double t_end,
                                                 const RiccatiConfig& cfg = {});

struct CorrespondenceCheck {
  /// max ||Psi Phi^{-1} - Y|| / (1 + ||Y||) while ||Y|| <= compare_bound.
  double max_residual = 0.0;
  std::optional<double> first_zero;
  std::optional<double> blowup_time;
  bool residual_ok = false;
  bool times_match = false;
  bool holds() const { return residual_ok && times_match; }
};

struct CorrespondenceConfig {
  double residual_tol = 1e-5;
  double time_tol = 1e-3;
  double compare_bound = 1e3;
  std::size_t max_compare_points = 400;
};

/// Integrates the Hamiltonian system and the Riccati equation from
/// Y0 = Psi0 Phi0^{-1} separately and compares them.
CorrespondenceCheck check_correspondence(const HamiltonianProblem& p,
                                         const ConjoinedInitialData& init, double t_end,
                                         const CorrespondenceConfig& ccfg = {},
                                         const DynamicsConfig& cfg = {});

/// Columns t, phi_re_i_j, phi_im_i_j (row-major), det_re, det_im, log_scale.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace hamosc
