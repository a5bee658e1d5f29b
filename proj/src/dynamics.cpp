#include "hamosc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "hamosc/error.hpp"

namespace hamosc {

namespace {

struct Coefficients {
  ComplexMatrix a, a_adj, b, c;
};

/// Evaluates A, B, C, caching them for constant problems.
class CoefficientSource {
 public:
  explicit CoefficientSource(const HamiltonianProblem& p) : p_(p) {
    if (p.is_constant()) cached_ = load(p.t0);
  }
  Coefficients operator()(double t) const { return p_.is_constant() ? cached_ : load(t); }

 private:
  Coefficients load(double t) const {
    Coefficients k;
    k.a = p_.a(t);
    k.a_adj = k.a.adjoint();
    k.b = p_.b(t);
    k.c = p_.c(t);
    return k;
  }
  const HamiltonianProblem& p_;
  Coefficients cached_;
};

void pack(const ComplexMatrix& m, OdeState& out, std::size_t offset) {
  const auto d = m.data();
  for (std::size_t k = 0; k < d.size(); ++k) {
    out[offset + 2 * k] = d[k].real();
    out[offset + 2 * k + 1] = d[k].imag();
  }
}

ComplexMatrix unpack(const OdeState& s, std::size_t n, std::size_t offset) {
  ComplexMatrix m(n);
  auto d = m.data();
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = Complex(s[offset + 2 * k], s[offset + 2 * k + 1]);
  }
  return m;
}

OdeState pack_pair(const ComplexMatrix& phi, const ComplexMatrix& psi) {
  const std::size_t n = phi.rows();
  OdeState s(4 * n * n);
  pack(phi, s, 0);
  pack(psi, s, 2 * n * n);
  return s;
}

OdeRhs hamiltonian_rhs(const CoefficientSource& coeffs, std::size_t n) {
  return [&coeffs, n](double t, const OdeState& s, OdeState& d) {
    const ComplexMatrix phi = unpack(s, n, 0);
    const ComplexMatrix psi = unpack(s, n, 2 * n * n);
    const Coefficients k = coeffs(t);
    pack(k.a * phi + k.b * psi, d, 0);
    pack(k.c * phi - k.a_adj * psi, d, 2 * n * n);
  };
}

double conjoined_residual(const ComplexMatrix& phi, const ComplexMatrix& psi,
                          double* scale = nullptr) {
  const ComplexMatrix w = phi.adjoint() * psi;
  if (scale) *scale = frobenius_norm(w);
  return frobenius_norm(w - w.adjoint());
}

double max_abs_state(const OdeState& s) {
  double m = 0.0;
  for (double v : s) m = std::max(m, std::abs(v));
  return m;
}

double trailing_median(const std::vector<double>& v, std::size_t end, int window) {
  const std::size_t w = static_cast<std::size_t>(std::max(1, window));
  const std::size_t begin = end > w ? end - w : 0;
  std::vector<double> part(v.begin() + static_cast<long>(begin),
                           v.begin() + static_cast<long>(std::max(end, begin + 1)));
  std::nth_element(part.begin(), part.begin() + static_cast<long>(part.size() / 2),
                   part.end());
  return part[part.size() / 2];
}

}  // namespace

ConjoinedInitialData ConjoinedInitialData::standard(std::size_t n) {
  return {ComplexMatrix::identity(n), ComplexMatrix::zero(n)};
}

void ConjoinedInitialData::validate(std::size_t n) const {
  if (phi0.rows() != n || phi0.cols() != n || y0.rows() != n || y0.cols() != n) {
    throw SchemaError(fmt::format("initial data must be {}x{}", n, n));
  }
  if (!all_finite(phi0) || !all_finite(y0)) throw SchemaError("initial data is not finite");
  if (hermitian_residual(y0) > default_tolerances().hermitian * (1.0 + max_abs(y0))) {
    throw SchemaError("Y0 is not Hermitian");
  }
  double scale = 0.0;
  const double r = conjoined_residual(phi0, psi0(), &scale);
  if (r > 1e-12 * (1.0 + scale)) {
    throw SchemaError(fmt::format("initial data is not conjoined (residual {:.3g})", r));
  }
}

Trajectory integrate_hamiltonian(const HamiltonianProblem& p, const ConjoinedInitialData& init,
                                 double t_end, const DynamicsConfig& cfg) {
  if (!(t_end > p.t0)) throw DimensionMismatch("t_end must exceed t0");
  const std::size_t n = p.n;
  init.validate(n);
  const CoefficientSource coeffs(p);
  const OdeRhs rhs = hamiltonian_rhs(coeffs, n);

  Trajectory tr;
  double log_scale = 0.0;
  std::vector<double> logs{0.0};
  OdeHooks hooks;
  hooks.accept = [&](double, const OdeState& s) {
    double scale = 0.0;
    const double r = conjoined_residual(unpack(s, n, 0), unpack(s, n, 2 * n * n), &scale);
    return r <= cfg.conjoined_tol * (1.0 + scale);
  };
  hooks.post_step = [&](double, OdeState& s) {
    const double m = max_abs_state(s);
    if (m > cfg.rescale_at) {
      for (double& v : s) v /= m;
      log_scale += std::log(m);
      ++tr.stats.rescalings;
    }
    logs.push_back(log_scale);
  };
  const OdeSolution sol =
      integrate_ode(rhs, p.t0, pack_pair(init.phi0, init.psi0()), t_end, cfg.ode, hooks);
  if (sol.status == OdeStatus::StepUnderflow) {
    throw NumericalBreakdown("Hamiltonian integration step size underflow", sol.t.back());
  }
  tr.t = sol.t;
  tr.log_scale = std::move(logs);
  tr.stats.accepted = sol.accepted;
  tr.stats.rejected = sol.rejected;
  for (const OdeState& s : sol.y) {
    ComplexMatrix phi = unpack(s, n, 0);
    ComplexMatrix psi = unpack(s, n, 2 * n * n);
    double scale = 0.0;
    const double r = conjoined_residual(phi, psi, &scale);
    tr.stats.max_conjoined_residual =
        std::max(tr.stats.max_conjoined_residual, r / (1.0 + scale));
    tr.det_phi.push_back(determinant(phi));
    tr.phi.push_back(std::move(phi));
    tr.psi.push_back(std::move(psi));
  }
  return tr;
}

Complex normalized_det(const ComplexMatrix& phi, const ComplexMatrix& psi) {
  const std::size_t n = phi.rows();
  double denom = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(phi(i, j)) + std::norm(psi(i, j));
    denom *= std::sqrt(s);
  }
  if (denom == 0.0) return 0.0;
  return determinant(phi) / denom;
}

std::vector<double> DetZeroList::times() const {
  std::vector<double> out;
  for (const auto& z : zeros) out.push_back(z.t);
  return out;
}

DetZeroList find_det_zeros(const HamiltonianProblem& p, const Trajectory& traj,
                           const ZeroSearchConfig& zc, const DynamicsConfig& cfg) {
  DetZeroList out;
  const std::size_t count = traj.size();
  if (count < 2) return out;
  const std::size_t n = p.n;
  const CoefficientSource coeffs(p);
  const OdeRhs rhs = hamiltonian_rhs(coeffs, n);
  OdeConfig fine = cfg.ode;
  fine.rtol = zc.refine_rtol;
  fine.atol = zc.refine_atol;

  std::vector<Complex> r(count);
  std::vector<double> mag(count);
  double max_im = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    r[i] = normalized_det(traj.phi[i], traj.psi[i]);
    mag[i] = std::abs(r[i]);
    max_im = std::max(max_im, std::abs(r[i].imag()));
  }
  const bool real_det = p.is_real() || max_im <= 1e-8;

  // Normalized det at s, integrating from grid point i.
  auto det_at = [&](std::size_t i, double s) -> Complex {
    if (s <= traj.t[i]) return r[i];
    OdeConfig c = fine;
    c.h_initial = std::min(c.h_max, s - traj.t[i]);
    const OdeSolution part =
        integrate_ode(rhs, traj.t[i], pack_pair(traj.phi[i], traj.psi[i]), s, c);
    const OdeState& y = part.y.back();
    return normalized_det(unpack(y, n, 0), unpack(y, n, 2 * n * n));
  };

  std::vector<DetZero> found;
  std::vector<bool> bracketed(count, false);
  if (real_det) {
    for (std::size_t i = 1; i < count; ++i) {
      const double f0 = r[i - 1].real();
      const double f1 = r[i].real();
      if (f1 == 0.0) {
        found.push_back({traj.t[i], 0.0, 0.0, DetZero::Kind::SignChange});
        bracketed[i] = true;
        continue;
      }
      if (f0 == 0.0 || (f0 > 0.0) == (f1 > 0.0)) continue;
      double lo = traj.t[i - 1];
      double hi = traj.t[i];
      while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        const double fm = det_at(i - 1, mid).real();
        if ((fm > 0.0) == (f0 > 0.0) && fm != 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double tz = 0.5 * (lo + hi);
      found.push_back({tz, hi - lo, std::abs(det_at(i - 1, tz)), DetZero::Kind::SignChange});
      bracketed[i - 1] = bracketed[i] = true;
    }
  }

  // Even-order zeros show up only as dips of |det|.
  constexpr double golden = 0.6180339887498949;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    if (!(mag[i] < mag[i - 1] && mag[i] <= mag[i + 1])) continue;
    if (bracketed[i] || bracketed[i + 1]) continue;
    const double scale = trailing_median(mag, i, zc.median_window);
    if (!(mag[i] < zc.dip_candidate * scale)) continue;
    auto f = [&](double s) { return std::abs(det_at(i - 1, s)); };
    double a = traj.t[i - 1];
    double b = traj.t[i + 1];
    double c = b - golden * (b - a);
    double d = a + golden * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-10 * std::max(1.0, std::abs(b))) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - golden * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + golden * (b - a);
        fd = f(d);
      }
    }
    const double tz = 0.5 * (a + b);
    const DetZero z{tz, b - a, std::min(fc, fd), DetZero::Kind::Dip};
    if (z.abs_min <= zc.confirm * scale) {
      found.push_back(z);
    } else {
      out.suspected.push_back(z);
    }
  }

  std::sort(found.begin(), found.end(),
            [](const DetZero& x, const DetZero& y) { return x.t < y.t; });
  for (const DetZero& z : found) {
    if (!out.zeros.empty() && z.t - out.zeros.back().t < zc.merge) {
      DetZero& prev = out.zeros.back();
      if (prev.kind != DetZero::Kind::SignChange &&
          (z.kind == DetZero::Kind::SignChange || z.abs_min < prev.abs_min)) {
        prev = z;
      }
      continue;
    }
    out.zeros.push_back(z);
  }
  return out;
}

bool oscillation_observed(const std::vector<double>& zeros, double t0, double t_end) {
  return zeros.size() >= 2 && zeros.back() >= t0 + (2.0 / 3.0) * (t_end - t0);
}

SimulationSummary simulate(const HamiltonianProblem& p, const ConjoinedInitialData& init,
                           double t_end, const DynamicsConfig& cfg) {
  SimulationSummary s;
  s.t0 = p.t0;
  s.t_end = t_end;
  const Trajectory tr = integrate_hamiltonian(p, init, t_end, cfg);
  s.zeros = find_det_zeros(p, tr, {}, cfg);
  s.oscillation_observed = oscillation_observed(s.zeros.times(), p.t0, t_end);
  return s;
}

MatrixRiccatiTrajectory integrate_matrix_riccati(const HamiltonianProblem& p,
                                                 const ComplexMatrix& y0, double t_end,
                                                 const RiccatiConfig& cfg) {
  if (!(t_end > p.t0)) throw DimensionMismatch("t_end must exceed t0");
  const std::size_t n = p.n;
  if (y0.rows() != n || y0.cols() != n) throw DimensionMismatch("Y0 has the wrong shape");
  const CoefficientSource coeffs(p);
  const OdeRhs rhs = [&](double t, const OdeState& s, OdeState& d) {
    const ComplexMatrix y = unpack(s, n, 0);
    const Coefficients k = coeffs(t);
    pack(k.c - y * k.b * y - k.a_adj * y - y * k.a, d, 0);
  };
  MatrixRiccatiTrajectory out;
  OdeHooks hooks;
  hooks.accept = [&](double, const OdeState& s) {
    const ComplexMatrix y = unpack(s, n, 0);
    return frobenius_norm(y - y.adjoint()) <= 1e-6 * frobenius_norm(y) + 1e-14;
  };
  hooks.post_step = [&](double, OdeState& s) {
    const ComplexMatrix y = unpack(s, n, 0);
    const ComplexMatrix h = hermitian_part(y);
    out.max_discarded = std::max(out.max_discarded, max_abs(y - h));
    pack(h, s, 0);
  };
  hooks.stop = [&](double, const OdeState& s) {
    return frobenius_norm(unpack(s, n, 0)) > cfg.blowup_bound;
  };
  OdeState start(2 * n * n);
  pack(hermitian_part(y0), start, 0);
  OdeConfig ode = cfg.ode;
  ode.h_min = std::min(ode.h_min, 1e-15);
  const OdeSolution sol = integrate_ode(rhs, p.t0, start, t_end, ode, hooks);
  if (sol.status == OdeStatus::StepUnderflow) {
    throw NumericalBreakdown("Riccati integration step size underflow", sol.t.back());
  }
  out.t = sol.t;
  for (const OdeState& s : sol.y) out.y.push_back(unpack(s, n, 0));

  BlowUpReport& rep = out.blowup;
  if (sol.status == OdeStatus::Completed) {
    rep.max_existence_right_end = t_end;
    return out;
  }
  // ||Y|| behaves like c / (t* - t) near the pole.
  const std::size_t k = out.t.size();
  const double t2 = out.t[k - 1];
  const double u2 = 1.0 / frobenius_norm(out.y[k - 1]);
  double t_star = t2;
  if (k >= 2) {
    const double t1 = out.t[k - 2];
    const double u1 = 1.0 / frobenius_norm(out.y[k - 2]);
    if (u2 != u1) t_star = t2 - u2 * (t2 - t1) / (u2 - u1);
  }
  t_star = std::max(t_star, t2);
  rep.status = BlowUpReport::Status::BlowUp;
  rep.t_star = t_star;
  rep.direction = out.y.back().trace().real() > 0 ? 1 : -1;
  rep.max_existence_right_end = t2;
  rep.bracket_width = t_star - t2;
  return out;
}

CorrespondenceCheck check_correspondence(const HamiltonianProblem& p,
                                         const ConjoinedInitialData& init, double t_end,
                                         const CorrespondenceConfig& cc,
                                         const DynamicsConfig& cfg) {
  init.validate(p.n);
  const std::size_t n = p.n;
  const ComplexMatrix y0 = hermitian_part(init.psi0() * inverse(init.phi0));

  const Trajectory tr = integrate_hamiltonian(p, init, t_end, cfg);
  const DetZeroList zeros = find_det_zeros(p, tr, {}, cfg);
  RiccatiConfig rc;
  rc.ode = cfg.ode;
  const MatrixRiccatiTrajectory ric = integrate_matrix_riccati(p, y0, t_end, rc);

  CorrespondenceCheck out;
  if (!zeros.zeros.empty()) out.first_zero = zeros.zeros.front().t;
  if (ric.blowup.blew_up()) out.blowup_time = ric.blowup.t_star;
  if (out.first_zero && out.blowup_time) {
    out.times_match = std::abs(*out.first_zero - *out.blowup_time) <= cc.time_tol;
  } else {
    out.times_match = !out.first_zero && !out.blowup_time;
  }

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ric.t.size(); ++i) {
    if (out.first_zero && ric.t[i] >= *out.first_zero) break;
    if (frobenius_norm(ric.y[i]) > cc.compare_bound) break;
    idx.push_back(i);
  }
  const std::size_t stride = std::max<std::size_t>(1, idx.size() / cc.max_compare_points);
  const CoefficientSource coeffs(p);
  const OdeRhs rhs = hamiltonian_rhs(coeffs, n);
  for (std::size_t k = 0; k < idx.size(); k += stride) {
    const double t = ric.t[idx[k]];
    // Advance the Hamiltonian solution from its last grid point before t.
    const auto it = std::upper_bound(tr.t.begin(), tr.t.end(), t);
    const std::size_t j = static_cast<std::size_t>(std::distance(tr.t.begin(), it)) - 1;
    ComplexMatrix phi = tr.phi[j];
    ComplexMatrix psi = tr.psi[j];
    if (t > tr.t[j]) {
      OdeConfig c = cfg.ode;
      c.h_initial = std::min(c.h_max, t - tr.t[j]);
      const OdeSolution part = integrate_ode(rhs, tr.t[j], pack_pair(phi, psi), t, c);
      phi = unpack(part.y.back(), n, 0);
      psi = unpack(part.y.back(), n, 2 * n * n);
    }
    const ComplexMatrix y_lin = psi * inverse(phi);
    const ComplexMatrix& y = ric.y[idx[k]];
    out.max_residual =
        std::max(out.max_residual, frobenius_norm(y_lin - y) / (1.0 + frobenius_norm(y)));
  }
  out.residual_ok = out.max_residual <= cc.residual_tol;
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.size() == 0) return;
  const std::size_t n = traj.phi.front().rows();
  out << "t";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out << fmt::format(",phi_re_{}_{},phi_im_{}_{}", i + 1, j + 1, i + 1, j + 1);
  out << ",det_re,det_im,log_scale\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << fmt::format("{:.17g}", traj.t[k]);
    for (const Complex& z : traj.phi[k].data()) {
      out << fmt::format(",{:.17g},{:.17g}", z.real(), z.imag());
    }
    out << fmt::format(",{:.17g},{:.17g},{:.17g}\n", traj.det_phi[k].real(),
                       traj.det_phi[k].imag(), traj.log_scale[k]);
  }
}

}  // namespace hamosc
