#include "hamosc/ode.hpp"

#include <algorithm>
#include <cmath>

namespace hamosc {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeSolution integrate_ode(const OdeRhs& rhs, double t0, OdeState y0, double t_end,
                          const OdeConfig& cfg, const OdeHooks& hooks) {
  OdeSolution sol;
  const std::size_t m = y0.size();
  OdeState y = std::move(y0);
  double t = t0;
  sol.t.push_back(t);
  sol.y.push_back(y);
  if (t_end <= t0) return sol;

  OdeState k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), tmp(m), y5(m);
  rhs(t, y, k1);
  double h = std::min(cfg.h_initial, cfg.h_max);

  while (t < t_end) {
    if (sol.accepted + sol.rejected >= cfg.max_steps || h < cfg.h_min) {
      sol.status = OdeStatus::StepUnderflow;
      break;
    }
    const double h_free = h;
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < m; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < m; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < m; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                           a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < m; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y5, k7);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < m; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double r = std::abs(ei) / sc;
      if (!std::isfinite(r) || !std::isfinite(y5[i])) finite = false;
      err = std::max(err, r);
    }
    sol.last_h = h;
    if (!finite) {
      ++sol.rejected;
      h *= 0.25;
      continue;
    }
    const double t_new = last ? t_end : t + h;
    if (err > 1.0 || (hooks.accept && !hooks.accept(t_new, y5))) {
      ++sol.rejected;
      const double factor =
          err > 1.0 ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.5;
      h *= factor;
      continue;
    }
    ++sol.accepted;
    t = t_new;
    y.swap(y5);
    if (hooks.post_step) {
      hooks.post_step(t, y);
      rhs(t, y, k1);
    } else {
      k1.swap(k7);
    }
    sol.t.push_back(t);
    sol.y.push_back(y);
    if (hooks.stop && hooks.stop(t, y)) {
      sol.status = OdeStatus::Stopped;
      return sol;
    }
    const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
    h = std::min(cfg.h_max, (last ? h_free : h) * std::max(0.2, grow));
  }
  return sol;
}

}  // namespace hamosc
