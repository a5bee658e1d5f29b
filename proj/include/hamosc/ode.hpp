#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hamosc {

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dy)>;

struct OdeConfig {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_initial = 1e-3;
  double h_min = 1e-13;
  double h_max = 0.05;
  std::size_t max_steps = 5'000'000;
};

struct OdeHooks {
  /// Returning false rejects the step and halves h.
  std::function<bool(double t, const OdeState& y)> accept;
  /// Runs after every accepted step and may modify the state.
  std::function<void(double t, OdeState& y)> post_step;
  /// Returning true ends the integration after the current step.
  std::function<bool(double t, const OdeState& y)> stop;
};

enum class OdeStatus { Completed, Stopped, StepUnderflow };

struct OdeSolution {
  std::vector<double> t;
  std::vector<OdeState> y;
  OdeStatus status = OdeStatus::Completed;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Last step size attempted.
  double last_h = 0.0;
};

/// Dormand-Prince 5(4) with every accepted step recorded.
OdeSolution integrate_ode(const OdeRhs& rhs, double t0, OdeState y0, double t_end,
                          const OdeConfig& cfg = {}, const OdeHooks& hooks = {});

}  // namespace hamosc
