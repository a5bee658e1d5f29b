#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hamosc {

enum class Trend { DivergesToPlusInfinity, Bounded, Undetermined };

const char* trend_name(Trend trend);

/// Finite-horizon evidence for "f(t) -> +infinity". A trace is certified as
/// divergent when the final value reaches the threshold, the trailing
/// `window` checkpoints strictly increase, and the growth over the second
/// half of the horizon is at least the growth over the first half.
struct DivergenceTrace {
  std::vector<double> checkpoints;
  std::vector<double> values;
  Trend classification = Trend::Undetermined;
  double threshold = 0.0;
  int window = 8;
  /// Set when the quantity could not be evaluated.
  std::optional<double> failed_at;
  std::string note;

  double value_at_end() const { return values.empty() ? 0.0 : values.back(); }
  double horizon() const { return checkpoints.empty() ? 0.0 : checkpoints.back(); }
};

struct DivergenceConfig {
  /// Horizon length T - t0.
  double horizon = 200.0;
  /// Absolute threshold; when unset the threshold is
  /// theta_factor * (1 + |value(t0)|).
  std::optional<double> theta;
  double theta_factor = 10.0;
  int window = 8;
  int checkpoints = 64;

  double threshold_for(double initial_value) const {
    return theta ? *theta : theta_factor * (1.0 + std::abs(initial_value));
  }
};

/// `checkpoints` uniform points t0 < t_1 < ... < t_k = T.
std::vector<double> uniform_checkpoints(double t0, double t_end, int count);

/// Classifies precomputed values. `initial` is the value at t0.
DivergenceTrace classify_values(std::vector<double> checkpoints,
                                std::vector<double> values, double initial,
                                double theta, int window);

/// Evaluates f at the checkpoints and classifies. Evaluation failures give
/// Undetermined with the failing t recorded.
DivergenceTrace classify_divergence(const std::function<double(double)>& f, double t0,
                                    double t_end, double theta, int window,
                                    int checkpoints = 64);

}  // namespace hamosc
