#include "hamosc/divergence.hpp"

#include <cmath>
#include <exception>

#include <fmt/format.h>

namespace hamosc {

const char* trend_name(Trend trend) {
  switch (trend) {
    case Trend::DivergesToPlusInfinity: return "DivergesToPlusInfinity";
    case Trend::Bounded: return "Bounded";
    case Trend::Undetermined: return "Undetermined";
  }
  return "?";
}

std::vector<double> uniform_checkpoints(double t0, double t_end, int count) {
  std::vector<double> pts;
  pts.reserve(count);
  for (int k = 1; k <= count; ++k) {
    pts.push_back(k == count ? t_end : t0 + (t_end - t0) * k / count);
  }
  return pts;
}

DivergenceTrace classify_values(std::vector<double> checkpoints,
                                std::vector<double> values, double initial,
                                double theta, int window) {
  DivergenceTrace trace;
  trace.checkpoints = std::move(checkpoints);
  trace.values = std::move(values);
  trace.threshold = theta;
  trace.window = window;
  const std::size_t k = trace.values.size();
  if (k == 0) {
    trace.note = "no checkpoints";
    return trace;
  }
  for (double v : trace.values) {
    if (!std::isfinite(v)) {
      trace.note = "non-finite value";
      return trace;
    }
  }
  const double last = trace.values.back();
  if (last < theta) {
    trace.classification = Trend::Bounded;
    trace.note = fmt::format("final value {:.6g} below threshold {:.6g}", last, theta);
    return trace;
  }
  const std::size_t w = std::min<std::size_t>(std::max(window, 2), k);
  for (std::size_t i = k - w + 1; i < k; ++i) {
    if (!(trace.values[i] > trace.values[i - 1])) {
      trace.note = fmt::format("not increasing over the trailing {} checkpoints", w);
      return trace;
    }
  }
  // Increment over the second half must at least match the first half.
  const double mid = trace.values[(k - 1) / 2] - initial;
  const double full = last - initial;
  if (mid > 0.0 && full < 2.0 * mid * (1.0 - 1e-9)) {
    trace.note = fmt::format("growth {:.6g} is less than twice the midpoint growth {:.6g}",
                             full, mid);
    return trace;
  }
  trace.classification = Trend::DivergesToPlusInfinity;
  return trace;
}

DivergenceTrace classify_divergence(const std::function<double(double)>& f, double t0,
                                    double t_end, double theta, int window,
                                    int checkpoints) {
  std::vector<double> pts = uniform_checkpoints(t0, t_end, checkpoints);
  std::vector<double> vals;
  vals.reserve(pts.size());
  double initial = 0.0;
  double current = t0;
  try {
    initial = f(t0);
    for (double t : pts) {
      current = t;
      vals.push_back(f(t));
    }
  } catch (const std::exception& e) {
    DivergenceTrace trace;
    trace.failed_at = current;
    trace.checkpoints = std::move(pts);
    trace.values = std::move(vals);
    trace.threshold = theta;
    trace.window = window;
    trace.note = e.what();
    return trace;
  }
  return classify_values(std::move(pts), std::move(vals), initial, theta, window);
}

}  // namespace hamosc
