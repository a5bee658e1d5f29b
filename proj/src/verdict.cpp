#include "hamosc/verdict.hpp"

namespace hamosc {

const char* verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::OscillatoryTrendCertified: return "OscillatoryTrendCertified";
    case VerdictStatus::Inconclusive: return "Inconclusive";
    case VerdictStatus::NotApplicable: return "NotApplicable";
  }
  return "?";
}

VerdictStatus settle(const CriterionVerdict& v) {
  if (v.failed_hypothesis()) return VerdictStatus::NotApplicable;
  if (v.traces.empty()) return VerdictStatus::Inconclusive;
  for (const auto& t : v.traces) {
    if (t.trace.classification != Trend::DivergesToPlusInfinity) return VerdictStatus::Inconclusive;
  }
  return VerdictStatus::OscillatoryTrendCertified;
}

}  // namespace hamosc
