#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamosc/divergence.hpp"
#include "hamosc/matrix.hpp"

namespace hamosc {

enum class VerdictStatus { OscillatoryTrendCertified, Inconclusive, NotApplicable };

const char* verdict_status_name(VerdictStatus s);

struct HypothesisResult {
  std::string name;
  bool passed = false;
  std::string evidence;
  std::optional<double> witness_t;
};

struct NamedTrace {
  std::string name;
  DivergenceTrace trace;
};

struct CriterionVerdict {
  std::string criterion_id;
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::vector<HypothesisResult> hypotheses;
  std::vector<NamedTrace> traces;
  /// Solved matrices (F, H, Lambda) sampled at t0, for reporting.
  std::vector<std::pair<std::string, ComplexMatrix>> auxiliary;
  /// How ambiguous statements were read.
  std::vector<std::string> notes;

  const HypothesisResult* failed_hypothesis() const {
    for (const auto& h : hypotheses)
      if (!h.passed) return &h;
    return nullptr;
  }
  const NamedTrace* trace(const std::string& name) const {
    for (const auto& t : traces)
      if (t.name == name) return &t;
    return nullptr;
  }
};

/// Oscillatory iff every hypothesis passed and every trace diverges;
/// NotApplicable if a hypothesis failed; Inconclusive otherwise.
VerdictStatus settle(const CriterionVerdict& v);

}  // namespace hamosc
