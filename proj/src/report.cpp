#include "hamosc/report.hpp"

#include <fmt/format.h>

namespace hamosc {

using nlohmann::json;

namespace {

std::string num(double x) { return fmt::format("{:.6g}", x); }

const char* zero_kind(DetZero::Kind k) {
  return k == DetZero::Kind::SignChange ? "sign-change" : "dip";
}

json trace_json(const NamedTrace& t) {
  json j{{"name", t.name},
         {"T", t.trace.horizon()},
         {"value_at_T", t.trace.value_at_end()},
         {"classification", trend_name(t.trace.classification)},
         {"threshold", t.trace.threshold}};
  if (t.trace.failed_at) j["failed_at"] = *t.trace.failed_at;
  if (!t.trace.note.empty()) j["note"] = t.trace.note;
  return j;
}

}  // namespace

json report_to_json(const RunAllReport& r) {
  json criteria = json::array();
  for (const auto& v : r.verdicts) {
    json hyps = json::array();
    for (const auto& h : v.hypotheses) {
      json hj{{"name", h.name}, {"passed", h.passed}, {"evidence", h.evidence}};
      if (h.witness_t) hj["witness_t"] = *h.witness_t;
      hyps.push_back(std::move(hj));
    }
    json traces = json::array();
    for (const auto& t : v.traces) traces.push_back(trace_json(t));
    json cj{{"id", v.criterion_id},
            {"status", verdict_status_name(v.status)},
            {"hypotheses", std::move(hyps)},
            {"traces", std::move(traces)}};
    if (!v.notes.empty()) cj["notes"] = v.notes;
    criteria.push_back(std::move(cj));
  }
  json out{{"problem", r.problem}, {"criteria", std::move(criteria)}};
  if (r.simulation) {
    json zeros = json::array();
    for (const auto& z : r.simulation->zeros.zeros) zeros.push_back(z.t);
    out["simulation"] = {{"zeros", std::move(zeros)},
                         {"horizon", r.simulation->t_end},
                         {"oscillation_observed", r.simulation->oscillation_observed}};
  } else {
    out["simulation"] = {{"zeros", json::array()}, {"horizon", nullptr},
                         {"error", r.simulation_error}};
  }
  out["disagreements"] = r.disagreements;
  return out;
}

std::string verdict_table(const RunAllReport& r) {
  std::string out = fmt::format("problem: {}\n", r.problem);
  out += fmt::format("{:<8}{:<28}{}\n", "id", "status", "detail");
  for (const auto& v : r.verdicts) {
    std::string detail;
    if (const auto* h = v.failed_hypothesis()) {
      detail = h->name + ": " + h->evidence;
    } else {
      for (const auto& t : v.traces) {
        if (!detail.empty()) detail += "; ";
        detail += fmt::format("{}(T={}) = {} [{}]", t.name, num(t.trace.horizon()),
                              num(t.trace.value_at_end()), trend_name(t.trace.classification));
      }
    }
    out += fmt::format("{:<8}{:<28}{}\n", v.criterion_id, verdict_status_name(v.status), detail);
  }
  if (r.simulation) {
    out += fmt::format("simulation: {} zeros on [{}, {}], oscillation {}\n",
                       r.simulation->zeros.zeros.size(), num(r.simulation->t0),
                       num(r.simulation->t_end),
                       r.simulation->oscillation_observed ? "observed" : "not observed");
  } else if (!r.simulation_error.empty()) {
    out += "simulation failed: " + r.simulation_error + "\n";
  }
  for (const auto& d : r.disagreements)
    out += fmt::format("WARNING: {} certifies oscillation but the simulation does not\n", d);
  return out;
}

std::string detailed_report(const RunAllReport& r) {
  std::string out = verdict_table(r);
  for (const auto& v : r.verdicts) {
    out += fmt::format("\n== {} ({})\n", v.criterion_id, verdict_status_name(v.status));
    for (const auto& h : v.hypotheses) {
      out += fmt::format("  [{}] {}", h.passed ? "ok" : "FAIL", h.name);
      if (!h.evidence.empty()) out += ": " + h.evidence;
      if (h.witness_t) out += fmt::format(" (t = {})", num(*h.witness_t));
      out += "\n";
    }
    for (const auto& t : v.traces) {
      out += fmt::format("  trace {}: {} threshold {}\n", t.name,
                         trend_name(t.trace.classification), num(t.trace.threshold));
      const std::size_t k = t.trace.values.size();
      for (std::size_t i = k > 4 ? k - 4 : 0; i < k; ++i)
        out += fmt::format("    t = {:<10} {}\n", num(t.trace.checkpoints[i]),
                           num(t.trace.values[i]));
      if (t.trace.failed_at) out += fmt::format("    failed at t = {}\n", num(*t.trace.failed_at));
      if (!t.trace.note.empty()) out += "    " + t.trace.note + "\n";
    }
    for (const auto& [name, m] : v.auxiliary) {
      out += fmt::format("  {} at t0:\n", name);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        out += "   ";
        for (std::size_t j = 0; j < m.cols(); ++j) {
          const Complex z = m(i, j);
          out += z.imag() == 0.0 ? fmt::format(" {:>10}", num(z.real()))
                                 : fmt::format(" {:>10}{:+.6g}i", num(z.real()), z.imag());
        }
        out += "\n";
      }
    }
    for (const auto& note : v.notes) out += "  note: " + note + "\n";
  }
  if (r.simulation) out += "\n" + simulation_text(*r.simulation);
  return out;
}

std::string simulation_text(const SimulationSummary& s) {
  if (s.zeros.zeros.empty()) {
    std::string out = fmt::format("no zeros on [{},{}]\n", num(s.t0), num(s.t_end));
    for (const auto& z : s.zeros.suspected) out += fmt::format("suspected dip at t = {}\n", num(z.t));
    return out;
  }
  std::string out = fmt::format("{} zeros on [{},{}]\n", s.zeros.zeros.size(), num(s.t0),
                                num(s.t_end));
  for (const auto& z : s.zeros.zeros)
    out += fmt::format("  t = {:.10f}  [{:.10f}, {:.10f}]  |det| = {:.3g}  {}\n", z.t,
                       z.t - z.width / 2, z.t + z.width / 2, z.abs_min, zero_kind(z.kind));
  for (const auto& z : s.zeros.suspected) out += fmt::format("suspected dip at t = {}\n", num(z.t));
  out += fmt::format("oscillation {}\n", s.oscillation_observed ? "observed" : "not observed");
  return out;
}

std::string properties_text(const std::vector<PropertyResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += fmt::format("{:<4} {:<20} {:>5} cases  worst margin {:>10}  {}\n",
                       r.passed() ? "ok" : "FAIL", r.suite, r.cases, num(r.worst_margin),
                       r.statement);
    if (r.first_failure)
      out += fmt::format("     first failure: seed {} case {}\n", r.first_failure->seed,
                         r.first_failure->case_index);
  }
  return out;
}

}  // namespace hamosc
