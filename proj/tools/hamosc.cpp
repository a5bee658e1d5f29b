// hamosc: oscillation criteria and simulation for linear Hamiltonian systems.
//
// Exit codes: 0 ok, 1 property violation, 2 input error, 3 numerical breakdown.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "hamosc/catalog.hpp"
#include "hamosc/criteria.hpp"
#include "hamosc/dynamics.hpp"
#include "hamosc/error.hpp"
#include "hamosc/expr.hpp"
#include "hamosc/problem.hpp"
#include "hamosc/properties.hpp"
#include "hamosc/report.hpp"

namespace {

using namespace hamosc;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;
constexpr int kBreakdown = 3;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Loaded {
  HamiltonianProblem problem;
  const CatalogEntry* entry = nullptr;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

Loaded load(const std::string& source) {
  if (const CatalogEntry* e = find_catalog_entry(source)) return {e->problem, e};
  if (std::filesystem::exists(source)) return {load_problem_file(source), nullptr};
  throw InputError("'" + source + "' is neither a problem file nor a catalog entry");
}

// A constant matrix document ({"entries": ...}) evaluated at t0.
ComplexMatrix constant_matrix_file(const std::string& path, std::size_t n, double t0,
                                   const std::string& name) {
  const MatrixFunction m = matrix_function_from_json(read_json_file(path), n, name);
  if (!m.is_constant()) throw InputError(name + " in " + path + " must be constant");
  return m(t0);
}

struct CheckOptions {
  std::string problem;
  std::string json_path;
  std::optional<double> horizon;
  std::optional<double> theta;
  std::optional<int> window;
  std::string functional = "trace";
  std::string lambda_file;
  std::optional<std::string> alpha, beta, gamma;
  bool no_simulate = false;
};

void add_check_flags(CLI::App* cmd, CheckOptions& o) {
  cmd->add_option("problem", o.problem, "Problem JSON file or catalog name")->required();
  cmd->add_option("--json", o.json_path, "Write verdicts as JSON to this path");
  cmd->add_option("--horizon", o.horizon, "Horizon length T - t0 (default 200)");
  cmd->add_option("--theta", o.theta, "Absolute divergence threshold");
  cmd->add_option("--window", o.window, "Trailing window that must increase (default 8)");
  cmd->add_option("--functional", o.functional,
                  "trace, trace-normalized, or a weight matrix JSON file");
  cmd->add_option("--lambda-file", o.lambda_file, "Lambda(t) matrix JSON for T3.6 and C3.1");
  cmd->add_option("--alpha", o.alpha, "alpha(t) expression for T3.7");
  cmd->add_option("--beta", o.beta, "beta(t) expression for T3.7");
  cmd->add_option("--gamma", o.gamma, "gamma(t) expression for T3.7");
  cmd->add_flag("--no-simulate", o.no_simulate, "Skip the cross-check simulation");
}

Expr parse_flag_expr(const std::string& text, const std::string& flag) {
  try {
    return parse_expr(text);
  } catch (const Error& e) {
    throw InputError("--" + flag + ": " + e.what());
  }
}

CriterionConfig build_config(const Loaded& l, const CheckOptions& o) {
  CriterionConfig cfg = l.entry ? l.entry->configure({}) : CriterionConfig{};
  const std::size_t n = l.problem.n;
  if (o.horizon) {
    if (!(*o.horizon > 0.0)) throw InputError("--horizon must be positive");
    cfg.divergence.horizon = *o.horizon;
  }
  if (o.theta) cfg.divergence.theta = *o.theta;
  if (o.window) {
    if (*o.window < 2) throw InputError("--window must be at least 2");
    cfg.divergence.window = *o.window;
  }
  if (o.functional == "trace") {
    cfg.g = PositiveFunctional::trace(n);
  } else if (o.functional == "trace-normalized") {
    cfg.g = PositiveFunctional::normalized_trace(n);
  } else {
    cfg.g = PositiveFunctional::from_weight(
        constant_matrix_file(o.functional, n, l.problem.t0, "weight"));
  }
  if (!o.lambda_file.empty())
    cfg.lambda = matrix_function_from_json(read_json_file(o.lambda_file), n, "Lambda");
  if (o.alpha) cfg.alpha = parse_flag_expr(*o.alpha, "alpha");
  if (o.beta) cfg.beta = parse_flag_expr(*o.beta, "beta");
  if (o.gamma) cfg.gamma = parse_flag_expr(*o.gamma, "gamma");
  return cfg;
}

int cmd_check(const CheckOptions& o, bool detailed) {
  const Loaded l = load(o.problem);
  const CriterionConfig cfg = build_config(l, o);
  RunAllReport r = run_all(l.problem, cfg, !o.no_simulate);
  if (r.problem.empty()) r.problem = o.problem;
  std::cout << (detailed ? detailed_report(r) : verdict_table(r));
  if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    if (!out) throw InputError("cannot write " + o.json_path);
    out << report_to_json(r).dump(2) << "\n";
  }
  return kOk;
}

struct SimulateOptions {
  std::string problem;
  double horizon = 200.0;
  std::string csv_path;
  std::string y0_file;
};

ConjoinedInitialData initial_data(const HamiltonianProblem& p, const std::string& path) {
  if (path.empty()) return ConjoinedInitialData::standard(p.n);
  const json doc = read_json_file(path);
  ConjoinedInitialData init = ConjoinedInitialData::standard(p.n);
  try {
    if (doc.contains("phi0"))
      init.phi0 = matrix_function_from_json(doc["phi0"], p.n, "phi0")(p.t0);
    if (doc.contains("y0")) init.y0 = matrix_function_from_json(doc["y0"], p.n, "y0")(p.t0);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  init.validate(p.n);
  return init;
}

int cmd_simulate(const SimulateOptions& o) {
  const Loaded l = load(o.problem);
  if (!(o.horizon > 0.0)) throw InputError("--horizon must be positive");
  const ConjoinedInitialData init = initial_data(l.problem, o.y0_file);
  const double t_end = l.problem.t0 + o.horizon;
  const Trajectory tr = integrate_hamiltonian(l.problem, init, t_end);
  SimulationSummary s;
  s.t0 = l.problem.t0;
  s.t_end = t_end;
  s.zeros = find_det_zeros(l.problem, tr);
  s.oscillation_observed = oscillation_observed(s.zeros.times(), s.t0, t_end);
  std::cout << simulation_text(s);
  if (!o.csv_path.empty()) {
    std::ofstream out(o.csv_path);
    if (!out) throw InputError("cannot write " + o.csv_path);
    write_trajectory_csv(out, tr);
  }
  return kOk;
}

void show_entry(const CatalogEntry& e) {
  std::cout << fmt::format("{}: {}\n", e.name, e.summary);
  for (const auto& n : e.notes) std::cout << "  note: " << n << "\n";
  if (e.alpha) std::cout << "  alpha(t) = " << print_expr(*e.alpha) << "\n";
  if (e.beta) std::cout << "  beta(t) = " << print_expr(*e.beta) << "\n";
  if (e.gamma) std::cout << "  gamma(t) = " << print_expr(*e.gamma) << "\n";
  if (e.non_oscillatory_control) std::cout << "  non-oscillatory control\n";
  std::cout << problem_to_json(e.problem).dump(2) << "\n";
}

int cmd_catalog_list() {
  for (const auto& e : catalog()) std::cout << fmt::format("{:<22}{}\n", e.name, e.summary);
  return kOk;
}

int cmd_catalog_show(const std::string& name) {
  if (const CatalogEntry* e = find_catalog_entry(name)) {
    show_entry(*e);
    return kOk;
  }
  // A family name such as example_3_3 shows every branch.
  bool any = false;
  for (const auto& e : catalog()) {
    if (e.name.rfind(name + "_", 0) == 0) {
      if (any) std::cout << "\n";
      show_entry(e);
      any = true;
    }
  }
  if (!any) throw InputError("unknown catalog entry '" + name + "'");
  return kOk;
}

struct LemmaOptions {
  std::uint64_t seed = PropertyOptions{}.seed;
  int cases = PropertyOptions{}.cases;
  std::string inject_fault;
  std::string counterexample_path;
  std::string suite;
};

int cmd_verify_lemmas(const LemmaOptions& o) {
  if (o.cases <= 0) throw InputError("--cases must be positive");
  PropertyOptions opt;
  opt.seed = o.seed;
  opt.cases = o.cases;
  opt.inject_fault = o.inject_fault;
  std::vector<PropertyResult> results;
  try {
    if (!o.inject_fault.empty()) run_property_suite(o.inject_fault, {o.seed, 1, ""});
    if (o.suite.empty()) {
      results = run_all_properties(opt);
    } else {
      results.push_back(run_property_suite(o.suite, opt));
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::cout << properties_text(results);
  const Counterexample* first = nullptr;
  for (const auto& r : results)
    if (r.first_failure && !first) first = &*r.first_failure;
  if (!first) {
    std::cout << "all property suites passed\n";
    return kOk;
  }
  const json doc{{"suite", first->suite},
                 {"seed", first->seed},
                 {"case_index", first->case_index},
                 {"fault_injected", !o.inject_fault.empty()},
                 {"data", json::parse(first->data)}};
  if (!o.counterexample_path.empty()) {
    std::ofstream out(o.counterexample_path);
    if (!out) throw InputError("cannot write " + o.counterexample_path);
    out << doc.dump(2) << "\n";
    std::cout << "counterexample written to " << o.counterexample_path << "\n";
  } else {
    std::cout << doc.dump() << "\n";
  }
  return kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillation criteria for linear Hamiltonian systems"};
  app.require_subcommand(1);

  CheckOptions check_opts;
  CLI::App* check = app.add_subcommand("check", "Run every criterion and print a verdict table");
  add_check_flags(check, check_opts);

  CheckOptions report_opts;
  CLI::App* report = app.add_subcommand("report", "Verdicts with hypotheses, traces and notes");
  add_check_flags(report, report_opts);

  SimulateOptions sim_opts;
  CLI::App* sim = app.add_subcommand("simulate", "Integrate the system and list zeros of det Phi");
  sim->add_option("problem", sim_opts.problem, "Problem JSON file or catalog name")->required();
  sim->add_option("--horizon", sim_opts.horizon, "Horizon length T - t0");
  sim->add_option("--csv", sim_opts.csv_path, "Write the trajectory as CSV");
  sim->add_option("--y0-file", sim_opts.y0_file, "JSON with constant 'phi0' and 'y0' matrices");

  std::string show_name;
  CLI::App* cat = app.add_subcommand("catalog", "Built-in problems");
  cat->require_subcommand(1);
  CLI::App* cat_list = cat->add_subcommand("list", "List entries");
  CLI::App* cat_show = cat->add_subcommand("show", "Show one entry or family");
  cat_show->add_option("name", show_name)->required();

  LemmaOptions lemma_opts;
  CLI::App* lemmas = app.add_subcommand("verify-lemmas", "Run the seeded property suites");
  lemmas->add_option("--seed", lemma_opts.seed);
  lemmas->add_option("--cases", lemma_opts.cases);
  lemmas->add_option("--suite", lemma_opts.suite, "Run a single suite");
  lemmas->add_option("--inject-fault", lemma_opts.inject_fault,
                     "Corrupt the named suite to exercise the harness");
  lemmas->add_option("--counterexample", lemma_opts.counterexample_path,
                     "Write the first failing sample here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*check) return cmd_check(check_opts, false);
    if (*report) return cmd_check(report_opts, true);
    if (*sim) return cmd_simulate(sim_opts);
    if (*cat_list) return cmd_catalog_list();
    if (*cat_show) return cmd_catalog_show(show_name);
    if (*lemmas) return cmd_verify_lemmas(lemma_opts);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const HermitianViolation& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kBreakdown;
  }
  return kInputError;
}
