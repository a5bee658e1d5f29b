#include "hamosc/properties.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hamosc/functional.hpp"

namespace hamosc {

using nlohmann::json;

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::integer(int lo, int hi) {
  return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

ComplexMatrix random_matrix(Rng& rng, std::size_t n, bool complex_entries) {
  ComplexMatrix m(n);
  for (Complex& z : m.data()) {
    const double re = rng.uniform(-1.0, 1.0);
    z = Complex(re, complex_entries ? rng.uniform(-1.0, 1.0) : 0.0);
  }
  return m;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  return hermitian_part(random_matrix(rng, n));
}

ComplexMatrix random_psd(Rng& rng, std::size_t n, bool singular) {
  ComplexMatrix m = random_matrix(rng, n);
  if (singular) {
    const std::size_t col = static_cast<std::size_t>(rng.integer(0, static_cast<int>(n) - 1));
    for (std::size_t i = 0; i < n; ++i) m(i, col) = 0.0;
  }
  return hermitian_part(m * m.adjoint());
}

ComplexMatrix random_positive_definite(Rng& rng, std::size_t n, double shift) {
  return random_psd(rng, n) + Complex(shift) * ComplexMatrix::identity(n);
}

namespace {

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Outcome {
  double margin = 0.0;
  json data;
};

using CaseFn = std::function<Outcome(Rng&, bool fault)>;

struct Suite {
  const char* name;
  const char* statement;
  CaseFn run;
};

std::size_t random_dim(Rng& rng) { return static_cast<std::size_t>(rng.integer(1, 6)); }

Outcome trace_cyclic(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const ComplexMatrix m1 = random_matrix(rng, n);
  const ComplexMatrix m2 = random_matrix(rng, n);
  const Complex lhs = (m1 * m2).trace();
  const Complex rhs = fault ? (m1 * m2.transpose()).trace() : (m2 * m1).trace();
  const double tol = 1e-10 * (1.0 + frobenius_norm(m1) * frobenius_norm(m2));
  return {tol - std::abs(lhs - rhs),
          {{"M1", to_json(m1)}, {"M2", to_json(m2)}, {"lhs", lhs.real()}, {"rhs", rhs.real()}}};
}

Outcome trace_congruence_lower(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const ComplexMatrix s = random_matrix(rng, n);
  const ComplexMatrix h = random_psd(rng, n, rng.uniform() < 0.25);
  const double lhs = (s * h * s.adjoint()).trace().real();
  const Complex tr = s.trace();
  const double l1 = fault ? lambda_max(h) : lambda_min(h);
  const double rhs = std::max(0.0, l1) / static_cast<double>(n) *
                     (tr.real() * tr.real() + tr.imag() * tr.imag());
  const double tol = 1e-9 * (1.0 + frobenius_norm(s) * frobenius_norm(s) * frobenius_norm(h));
  return {lhs - rhs + tol, {{"S", to_json(s)}, {"H", to_json(h)}, {"lhs", lhs}, {"rhs", rhs}}};
}

PositiveFunctional random_functional(Rng& rng, std::size_t n) {
  ComplexMatrix w = random_psd(rng, n, rng.uniform() < 0.2);
  if (max_abs(w) == 0.0) w = ComplexMatrix::identity(n);
  return PositiveFunctional::from_weight(w);
}

Outcome functional_congruence_lower(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  ComplexMatrix m = random_matrix(rng, n);
  if (rng.uniform() < 0.25) {
    for (std::size_t i = 0; i < n; ++i) m(i, 0) = 0.0;
  }
  const ComplexMatrix h = random_psd(rng, n, rng.uniform() < 0.25);
  const PositiveFunctional g = random_functional(rng, n);
  const double lhs = g(m.adjoint() * h * m).real();
  const double nu = fault ? 2.0 * lambda_max(h) : nu_g(g, h);
  const double rhs = nu * std::norm(g(m));
  const double tol = 1e-9 * (1.0 + frobenius_norm(g.weight()) * frobenius_norm(h) *
                                       frobenius_norm(m) * frobenius_norm(m));
  return {lhs - rhs + tol,
          {{"M", to_json(m)}, {"H", to_json(h)}, {"W", to_json(g.weight())},
           {"lhs", lhs}, {"rhs", rhs}}};
}

Outcome functional_spectral_bounds(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const ComplexMatrix d = random_psd(rng, n, rng.uniform() < 0.25);
  ComplexMatrix w = random_psd(rng, n);
  w = w / w.trace();
  const PositiveFunctional g = PositiveFunctional::from_weight(w);
  const EigenSpectrum s = hermitian_eigen(d);
  const double val = g(d).real() * (fault ? 1.5 : 1.0);
  const double tol = 1e-10 * (1.0 + s.values.back());
  const double margin = std::min(val - s.values.front(), s.values.back() - val) + tol;
  return {margin,
          {{"D", to_json(d)}, {"W", to_json(w)}, {"g", val},
           {"lambda_1", s.values.front()}, {"lambda_n", s.values.back()}}};
}

Outcome nu_g_below_lambda_1(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const ComplexMatrix b = random_psd(rng, n, rng.uniform() < 0.25);
  // Weights dominating the identity keep nu_g below lambda_1.
  const ComplexMatrix w = rng.uniform() < 0.5 ? ComplexMatrix::identity(n)
                                              : ComplexMatrix::identity(n) + random_psd(rng, n);
  const PositiveFunctional g = PositiveFunctional::from_weight(w);
  const double nu = nu_g(g, b) * (fault ? 4.0 : 1.0);
  const double l1 = std::max(0.0, lambda_min(b));
  const double tr = b.trace().real();
  const double tol = 1e-10 * (1.0 + tr);
  return {std::min(l1 - nu, tr - l1) + tol,
          {{"B", to_json(b)}, {"W", to_json(w)}, {"nu_g", nu}, {"lambda_1", l1}, {"trace", tr}}};
}

Outcome inverse_trace_bounds(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const ComplexMatrix b = random_positive_definite(rng, n);
  const double inv_tr = 1.0 / hermitian_inverse(b).trace().real();
  const double l1 = fault ? lambda_max(b) : lambda_min(b);
  const double tol = 1e-10 * (1.0 + l1);
  return {std::min(l1 - inv_tr, static_cast<double>(n) * inv_tr - l1) + tol,
          {{"B", to_json(b)}, {"inv_trace", inv_tr}, {"lambda_1", l1}}};
}

Outcome sum_sep_identity(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const ComplexMatrix l = random_matrix(rng, n);
  const ComplexMatrix u = random_matrix(rng, n);
  const ComplexMatrix sep = fault ? hermitian_part(l) : separator(l);
  const Complex lhs = sum_entries((l + sep) * u);
  const Complex rhs = Complex(0.0, sum_entries(l).imag() / static_cast<double>(n)) *
                      sum_entries(u);
  const double tol = 1e-10 * (1.0 + frobenius_norm(l)) * (1.0 + frobenius_norm(u)) *
                     static_cast<double>(n);
  return {tol - std::abs(lhs - rhs),
          {{"L", to_json(l)}, {"U", to_json(u)}, {"lhs", {lhs.real(), lhs.imag()}},
           {"rhs", {rhs.real(), rhs.imag()}}}};
}

Outcome sum_quadratic(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const ComplexMatrix y = random_hermitian(rng, n);
  const ComplexMatrix b = random_psd(rng, n, rng.uniform() < 0.25);
  const double lhs = sum_entries(y * b * y).real();
  const double s = sum_entries(y).real();
  const double l1 = std::max(0.0, fault ? lambda_max(b) : lambda_min(b));
  const double rhs = l1 / static_cast<double>(n) * s * s;
  const double tol = 1e-9 * (1.0 + frobenius_norm(y) * frobenius_norm(y) * frobenius_norm(b));
  return {lhs - rhs + tol, {{"Y", to_json(y)}, {"B", to_json(b)}, {"lhs", lhs}, {"rhs", rhs}}};
}

Outcome separator_hermitian(Rng& rng, bool fault) {
  const std::size_t n = random_dim(rng);
  const bool real = rng.uniform() < 0.3;
  const ComplexMatrix l = random_matrix(rng, n, !real);
  ComplexMatrix h = separator(l);
  if (fault && n > 1) h(0, n - 1) += 1.0;
  const double tol = 1e-12 * (1.0 + max_abs(l)) * static_cast<double>(n);
  double margin = tol - hermitian_residual(h);
  if (real) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        margin = std::min(margin, tol - (i == j ? std::abs(h(i, j).imag()) : std::abs(h(i, j))));
  }
  return {margin, {{"L", to_json(l)}, {"Sep", to_json(h)}, {"real_input", real}}};
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> s = {
      {"trace_cyclic", "tr(M1 M2) = tr(M2 M1)", trace_cyclic},
      {"trace_congruence_lower",
       "tr(S H S*) >= lambda_1(H)/n ([tr (S+S*)/2]^2 + [tr (S-S*)/2i]^2)", trace_congruence_lower},
      {"functional_congruence_lower", "g(M* H M) >= nu_g(H) |g(M)|^2", functional_congruence_lower},
      {"functional_spectral_bounds", "lambda_1(D) <= g(D) <= lambda_n(D), trace(W) = 1", functional_spectral_bounds},
      {"nu_g_below_lambda_1", "nu_g(B) <= lambda_1(B) <= tr B, W >= I", nu_g_below_lambda_1},
      {"inverse_trace_bounds", "1/tr(B^-1) <= lambda_1(B) <= n/tr(B^-1)", inverse_trace_bounds},
      {"sum_sep_identity", "Sum([L + Sep L] U) = i Im(Sum L)/n Sum(U)", sum_sep_identity},
      {"sum_quadratic", "Sum(Y B Y) >= lambda_1(B)/n (Sum Y)^2", sum_quadratic},
      {"separator_hermitian", "Sep(L) is Hermitian, real diagonal for real L",
       separator_hermitian},
  };
  return s;
}

std::uint64_t case_seed(std::uint64_t seed, std::size_t suite, int index) {
  Rng mix(seed ^ (0x9E3779B97F4A7C15ULL * (suite + 1)));
  for (int k = 0; k < 2; ++k) mix.next();
  return mix.next() ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(index + 1));
}

std::size_t suite_index(const std::string& name) {
  const auto& s = suites();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (name == s[i].name) return i;
  throw std::invalid_argument("unknown property suite '" + name + "'");
}

}  // namespace

std::vector<std::string> property_suite_names() {
  std::vector<std::string> out;
  for (const auto& s : suites()) out.emplace_back(s.name);
  return out;
}

double replay_property_case(const std::string& name, std::uint64_t seed, int case_index,
                            bool fault, std::string* data) {
  const std::size_t idx = suite_index(name);
  Rng rng(case_seed(seed, idx, case_index));
  const Outcome o = suites()[idx].run(rng, fault);
  if (data) *data = o.data.dump();
  return o.margin;
}

PropertyResult run_property_suite(const std::string& name, const PropertyOptions& opt) {
  const std::size_t idx = suite_index(name);
  const Suite& suite = suites()[idx];
  const bool fault = opt.inject_fault == name;
  PropertyResult r;
  r.suite = name;
  r.statement = suite.statement;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.cases; ++i) {
    Rng rng(case_seed(opt.seed, idx, i));
    const Outcome o = suite.run(rng, fault);
    ++r.cases;
    r.worst_margin = std::min(r.worst_margin, o.margin);
    if (!(o.margin >= 0.0)) {
      ++r.failures;
      if (!r.first_failure) r.first_failure = Counterexample{name, opt.seed, i, o.data.dump()};
    }
  }
  return r;
}

std::vector<PropertyResult> run_all_properties(const PropertyOptions& opt) {
  std::vector<PropertyResult> out;
  for (const auto& s : suites()) out.push_back(run_property_suite(s.name, opt));
  return out;
}

}  // namespace hamosc
