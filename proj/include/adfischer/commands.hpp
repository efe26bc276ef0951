#pragma once

// The four CLI commands as library calls. Each returns a RunReport plus the
// exit status and any witness matrices to persist; tools/adfischer.cpp only
// parses flags and writes files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adfischer/generation.hpp"
#include "adfischer/inequalities.hpp"
#include "adfischer/matrix_io.hpp"
#include "adfischer/parallel.hpp"
#include "adfischer/report.hpp"
#include "adfischer/search.hpp"

namespace adfischer {

enum class ExitCode : int { success = 0, theorem_failure = 1, invalid_input = 2, numerical_failure = 3 };

// Relative residual allowed on the algebraic identities (inverse split,
// Schur parts, determinant quotient).
inline constexpr double kIdentityTol = 1e-9;
// Relative agreement required between the family's computed and closed-form ratio.
inline constexpr double kExampleTol = 1e-12;

struct Witness {
  std::string name;  // file stem
  ComplexMatrix matrix;
};

struct CommandOutcome {
  RunReport report;
  ExitCode exit = ExitCode::success;
  std::vector<Witness> witnesses;
};

inline Json tolerances_json(const Tolerances& t) {
  return {{"pd", t.pd}, {"ineq", t.ineq}, {"identity", kIdentityTol}};
}

namespace detail {

struct CheckTally {
  RunSummary summary;
  void add(bool ok) {
    ++summary.total;
    ok ? ++summary.passed : ++summary.failed;
  }
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline std::vector<std::size_t> splits_for(std::size_t n, std::optional<std::size_t> k) {
  if (k) return {*k};
  std::vector<std::size_t> ks;
  for (std::size_t kk = 1; 2 * kk <= n; ++kk) ks.push_back(kk);
  return ks;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  ComplexMatrix matrix;
  std::string source = "inline";
  std::optional<std::size_t> k;  // default: every 1 <= k <= n/2
  Tolerances tol;
};

inline CommandOutcome cmd_verify(const VerifyOptions& opt) {
  CommandOutcome out;
  auto& rep = out.report;
  rep.command = "verify";
  const auto& a = opt.matrix;
  rep.inputs = {{"source", opt.source}, {"n", a.rows()}, {"matrix", a}};
  rep.inputs["k"] = opt.k ? Json(*opt.k) : Json("all k <= n/2");
  rep.tolerances = tolerances_json(opt.tol);

  if (!a.is_square()) throw DimensionError("verify needs a square matrix");
  if (a.rows() < 2) throw DimensionError("verify needs order n >= 2");
  if (opt.k && (*opt.k < 1 || *opt.k >= a.rows()))
    throw DimensionError("k=" + std::to_string(*opt.k) + " outside [1, " + std::to_string(a.rows() - 1) + "]");

  const auto cert = is_accretive_dissipative(a, opt.tol.pd);
  if (!cert.is_ad) {
    rep.results.push_back({{"type", "rejected"}, {"reason", "not accretive-dissipative"}, {"certificate", cert}});
    out.exit = ExitCode::invalid_input;
    return out;
  }

  detail::CheckTally tally;
  const auto pair = cartesian_decompose(a);

  const auto split = inverse_split(pair, opt.tol.pd);
  const bool e_pd = cholesky_pd(split.e, opt.tol.pd).is_pd;
  const bool f_pd = cholesky_pd(split.f, opt.tol.pd).is_pd;
  const bool lemma2_ok = split.residual <= kIdentityTol && e_pd && f_pd;
  tally.add(lemma2_ok);

  const auto lemma3 = lemma3_margin(pair.real_part, pair.imag_part);
  tally.add(lemma3.holds);

  const auto lemma4 = lemma4_verify(pair, opt.tol);
  tally.add(lemma4.pass);

  rep.results.push_back({{"type", "lemmas"},
                         {"certificate", cert},
                         {"inverse_split", {{"residual", split.residual}, {"e_pd", e_pd}, {"f_pd", f_pd}, {"pass", lemma2_ok}}},
                         {"lemma3", lemma3},
                         {"lemma4", lemma4}});

  for (std::size_t k : detail::splits_for(a.rows(), opt.k)) {
    const auto p = partition(a, k, opt.tol.pd);
    Json rec = {{"type", "split"}, {"k", k}};

    const auto bounds = check_all_bounds(p, opt.tol);
    tally.add(bounds.ikramov_ok);
    tally.add(bounds.lin_ok);
    if (!bounds.conjecture_ok) ++tally.summary.conjecture_flags;
    rec["bounds"] = bounds;

    const auto schur = schur_complement(p);
    const auto schur_cert = is_accretive_dissipative(schur, opt.tol.pd);
    tally.add(schur_cert.is_ad);
    rec["schur_complement"] = {{"certificate", schur_cert}, {"pass", schur_cert.is_ad}};

    const Complex det_a = det(a);
    const double quotient_residual = std::abs(det_a - det(p.a11()) * det(schur)) / std::abs(det_a);
    tally.add(quotient_residual <= kIdentityTol);
    rec["det_quotient"] = {{"residual", quotient_residual}, {"pass", quotient_residual <= kIdentityTol}};

    const auto p1 = p1_check(p, opt.tol.ineq);
    tally.add(p1.holds());
    rec["p1"] = {{"e_bound", p1.e_bound}, {"f_bound", p1.f_bound}, {"pass", p1.holds()}};

    const auto parts = schur_parts(p);
    const bool r_pd = cholesky_pd(parts.real_part, opt.tol.pd).is_pd;
    const bool s_pd = cholesky_pd(parts.imag_part, opt.tol.pd).is_pd;
    const bool parts_ok = parts.residual <= kIdentityTol && r_pd && s_pd;
    tally.add(parts_ok);
    rec["schur_parts"] = {{"residual", parts.residual}, {"r_pd", r_pd}, {"s_pd", s_pd}, {"pass", parts_ok}};

    const auto t3 = theorem3_chain(p, opt.tol);
    const auto t4 = theorem4_chain(p, opt.tol);
    tally.add(t3.overall_pass);
    tally.add(t4.overall_pass);
    rec["theorem3"] = t3;
    rec["theorem4"] = t4;
    rep.results.push_back(std::move(rec));

    if (!bounds.conjecture_ok) out.witnesses.push_back({"verify_k" + std::to_string(k), a});
  }
  rep.summary = tally.summary;
  out.exit = tally.summary.failed == 0 ? ExitCode::success : ExitCode::theorem_failure;
  return out;
}

// ---------------------------------------------------------------------------
// corpus

struct CorpusOptions {
  CorpusSpec spec;
  std::size_t count = 1000;
  std::optional<std::size_t> k;  // default: every 1 <= k <= n/2
  Tolerances tol;
  unsigned workers = 1;
};

struct CorpusRecord {
  std::uint64_t index = 0;
  std::size_t n = 0, k = 0;
  BoundCheck bounds;
  ChainReport theorem3;
  ChainReport theorem4;
  bool pass() const { return bounds.ikramov_ok && bounds.lin_ok && theorem3.overall_pass && theorem4.overall_pass; }
};

inline std::vector<CorpusRecord> corpus_records(const ComplexMatrix& a, std::uint64_t index,
                                                std::optional<std::size_t> k, const Tolerances& tol) {
  std::vector<CorpusRecord> recs;
  for (std::size_t kk : detail::splits_for(a.rows(), k)) {
    const auto p = partition(a, kk, tol.pd);
    recs.push_back({index, a.rows(), kk, check_all_bounds(p, tol), theorem3_chain(p, tol), theorem4_chain(p, tol)});
  }
  return recs;
}

inline CommandOutcome cmd_corpus(const CorpusOptions& opt) {
  opt.spec.validate();
  if (opt.k && (*opt.k < 1 || *opt.k >= opt.spec.n_min))
    throw DimensionError("fixed k must satisfy 1 <= k <= n_min - 1");

  CommandOutcome out;
  auto& rep = out.report;
  rep.command = "corpus";
  rep.inputs = {{"seed", opt.spec.seed},          {"count", opt.count},
                {"n_min", opt.spec.n_min},        {"n_max", opt.spec.n_max},
                {"max_condition", opt.spec.max_condition}};
  rep.inputs["k"] = opt.k ? Json(*opt.k) : Json("all k <= n/2");
  rep.tolerances = tolerances_json(opt.tol);

  std::vector<std::vector<CorpusRecord>> per_matrix(opt.count);
  parallel_for(opt.count, opt.workers, [&](std::size_t i) {
    per_matrix[i] = corpus_records(corpus_matrix(opt.spec, i), i, opt.k, opt.tol);
  });

  // chain name -> step description -> margins, in first-seen order
  std::map<std::string, std::vector<std::pair<std::string, std::vector<double>>>> step_margins;
  auto collect = [&](const ChainReport& r) {
    auto& steps = step_margins[r.chain_name];
    for (std::size_t s = 0; s < r.steps.size(); ++s) {
      if (s == steps.size()) steps.emplace_back(r.steps[s].description, std::vector<double>{});
      steps[s].second.push_back(r.steps[s].margin);
    }
  };

  double min_ikramov_rel = std::numeric_limits<double>::infinity();
  double min_lin_rel = std::numeric_limits<double>::infinity();
  double max_rho_over_conjecture = 0;
  for (std::size_t i = 0; i < per_matrix.size(); ++i) {
    for (const auto& r : per_matrix[i]) {
      ++rep.summary.total;
      r.pass() ? ++rep.summary.passed : ++rep.summary.failed;
      min_ikramov_rel = std::min(min_ikramov_rel, r.bounds.ikramov_margin / r.bounds.bounds.ikramov);
      min_lin_rel = std::min(min_lin_rel, r.bounds.lin_margin / r.bounds.bounds.lin_a);
      max_rho_over_conjecture = std::max(max_rho_over_conjecture, r.bounds.rho / r.bounds.bounds.conjecture);
      collect(r.theorem3);
      collect(r.theorem4);
      const auto* t3 = r.theorem3.tightest();
      const auto* t4 = r.theorem4.tightest();
      Json rec = {{"type", "corpus_instance"},
                  {"index", r.index},
                  {"n", r.n},
                  {"k", r.k},
                  {"bounds", r.bounds},
                  {"theorem3_pass", r.theorem3.overall_pass},
                  {"theorem4_pass", r.theorem4.overall_pass},
                  {"theorem4_orientation", r.theorem4.orientation},
                  {"theorem3_tightest", {{"step", t3->description}, {"margin", t3->margin}}},
                  {"theorem4_tightest", {{"step", t4->description}, {"margin", t4->margin}}}};
      if (!r.bounds.conjecture_ok) {
        ++rep.summary.conjecture_flags;
        const auto a = corpus_matrix(opt.spec, r.index);
        rec["witness"] = a;
        out.witnesses.push_back({"corpus_" + std::to_string(r.index) + "_k" + std::to_string(r.k), a});
      }
      if (!r.pass()) {
        rec["theorem3"] = r.theorem3;
        rec["theorem4"] = r.theorem4;
      }
      rep.results.push_back(std::move(rec));
    }
  }

  Json stats = Json::object();
  for (const auto& [chain, steps] : step_margins) {
    Json arr = Json::array();
    for (const auto& [desc, margins] : steps)
      arr.push_back({{"step", desc},
                     {"min_margin", *std::min_element(margins.begin(), margins.end())},
                     {"median_margin", detail::median(margins)},
                     {"count", margins.size()}});
    stats[chain] = std::move(arr);
  }
  rep.extra = {{"step_margins", std::move(stats)}};
  if (rep.summary.total > 0) {
    rep.extra["min_relative_ikramov_margin"] = min_ikramov_rel;
    rep.extra["min_relative_lin_margin"] = min_lin_rel;
    rep.extra["max_rho_over_conjecture"] = max_rho_over_conjecture;
  }
  out.exit = rep.summary.failed == 0 ? ExitCode::success : ExitCode::theorem_failure;
  return out;
}

// ---------------------------------------------------------------------------
// scan

struct ScanOptions {
  std::size_t n_max = 6;
  SearchConfig budget;
};

inline CommandOutcome cmd_scan(const ScanOptions& opt) {
  CommandOutcome out;
  auto& rep = out.report;
  rep.command = "scan";
  const auto& b = opt.budget;
  rep.inputs = {{"n_max", opt.n_max},       {"seed", b.seed},       {"restarts", b.restarts},
                {"steps", b.steps_per_restart}, {"initial_step", b.initial_step}, {"shrink", b.shrink},
                {"patience", b.patience},   {"pd_floor", b.pd_floor}};
  rep.tolerances = {{"pd_floor", b.pd_floor}, {"soundness_slack", kSoundnessSlack}};

  std::vector<ScanCell> table;
  try {
    table = conjecture_scan(opt.n_max, b);
  } catch (const ImplementationBugError& e) {
    rep.results.push_back({{"type", "implementation_bug"}, {"message", e.what()}});
    rep.summary = {1, 0, 1, 0};
    out.exit = ExitCode::theorem_failure;
    return out;
  }

  for (const auto& cell : table) {
    const auto& r = cell.result;
    ++rep.summary.total;
    const bool ceiling_ok = r.best_rho <= r.bound_set.lin_a + kSoundnessSlack;
    ceiling_ok ? ++rep.summary.passed : ++rep.summary.failed;
    if (r.conjecture_flag) {
      ++rep.summary.conjecture_flags;
      out.witnesses.push_back({"scan_n" + std::to_string(cell.n) + "_k" + std::to_string(cell.k), r.witness});
    }
    rep.results.push_back({{"type", "scan_cell"},
                           {"n", cell.n},
                           {"k", cell.k},
                           {"m", cell.m},
                           {"best_rho", r.best_rho},
                           {"conjecture_bound", r.bound_set.conjecture},
                           {"lin_a", r.bound_set.lin_a},
                           {"ikramov", r.bound_set.ikramov},
                           {"margin", r.conjecture_margin},
                           {"ceiling_ok", ceiling_ok},
                           {"conjecture_flag", r.conjecture_flag},
                           {"search", r}});
  }
  rep.extra = {{"conjecture_status", rep.summary.conjecture_flags == 0
                                         ? "unrefuted: no cell exceeded 2^m"
                                         : "counterexample candidates found; see witnesses"}};
  out.exit = rep.summary.failed == 0 ? ExitCode::success : ExitCode::theorem_failure;
  return out;
}

// ---------------------------------------------------------------------------
// example

inline std::vector<double> default_example_epsilons() { return {1, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

inline CommandOutcome cmd_example(const std::vector<double>& epsilons, const Tolerances& tol = {}) {
  for (double e : epsilons) ExampleParams{e}.validate();
  CommandOutcome out;
  auto& rep = out.report;
  rep.command = "example";
  rep.inputs = {{"epsilons", epsilons}};
  rep.tolerances = tolerances_json(tol);
  rep.tolerances["closed_form"] = kExampleTol;

  bool monotone = true;
  std::optional<std::pair<double, double>> prev;  // (eps, rho)
  for (double eps : epsilons) {
    const auto p = partition(example_family({eps}), 1, tol.pd);
    const auto check = check_all_bounds(p, tol);
    const double closed = example_ratio_closed_form(eps);
    const double rel_err = std::abs(check.rho - closed) / closed;
    const bool ok = rel_err <= kExampleTol && check.lin_ok && check.ikramov_ok;
    ++rep.summary.total;
    ok ? ++rep.summary.passed : ++rep.summary.failed;
    if (!check.conjecture_ok) ++rep.summary.conjecture_flags;
    if (prev && eps < prev->first && !(check.rho > prev->second)) monotone = false;
    prev = {eps, check.rho};
    rep.results.push_back({{"type", "example_row"},
                           {"epsilon", eps},
                           {"rho", check.rho},
                           {"closed_form", closed},
                           {"relative_error", rel_err},
                           {"conjecture_bound", check.bounds.conjecture},
                           {"margin", check.conjecture_margin},
                           {"pass", ok}});
  }
  rep.extra = {{"monotone_toward_bound", monotone}, {"limit", 2.0}};
  out.exit = rep.summary.failed == 0 ? ExitCode::success : ExitCode::theorem_failure;
  return out;
}

// ---------------------------------------------------------------------------
// CSV views

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string csv_cell(const Json& v) {
  if (v.is_string()) return csv_quote(v.get<std::string>());
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

}  // namespace detail

inline std::string to_csv(const RunReport& rep) {
  std::ostringstream os;
  auto row = [&](const std::vector<Json>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << detail::csv_cell(cells[i]);
    os << '\n';
  };
  if (rep.command == "verify") {
    os << "k,chain,orientation,step,kind,lhs,rhs,margin,pass\n";
    for (const auto& r : rep.results) {
      if (r.at("type") != "split") continue;
      for (const char* chain : {"theorem3", "theorem4"}) {
        const auto& c = r.at(chain);
        for (const auto& s : c.at("steps"))
          row({r.at("k"), c.at("chain_name"), c.at("orientation"), s.at("description"), s.at("kind"), s.at("lhs"),
               s.at("rhs"), s.at("margin"), s.at("pass")});
      }
    }
  } else if (rep.command == "corpus") {
    os << "index,n,k,rho,ikramov_ok,lin_ok,conjecture_ok,theorem3_pass,theorem4_pass\n";
    for (const auto& r : rep.results) {
      const auto& b = r.at("bounds");
      row({r.at("index"), r.at("n"), r.at("k"), b.at("rho"), b.at("ikramov_ok"), b.at("lin_ok"),
           b.at("conjecture_ok"), r.at("theorem3_pass"), r.at("theorem4_pass")});
    }
  } else if (rep.command == "scan") {
    os << "n,k,m,best_rho,2^m,lin_a,3^m,margin,conjecture_flag\n";
    for (const auto& r : rep.results) {
      if (r.at("type") != "scan_cell") continue;
      row({r.at("n"), r.at("k"), r.at("m"), r.at("best_rho"), r.at("conjecture_bound"), r.at("lin_a"),
           r.at("ikramov"), r.at("margin"), r.at("conjecture_flag")});
    }
  } else if (rep.command == "example") {
    os << "epsilon,rho,closed_form,relative_error,conjecture_bound,margin\n";
    for (const auto& r : rep.results)
      row({r.at("epsilon"), r.at("rho"), r.at("closed_form"), r.at("relative_error"), r.at("conjecture_bound"),
           r.at("margin")});
  }
  return os.str();
}

}  // namespace adfischer
