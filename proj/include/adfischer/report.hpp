#pragma once

// JSON forms of every result type, and the versioned run report the CLI
// writes. Doubles go through nlohmann's shortest round-trip formatting, so
// embedded matrices reconstruct bit for bit.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "adfischer/inequalities.hpp"
#include "adfischer/search.hpp"

namespace adfischer {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "adfischer 1.0.0";
inline constexpr const char* kReportFormat = "adfischer-report";
inline constexpr int kReportFormatVersion = 1;

inline void to_json(Json& j, const PDCertificate& c) {
  j = {{"is_pd", c.is_pd}, {"min_pivot", c.min_pivot}, {"scale", c.scale}, {"tolerance_used", c.tolerance_used}};
}
inline void from_json(const Json& j, PDCertificate& c) {
  c.is_pd = j.at("is_pd");
  c.min_pivot = j.at("min_pivot");
  c.scale = j.at("scale");
  c.tolerance_used = j.at("tolerance_used");
}

inline void to_json(Json& j, const ADCertificate& c) {
  j = {{"is_ad", c.is_ad}, {"real_part", c.real_part}, {"imag_part", c.imag_part}};
}

inline void to_json(Json& j, const LoewnerComparison& c) {
  j = {{"holds", c.holds}, {"margin", c.margin}, {"scale", c.scale}};
}

inline void to_json(Json& j, const BoundSet& b) {
  j = {{"n", b.n}, {"k", b.k}, {"l", b.l}, {"m", b.m}, {"fischer", b.fischer},
       {"ikramov", b.ikramov}, {"lin_a", b.lin_a}, {"conjecture", b.conjecture}};
}
inline void from_json(const Json& j, BoundSet& b) {
  b.n = j.at("n");
  b.k = j.at("k");
  b.l = j.at("l");
  b.m = j.at("m");
  b.fischer = j.at("fischer");
  b.ikramov = j.at("ikramov");
  b.lin_a = j.at("lin_a");
  b.conjecture = j.at("conjecture");
}

inline void to_json(Json& j, const BoundCheck& c) {
  j = {{"rho", c.rho}, {"bounds", c.bounds}, {"ikramov_ok", c.ikramov_ok}, {"lin_ok", c.lin_ok},
       {"conjecture_ok", c.conjecture_ok}, {"ikramov_margin", c.ikramov_margin},
       {"lin_margin", c.lin_margin}, {"conjecture_margin", c.conjecture_margin}};
}
inline void from_json(const Json& j, BoundCheck& c) {
  c.rho = j.at("rho");
  c.bounds = j.at("bounds");
  c.ikramov_ok = j.at("ikramov_ok");
  c.lin_ok = j.at("lin_ok");
  c.conjecture_ok = j.at("conjecture_ok");
  c.ikramov_margin = j.at("ikramov_margin");
  c.lin_margin = j.at("lin_margin");
  c.conjecture_margin = j.at("conjecture_margin");
}

inline void to_json(Json& j, const ChainStep& s) {
  j = {{"description", s.description}, {"kind", to_string(s.kind)}, {"lhs", s.lhs}, {"rhs", s.rhs},
       {"margin", s.margin}, {"raw_margin", s.raw_margin}, {"pass", s.pass}, {"strict", s.strict}};
}
inline void from_json(const Json& j, ChainStep& s) {
  s.description = j.at("description");
  const std::string kind = j.at("kind");
  if (kind != "scalar" && kind != "loewner") throw ParseError("unknown step kind '" + kind + "'");
  s.kind = kind == "scalar" ? StepKind::scalar : StepKind::loewner;
  s.lhs = j.at("lhs");
  s.rhs = j.at("rhs");
  s.margin = j.at("margin");
  s.raw_margin = j.at("raw_margin");
  s.pass = j.at("pass");
  s.strict = j.at("strict");
}

inline void to_json(Json& j, const ChainReport& r) {
  j = {{"chain_name", r.chain_name}, {"orientation", r.orientation}, {"steps", r.steps},
       {"overall_pass", r.overall_pass}};
}
inline void from_json(const Json& j, ChainReport& r) {
  r.chain_name = j.at("chain_name");
  r.orientation = j.at("orientation");
  r.steps = j.at("steps").get<std::vector<ChainStep>>();
  r.overall_pass = j.at("overall_pass");
}

inline void to_json(Json& j, const EigenTriple& t) {
  j = {{"lambda", t.lambda}, {"modulus", t.modulus}, {"shifted", t.shifted},
       {"scaled_modulus", t.scaled_mod}, {"holds", t.holds}};
}
inline void from_json(const Json& j, EigenTriple& t) {
  t.lambda = j.at("lambda");
  t.modulus = j.at("modulus");
  t.shifted = j.at("shifted");
  t.scaled_mod = j.at("scaled_modulus");
  t.holds = j.at("holds");
}

inline void to_json(Json& j, const Lemma4Report& r) {
  j = {{"n", r.n}, {"lambdas", r.lambdas}, {"lhs", r.lhs}, {"mid", r.mid}, {"rhs", r.rhs},
       {"lower_margin", r.lower_margin}, {"upper_margin", r.upper_margin},
       {"scalar_checks", r.scalar_checks}, {"pass", r.pass}};
}
inline void from_json(const Json& j, Lemma4Report& r) {
  r.n = j.at("n");
  r.lambdas = j.at("lambdas").get<std::vector<double>>();
  r.lhs = j.at("lhs");
  r.mid = j.at("mid");
  r.rhs = j.at("rhs");
  r.lower_margin = j.at("lower_margin");
  r.upper_margin = j.at("upper_margin");
  r.scalar_checks = j.at("scalar_checks").get<std::vector<EigenTriple>>();
  r.pass = j.at("pass");
}

inline void to_json(Json& j, const RestartTrace& t) {
  j = {{"seed", t.seed}, {"from_seed_point", t.from_seed_point}, {"start_rho", t.start_rho},
       {"best_rho", t.best_rho}, {"accepted", t.accepted}, {"rejected", t.rejected},
       {"skipped", t.skipped}, {"final_step", t.final_step}};
}
inline void from_json(const Json& j, RestartTrace& t) {
  t.seed = j.at("seed");
  t.from_seed_point = j.at("from_seed_point");
  t.start_rho = j.at("start_rho");
  t.best_rho = j.at("best_rho");
  t.accepted = j.at("accepted");
  t.rejected = j.at("rejected");
  t.skipped = j.at("skipped");
  t.final_step = j.at("final_step");
  t.incumbents.clear();
}

}  // namespace adfischer

namespace nlohmann {

template <>
struct adl_serializer<adfischer::ComplexMatrix> {
  static void to_json(json& j, const adfischer::ComplexMatrix& m) {
    json entries = json::array();
    for (const auto& z : m.entries()) entries.push_back({z.real(), z.imag()});
    j = {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
  }
  static adfischer::ComplexMatrix from_json(const json& j) {
    std::vector<adfischer::Complex> entries;
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 2) throw adfischer::ParseError("matrix entry must be [re, im]");
      entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return adfischer::ComplexMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                                    std::move(entries));
  }
};

template <>
struct adl_serializer<adfischer::SearchResult> {
  static void to_json(json& j, const adfischer::SearchResult& r) {
    j = {{"best_rho", r.best_rho}, {"witness", r.witness}, {"bound_set", r.bound_set},
         {"conjecture_margin", r.conjecture_margin}, {"trajectory", r.trajectory}, {"seed", r.seed},
         {"pd_floor", r.pd_floor}, {"conjecture_flag", r.conjecture_flag},
         {"evaluations", r.evaluations()}};
    j["verified_rho"] = r.verified_rho ? json(*r.verified_rho) : json(nullptr);
  }
  static adfischer::SearchResult from_json(const json& j) {
    adfischer::SearchResult r{.best_rho = j.at("best_rho"),
                              .witness = j.at("witness").get<adfischer::ComplexMatrix>(),
                              .bound_set = j.at("bound_set").get<adfischer::BoundSet>(),
                              .conjecture_margin = j.at("conjecture_margin"),
                              .trajectory = j.at("trajectory").get<std::vector<adfischer::RestartTrace>>(),
                              .seed = j.at("seed"),
                              .pd_floor = j.at("pd_floor"),
                              .verified_rho = std::nullopt,
                              .conjecture_flag = j.at("conjecture_flag")};
    if (!j.at("verified_rho").is_null()) r.verified_rho = j.at("verified_rho").get<double>();
    return r;
  }
};

}  // namespace nlohmann

namespace adfischer {

struct RunSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t conjecture_flags = 0;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

inline void to_json(Json& j, const RunSummary& s) {
  j = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"conjecture_flags", s.conjecture_flags}};
}
inline void from_json(const Json& j, RunSummary& s) {
  s.total = j.at("total");
  s.passed = j.at("passed");
  s.failed = j.at("failed");
  s.conjecture_flags = j.at("conjecture_flags");
}

// Self-describing output of one CLI command. `results` holds typed records,
// each tagged with a "type" field.
struct RunReport {
  std::string command;
  Json inputs = Json::object();      // echoed configuration, including seeds
  Json tolerances = Json::object();  // every tolerance used
  std::vector<Json> results;
  RunSummary summary;
  Json extra = Json::object();  // command-specific aggregates

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline void to_json(Json& j, const RunReport& r) {
  j = {{"format", kReportFormat},    {"format_version", kReportFormatVersion},
       {"tool_version", kToolVersion}, {"command", r.command},
       {"inputs", r.inputs},          {"tolerances", r.tolerances},
       {"results", r.results},        {"summary", r.summary},
       {"extra", r.extra}};
}
inline void from_json(const Json& j, RunReport& r) {
  if (j.at("format") != kReportFormat) throw ParseError("not an adfischer report");
  if (j.at("format_version") != kReportFormatVersion) throw ParseError("unsupported report format version");
  r.command = j.at("command");
  r.inputs = j.at("inputs");
  r.tolerances = j.at("tolerances");
  r.results = j.at("results").get<std::vector<Json>>();
  r.summary = j.at("summary");
  r.extra = j.at("extra");
}

inline std::string serialize(const RunReport& r) { return Json(r).dump(2) + "\n"; }

inline RunReport parse_report(const std::string& text) {
  try {
    return Json::parse(text).get<RunReport>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace adfischer
