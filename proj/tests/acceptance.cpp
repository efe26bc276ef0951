// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 if
// any criterion fails. Reports and witnesses land in ./acceptance_out.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "adfischer/adfischer.hpp"

using namespace adfischer;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kCorpusSeed = 20240601;
constexpr std::size_t kCorpusSize = 1000;
constexpr std::uint64_t kSearchSeed = 7;
constexpr std::uint64_t kScanSeed = 11;

const fs::path kOutDir = "acceptance_out";

// At least four so the determinism rerun (one worker) compares against a parallel pass.
unsigned workers() { return std::max(4u, std::thread::hardware_concurrency()); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Verdict()> run;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

// Permutation-expansion determinant, kept separate from the library's LU.
Complex permutation_det(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Complex sum{};
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    Complex t(inversions % 2 ? -1.0 : 1.0, 0);
    for (std::size_t i = 0; i < n; ++i) t *= m(i, perm[i]);
    sum += t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

CorpusOptions corpus_options(unsigned w) {
  CorpusOptions opt;
  opt.spec = CorpusSpec{.seed = kCorpusSeed, .n_min = 2, .n_max = 8, .max_condition = 100};
  opt.count = kCorpusSize;
  opt.workers = w;
  return opt;
}

SearchConfig search_config(unsigned w) {
  SearchConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.restarts = 20;
  cfg.steps_per_restart = 2000;
  cfg.pd_floor = 1e-8;
  cfg.seed = kSearchSeed;
  cfg.workers = w;
  return cfg;
}

ScanOptions scan_options(unsigned w) {
  ScanOptions opt;
  opt.n_max = 6;
  opt.budget.seed = kScanSeed;
  opt.budget.workers = w;
  return opt;
}

// Shared between criteria so the corpus and scan are computed once per pass.
struct Cache {
  std::string corpus_report;
  std::string search_report;
  std::string scan_report;
} cache;

Verdict example_limit() {
  const auto out = cmd_example(default_example_epsilons());
  double worst = 0;
  for (const auto& row : out.report.results) {
    const double eps = row.at("epsilon");
    const double rho = row.at("rho");
    const double closed = ((1 + eps) * (1 + eps) + 1) / ((1 + eps) * (1 + eps));
    worst = std::max(worst, std::abs(rho - closed) / closed);
  }
  const double last = out.report.results.back().at("rho");
  char buf[160];
  std::snprintf(buf, sizeof buf, "max rel err %.2e, rho(1e-6) = %.12f", worst, last);
  return {worst <= 1e-12 && last >= 2 - 1e-5 && out.exit == ExitCode::success, buf};
}

Verdict corpus_bounds() {
  const auto out = cmd_corpus(corpus_options(workers()));
  cache.corpus_report = serialize(out.report);
  write_text(kOutDir / "corpus.json", cache.corpus_report);
  std::size_t ik = 0, lin = 0;
  for (const auto& r : out.report.results) {
    ik += r.at("bounds").at("ikramov_ok").get<bool>();
    lin += r.at("bounds").at("lin_ok").get<bool>();
  }
  const std::size_t total = out.report.results.size();
  const double min_ik = out.report.extra.at("min_relative_ikramov_margin");
  const double min_lin = out.report.extra.at("min_relative_lin_margin");
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu splits; 3^m ok %zu, piecewise ok %zu; min rel margins %.3e / %.3e; max rho/2^m %.4f",
                total, ik, lin, min_ik, min_lin, out.report.extra.at("max_rho_over_conjecture").get<double>());
  return {total > kCorpusSize && ik == total && lin == total && min_ik > 0 && min_lin > 0, buf};
}

Verdict proof_chains() {
  const auto rep = parse_report(cache.corpus_report);
  bool ok = true;
  std::size_t t3 = 0, t4 = 0, loewner = 0;
  for (const auto& r : rep.results) {
    t3 += r.at("theorem3_pass").get<bool>();
    t4 += r.at("theorem4_pass").get<bool>();
  }
  ok = t3 == rep.results.size() && t4 == rep.results.size();
  double tightest = 1;
  std::string tightest_step;
  for (const auto& [chain, steps] : rep.extra.at("step_margins").items()) {
    for (const auto& s : steps) {
      const double mm = s.at("min_margin");
      if (mm < -1e-9) ok = false;
      if (mm < tightest) {
        tightest = mm;
        tightest_step = chain + ": " + s.at("step").get<std::string>();
      }
    }
  }
  // The Loewner steps are checked individually from a fresh pass.
  const auto opt = corpus_options(1);
  for (std::size_t i = 0; i < kCorpusSize; ++i)
    for (const auto& rec : corpus_records(corpus_matrix(opt.spec, i), i, std::nullopt, opt.tol))
      for (const auto& s : rec.theorem4.steps)
        if (s.kind == StepKind::loewner) {
          ++loewner;
          if (!(s.pass && s.margin >= -1e-9)) ok = false;
        }
  char buf[300];
  std::snprintf(buf, sizeof buf, "chains pass %zu/%zu and %zu/%zu; %zu Loewner steps; tightest %.3e (%s)", t3,
                rep.results.size(), t4, rep.results.size(), loewner, tightest, tightest_step.c_str());
  return {ok, buf};
}

Verdict lemma_suite() {
  const auto spec = corpus_options(1).spec;
  std::size_t schur_ok = 0, schur_total = 0, split_ok = 0, l3_ok = 0, l3_total = 0, l4_ok = 0, eq_ok = 0;
  double worst_split = 0, worst_l3 = 1, worst_eq = 0;
  for (std::size_t i = 0; i < kCorpusSize; ++i) {
    const auto a = corpus_matrix(spec, i);
    const std::size_t n = a.rows();
    for (std::size_t k = 1; 2 * k <= n; ++k) {
      ++schur_total;
      schur_ok += is_accretive_dissipative(schur_complement(partition(a, k))).is_ad;
    }
    const auto pair = cartesian_decompose(a);
    const auto split = inverse_split(pair);
    const double res = (inverse(a) - split.recombine()).frobenius_norm() / inverse(a).frobenius_norm();
    worst_split = std::max(worst_split, res);
    split_ok += res <= 1e-9;

    for (const auto& c : {pair.imag_part, sample_hermitian(n, derive_seed(kCorpusSeed ^ 0x5A5A, i))}) {
      const auto cmp = lemma3_margin(pair.real_part, c);
      const double rel = cmp.margin / cmp.scale;
      worst_l3 = std::min(worst_l3, rel);
      ++l3_total;
      l3_ok += rel >= -1e-10;
    }

    const auto l4 = lemma4_verify(pair);
    l4_ok += l4.pass && std::all_of(l4.scalar_checks.begin(), l4.scalar_checks.end(),
                                    [](const EigenTriple& t) { return t.holds; });

    const auto eq = lemma4_verify(CartesianPair{pair.real_part, pair.real_part});
    double dev = std::abs(eq.upper_margin);
    for (const auto& t : eq.scalar_checks) dev = std::max(dev, std::abs(t.lambda - 1));
    worst_eq = std::max(worst_eq, dev);
    eq_ok += eq.pass && dev <= 1e-9;
  }
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "schur AD %zu/%zu; inverse split %zu/%zu (worst %.1e); lemma3 %zu/%zu (worst %.1e); "
                "two-sided %zu/%zu; B=C equality %zu/%zu (worst dev %.1e)",
                schur_ok, schur_total, split_ok, kCorpusSize, worst_split, l3_ok, l3_total, worst_l3, l4_ok,
                kCorpusSize, eq_ok, kCorpusSize, worst_eq);
  return {schur_ok == schur_total && split_ok == kCorpusSize && l3_ok == l3_total && l4_ok == kCorpusSize &&
              eq_ok == kCorpusSize,
          buf};
}

Verdict determinant_oracle() {
  std::mt19937_64 eng(99);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<std::size_t> order(1, 4);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = order(eng);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double re = nd(eng);
        m(i, j) = Complex(re, nd(eng));
      }
    const Complex ref = permutation_det(m);
    worst = std::max(worst, std::abs(det(m) - ref) / std::abs(ref));
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "200 matrices, worst rel diff %.2e", worst);
  return {worst <= 1e-12, buf};
}

Verdict search_tightness() {
  const auto res = maximize_ratio(search_config(workers()));
  cache.search_report = Json(res).dump(2) + "\n";
  write_text(kOutDir / "search_n2_k1.json", cache.search_report);
  char buf[120];
  std::snprintf(buf, sizeof buf, "best_rho = %.9f after %zu evaluations", res.best_rho, res.evaluations());
  return {res.best_rho >= 1.99, buf};
}

Verdict scan_soundness() {
  const auto out = cmd_scan(scan_options(workers()));
  cache.scan_report = serialize(out.report);
  write_text(kOutDir / "scan.json", cache.scan_report);
  bool ok = out.exit == ExitCode::success;
  double worst_ratio = 0;
  std::size_t cells = 0;
  for (const auto& r : out.report.results) {
    if (r.at("type") != "scan_cell") {
      ok = false;
      continue;
    }
    ++cells;
    const double rho = r.at("best_rho"), lin = r.at("lin_a"), conj = r.at("conjecture_bound");
    ok = ok && rho <= lin + 1e-9;
    worst_ratio = std::max(worst_ratio, rho / conj);
  }
  // Persist flagged witnesses and confirm they read back exactly.
  for (const auto& w : out.witnesses) {
    const auto path = kOutDir / (w.name + ".txt");
    write_text(path, matrix_to_string(w.matrix));
    ok = ok && read_matrix_file(path.string()) == w.matrix;
  }
  char buf[300];
  std::snprintf(buf, sizeof buf, "%zu cells, all <= piecewise ceiling: %s; max best_rho/2^m = %.9f; %zu witnesses; conjecture %s",
                cells, ok ? "yes" : "no", worst_ratio, out.witnesses.size(),
                out.report.extra.at("conjecture_status").get<std::string>().c_str());
  return {ok && cells == 9, buf};
}

Verdict determinism() {
  // Second pass with a single worker; reports must match byte for byte.
  const auto corpus = serialize(cmd_corpus(corpus_options(1)).report);
  const auto search = Json(maximize_ratio(search_config(1))).dump(2) + "\n";
  const auto scan = serialize(cmd_scan(scan_options(1)).report);
  const bool c = !cache.corpus_report.empty() && corpus == cache.corpus_report;
  const bool s = !cache.search_report.empty() && search == cache.search_report;
  const bool n = !cache.scan_report.empty() && scan == cache.scan_report;
  std::string detail = std::string("corpus ") + (c ? "identical" : "DIFFERS") + ", search " +
                       (s ? "identical" : "DIFFERS") + ", scan " + (n ? "identical" : "DIFFERS") + " (" +
                       std::to_string(workers()) + " vs 1 workers)";
  return {c && s && n, detail};
}

}  // namespace

int main() {
  fs::create_directories(kOutDir);
  const std::vector<Criterion> criteria = {
      {1, "example family tends to 2", 1, example_limit},
      {2, "corpus satisfies 3^m and piecewise bounds", 60, corpus_bounds},
      {3, "every proof-chain step holds on the corpus", 120, proof_chains},
      {4, "lemma suite on the corpus", 60, lemma_suite},
      {5, "LU determinant matches permutation expansion", 5, determinant_oracle},
      {6, "search reaches rho >= 1.99 at n=2, k=1", 30, search_tightness},
      {7, "scan to n=6 stays under the proven ceiling", 600, scan_soundness},
      {8, "reruns of 2, 6, 7 are byte-identical", 0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_seconds <= 0 || secs < c.limit_seconds;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("[%s] %d. %s (%.2fs%s) - %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.limit_seconds > 0 ? (" / limit " + std::to_string(static_cast<int>(c.limit_seconds)) + "s").c_str()
                                    : "",
                v.detail.c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
