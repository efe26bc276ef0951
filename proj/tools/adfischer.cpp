// Command-line front end: verify, corpus, scan, example.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adfischer/adfischer.hpp"

namespace fs = std::filesystem;
using namespace adfischer;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ADFISCHER_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw DomainError(std::string("ADFISCHER_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 1;
}

struct OutputFlags {
  std::string format = "json";
  std::string out;
  std::string witness_dir;
};

void add_output_flags(CLI::App* cmd, OutputFlags& o) {
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out, "Write the report here instead of stdout");
  cmd->add_option("--witness-dir", o.witness_dir, "Directory for matrices that exceed the 2^m bound");
}

void add_tolerance_flags(CLI::App* cmd, Tolerances& t) {
  cmd->add_option("--tol-pd", t.pd, "Relative Cholesky pivot threshold")->capture_default_str();
  cmd->add_option("--tol-ineq", t.ineq, "Relative slack on every inequality")->capture_default_str();
}

int emit(const CommandOutcome& outcome, const OutputFlags& o) {
  const std::string body = o.format == "csv" ? to_csv(outcome.report) : serialize(outcome.report);
  if (o.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ParseError("cannot write report to '" + o.out + "'");
    f << body;
  }
  if (!outcome.witnesses.empty()) {
    if (o.witness_dir.empty()) {
      std::cerr << outcome.witnesses.size() << " witness matrices not persisted (no --witness-dir)\n";
    } else {
      fs::create_directories(o.witness_dir);
      for (const auto& w : outcome.witnesses) {
        std::ofstream f(fs::path(o.witness_dir) / (w.name + ".txt"), std::ios::binary);
        f << "# " << w.name << '\n';
        write_matrix(f, w.matrix);
      }
    }
  }
  const auto& s = outcome.report.summary;
  std::cerr << outcome.report.command << ": " << s.passed << "/" << s.total << " checks passed, "
            << s.conjecture_flags << " conjecture flags\n";
  return static_cast<int>(outcome.exit);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fischer-type determinant bounds for accretive-dissipative matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // verify
  OutputFlags verify_out;
  Tolerances verify_tol;
  std::string matrix_path;
  std::optional<double> verify_eps;
  std::optional<std::size_t> verify_k;
  auto* verify = app.add_subcommand("verify", "Run every lemma, chain and bound check on one matrix");
  auto* path_opt = verify->add_option("matrix", matrix_path, "Matrix file (rows of a+bi entries)");
  verify->add_option("--example-eps", verify_eps, "Use the two-by-two family at this epsilon")->excludes(path_opt);
  verify->add_option("--k", verify_k, "Leading block order (default: every k <= n/2)");
  add_tolerance_flags(verify, verify_tol);
  add_output_flags(verify, verify_out);

  // corpus
  OutputFlags corpus_out;
  CorpusOptions corpus_opt;
  std::optional<std::uint64_t> corpus_seed;
  std::optional<std::size_t> corpus_n;
  auto* corpus = app.add_subcommand("corpus", "Check bounds and both chains over random AD matrices");
  corpus->add_option("--count", corpus_opt.count, "Number of matrices")->capture_default_str();
  corpus->add_option("--seed", corpus_seed, "Corpus seed (default: $ADFISCHER_SEED or 1)");
  corpus->add_option("--n", corpus_n, "Fixed order (overrides --n-min/--n-max)");
  corpus->add_option("--n-min", corpus_opt.spec.n_min, "Smallest order")->capture_default_str();
  corpus->add_option("--n-max", corpus_opt.spec.n_max, "Largest order")->capture_default_str();
  corpus->add_option("--max-cond", corpus_opt.spec.max_condition, "Condition cap per part")->capture_default_str();
  corpus->add_option("--k", corpus_opt.k, "Fixed leading block order (default: every k <= n/2)");
  corpus->add_option("--workers", corpus_opt.workers, "Worker threads")->capture_default_str();
  add_tolerance_flags(corpus, corpus_opt.tol);
  add_output_flags(corpus, corpus_out);

  // scan
  OutputFlags scan_out;
  ScanOptions scan_opt;
  std::optional<std::uint64_t> scan_seed;
  auto* scan = app.add_subcommand("scan", "Maximize the Fischer ratio for every (n, k) up to --n");
  scan->add_option("--n", scan_opt.n_max, "Largest order scanned")->capture_default_str();
  scan->add_option("--seed", scan_seed, "Search seed (default: $ADFISCHER_SEED or 1)");
  scan->add_option("--restarts", scan_opt.budget.restarts, "Restarts per cell")->capture_default_str();
  scan->add_option("--steps", scan_opt.budget.steps_per_restart, "Steps per restart")->capture_default_str();
  scan->add_option("--pd-floor", scan_opt.budget.pd_floor, "Relative PD floor for iterates")->capture_default_str();
  scan->add_option("--initial-step", scan_opt.budget.initial_step, "Initial perturbation size")->capture_default_str();
  scan->add_option("--shrink", scan_opt.budget.shrink, "Step shrink factor")->capture_default_str();
  scan->add_option("--patience", scan_opt.budget.patience, "Rejections before shrinking")->capture_default_str();
  scan->add_option("--workers", scan_opt.budget.workers, "Worker threads")->capture_default_str();
  add_output_flags(scan, scan_out);

  // example
  OutputFlags example_out;
  Tolerances example_tol;
  std::vector<double> epsilons = default_example_epsilons();
  auto* example = app.add_subcommand("example", "Tabulate the two-by-two family against its closed form");
  example->add_option("--eps", epsilons, "Epsilon values")->delimiter(',');
  add_tolerance_flags(example, example_tol);
  add_output_flags(example, example_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::invalid_input);
  }

  try {
    if (*verify) {
      if (matrix_path.empty() && !verify_eps) throw DomainError("verify needs a matrix file or --example-eps");
      const auto a = verify_eps ? example_family({*verify_eps}) : read_matrix_file(matrix_path);
      VerifyOptions opt{a, verify_eps ? "example eps=" + format_double(*verify_eps) : matrix_path, verify_k,
                        verify_tol};
      const auto outcome = cmd_verify(opt);
      if (outcome.exit == ExitCode::invalid_input) std::cerr << "input rejected: not accretive-dissipative\n";
      return emit(outcome, verify_out);
    }
    if (*corpus) {
      corpus_opt.spec.seed = corpus_seed ? *corpus_seed : default_seed();
      if (corpus_n) corpus_opt.spec.n_min = corpus_opt.spec.n_max = *corpus_n;
      return emit(cmd_corpus(corpus_opt), corpus_out);
    }
    if (*scan) {
      scan_opt.budget.seed = scan_seed ? *scan_seed : default_seed();
      return emit(cmd_scan(scan_opt), scan_out);
    }
    if (*example) return emit(cmd_example(epsilons, example_tol), example_out);
  } catch (const ImplementationBugError& e) {
    std::cerr << "implementation bug: " << e.what() << '\n';
    return static_cast<int>(ExitCode::theorem_failure);
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_failure);
  } catch (const SingularityError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_failure);
  } catch (const DegenerateInstanceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_failure);
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return static_cast<int>(ExitCode::invalid_input);
  }
  return static_cast<int>(ExitCode::invalid_input);
}
