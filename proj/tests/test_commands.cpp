#include <gtest/gtest.h>

#include "adfischer/commands.hpp"
#include "oracles.hpp"

using namespace adfischer;

TEST(Verify, ExampleMatrixPassesEverything) {
  const auto out = cmd_verify({example_family({0.01}), "eps=0.01", std::nullopt, {}});
  EXPECT_EQ(out.exit, ExitCode::success);
  EXPECT_EQ(out.report.summary.failed, 0u);
  EXPECT_EQ(out.report.summary.total, 11u);  // 3 lemma checks + 8 per split
  EXPECT_TRUE(out.witnesses.empty());
  ASSERT_EQ(out.report.results.size(), 2u);
  const auto& split = out.report.results[1];
  EXPECT_EQ(split.at("type"), "split");
  EXPECT_NEAR(split.at("bounds").at("rho").get<double>(), example_ratio_closed_form(0.01), 1e-13);
}

TEST(Verify, SplitSweepAndFixedK) {
  oracle::Gen g(61);
  const auto a = g.ad(7);
  auto all = cmd_verify({a, "random", std::nullopt, {}});
  EXPECT_EQ(all.report.results.size(), 1u + 3u);  // k = 1, 2, 3
  EXPECT_EQ(all.exit, ExitCode::success);
  auto one = cmd_verify({a, "random", 5, {}});
  EXPECT_EQ(one.report.results.size(), 2u);
  EXPECT_EQ(one.report.results[1].at("theorem4").at("orientation"), "as_given");
  EXPECT_EQ(cmd_verify({a, "random", 2, {}}).report.results[1].at("theorem4").at("orientation"), "swapped");
}

TEST(Verify, BlockDiagonalHasUnitRatio) {
  ComplexMatrix a(4, 4);
  a.set_block(0, 0, example_family({0.7}));
  a.set_block(2, 2, ComplexMatrix::identity(2) * Complex(1, 3));
  const auto out = cmd_verify({a, "blocks", 2, {}});
  EXPECT_EQ(out.exit, ExitCode::success);
  EXPECT_NEAR(out.report.results[1].at("bounds").at("rho").get<double>(), 1.0, 1e-14);
}

TEST(Verify, NonAdInputIsRejected) {
  const auto out = cmd_verify({ComplexMatrix::from_rows({{2, 1}, {1, 2}}), "hermitian", std::nullopt, {}});
  EXPECT_EQ(out.exit, ExitCode::invalid_input);
  ASSERT_EQ(out.report.results.size(), 1u);
  EXPECT_EQ(out.report.results[0].at("type"), "rejected");
  EXPECT_FALSE(out.report.results[0].at("certificate").at("imag_part").at("is_pd").get<bool>());
}

TEST(Verify, ShapeErrors) {
  EXPECT_THROW(cmd_verify({ComplexMatrix(2, 3), "x", std::nullopt, {}}), DimensionError);
  EXPECT_THROW(cmd_verify({ComplexMatrix::identity(1) * Complex(1, 1), "x", std::nullopt, {}}), DimensionError);
  EXPECT_THROW(cmd_verify({example_family({1.0}), "x", 2, {}}), DimensionError);
}

TEST(Corpus, SmallRunPassesAndIsDeterministic) {
  CorpusOptions opt;
  opt.spec.seed = 4;
  opt.count = 30;
  const auto a = cmd_corpus(opt);
  EXPECT_EQ(a.exit, ExitCode::success);
  EXPECT_EQ(a.report.summary.failed, 0u);
  EXPECT_GE(a.report.summary.total, 30u);
  EXPECT_GT(a.report.extra.at("min_relative_lin_margin").get<double>(), 0.0);
  opt.workers = 3;
  EXPECT_EQ(serialize(cmd_corpus(opt).report), serialize(a.report));
}

TEST(Corpus, EmptyAndFixedK) {
  CorpusOptions opt;
  opt.count = 0;
  const auto empty = cmd_corpus(opt);
  EXPECT_EQ(empty.report.summary.total, 0u);
  EXPECT_EQ(empty.exit, ExitCode::success);

  opt.count = 5;
  opt.k = 1;
  EXPECT_EQ(cmd_corpus(opt).report.summary.total, 5u);
  opt.k = 2;  // n_min = 2 admits only k = 1
  EXPECT_THROW(cmd_corpus(opt), DimensionError);
}

TEST(Example, DefaultRowsMatchClosedForm) {
  const auto out = cmd_example(default_example_epsilons());
  EXPECT_EQ(out.exit, ExitCode::success);
  EXPECT_TRUE(out.report.extra.at("monotone_toward_bound").get<bool>());
  ASSERT_EQ(out.report.results.size(), 7u);
  for (const auto& row : out.report.results) EXPECT_LE(row.at("relative_error").get<double>(), kExampleTol);
  EXPECT_GE(out.report.results.back().at("rho").get<double>(), 2 - 1e-5);
  EXPECT_THROW(cmd_example({1.0, -1.0}), DomainError);
}

TEST(Scan, SmallBudget) {
  ScanOptions opt;
  opt.n_max = 4;
  opt.budget.restarts = 2;
  opt.budget.steps_per_restart = 100;
  opt.budget.seed = 3;
  const auto out = cmd_scan(opt);
  EXPECT_EQ(out.exit, ExitCode::success);
  EXPECT_EQ(out.report.summary.total, 4u);
  EXPECT_EQ(out.report.summary.conjecture_flags, 0u);
  EXPECT_EQ(serialize(cmd_scan(opt).report), serialize(out.report));
}

TEST(Csv, HeadersPerCommand) {
  const auto ex = to_csv(cmd_example({1.0}).report);
  EXPECT_EQ(ex, "epsilon,rho,closed_form,relative_error,conjecture_bound,margin\n1,1.25,1.25,0,2,0.75\n");
  const auto ver = to_csv(cmd_verify({example_family({1.0}), "x", std::nullopt, {}}).report);
  EXPECT_EQ(ver.substr(0, ver.find('\n')), "k,chain,orientation,step,kind,lhs,rhs,margin,pass");
  // Step descriptions contain commas only inside quotes.
  EXPECT_EQ(std::count(ver.begin(), ver.end(), '\n'), 1 + 4 + 15);
}
