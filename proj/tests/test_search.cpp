#include <gtest/gtest.h>

#include <atomic>

#include "adfischer/parallel.hpp"
#include "adfischer/report.hpp"
#include "adfischer/search.hpp"

using namespace adfischer;

namespace {

SearchConfig small_config(std::size_t n, std::size_t k, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.restarts = 4;
  cfg.steps_per_restart = 300;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(ParallelFor, CoversEveryIndexOnce) {
  for (unsigned workers : {1u, 3u, 16u}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 4,
                            [](std::size_t i) {
                              if (i == 7) throw DomainError("boom");
                            }),
               DomainError);
}

TEST(SearchConfig, Validation) {
  SearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  auto bad = [&](auto mutate) {
    SearchConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), std::exception);
  };
  bad([](SearchConfig& c) { c.n = 1; });
  bad([](SearchConfig& c) { c.k = 2; });
  bad([](SearchConfig& c) { c.restarts = 0; });
  bad([](SearchConfig& c) { c.shrink = 1; });
  bad([](SearchConfig& c) { c.pd_floor = 0; });
  bad([](SearchConfig& c) { c.initial_step = -1; });
  bad([](SearchConfig& c) { c.patience = 0; });
  bad([](SearchConfig& c) { c.seed_points.push_back(ComplexMatrix::identity(3)); });
}

TEST(Search, ZeroStepsReturnsSeedPointRatio) {
  SearchConfig cfg = small_config(2, 1, 1);
  cfg.restarts = 1;
  cfg.steps_per_restart = 0;
  cfg.seed_points = {example_family({1.0})};
  const auto res = maximize_ratio(cfg);
  EXPECT_DOUBLE_EQ(res.best_rho, 1.25);
  EXPECT_EQ(res.witness, example_family({1.0}));
  EXPECT_TRUE(res.trajectory.at(0).from_seed_point);
  EXPECT_EQ(res.evaluations(), 0u);
  EXPECT_NEAR(res.conjecture_margin, 0.75, 1e-15);
}

TEST(Search, IncumbentsStrictlyIncrease) {
  const auto res = maximize_ratio(small_config(3, 1, 5));
  for (const auto& t : res.trajectory) {
    EXPECT_EQ(t.incumbents.size(), t.accepted);
    double prev = t.start_rho;
    for (double v : t.incumbents) {
      EXPECT_GT(v, prev);
      prev = v;
    }
    EXPECT_EQ(t.best_rho, prev);
    EXPECT_EQ(t.accepted + t.rejected + t.skipped, 300u);
    EXPECT_LE(t.final_step, 0.1);
  }
}

TEST(Search, WitnessReproducesBestRho) {
  const auto res = maximize_ratio(small_config(4, 2, 6));
  EXPECT_TRUE(is_accretive_dissipative(res.witness, res.pd_floor).is_ad);
  EXPECT_EQ(fischer_ratio(partition(res.witness, 2, res.pd_floor)), res.best_rho);
  EXPECT_GE(res.best_rho, 1.0);
  EXPECT_LE(res.best_rho, res.bound_set.lin_a + kSoundnessSlack);
}

TEST(Search, DeterministicAcrossWorkerCounts) {
  auto cfg = small_config(3, 1, 7);
  cfg.restarts = 6;
  const auto one = maximize_ratio(cfg);
  cfg.workers = 4;
  const auto four = maximize_ratio(cfg);
  EXPECT_EQ(Json(one).dump(), Json(four).dump());
  EXPECT_EQ(one.trajectory, four.trajectory);
}

TEST(Search, SeedChangesTrajectory) {
  const auto a = maximize_ratio(small_config(3, 1, 8));
  const auto b = maximize_ratio(small_config(3, 1, 9));
  EXPECT_NE(a.trajectory, b.trajectory);
}

TEST(Search, ApproachesTwoInTheSmallestCase) {
  SearchConfig cfg;
  cfg.n = 2;
  cfg.k = 1;
  cfg.seed = 2024;
  const auto res = maximize_ratio(cfg);
  EXPECT_GE(res.best_rho, 1.99);
  EXPECT_LE(res.best_rho, 2.0 + kSoundnessSlack);
  EXPECT_FALSE(res.conjecture_flag);
}

TEST(Search, UncertifiableSeedPointFallsBack) {
  SearchConfig cfg = small_config(2, 1, 3);
  cfg.restarts = 1;
  cfg.steps_per_restart = 0;
  cfg.seed_points = {ComplexMatrix::identity(2)};
  const auto res = maximize_ratio(cfg);
  EXPECT_FALSE(res.trajectory[0].from_seed_point);
  EXPECT_GE(res.best_rho, 1.0 - 1e-12);
}

TEST(ExtendedPrecision, AgreesWithDoubleRatio) {
  const auto p = partition(example_family_block({0.01}, 2), 2);
  EXPECT_NEAR(detail::extended_precision_ratio(p), fischer_ratio(p), 1e-12);
  const auto q = partition(example_family_embedded({0.3}, 7, 3), 3);
  EXPECT_NEAR(detail::extended_precision_ratio(q), fischer_ratio(q), 1e-12);
}

TEST(Scan, CoversSplitsAndStaysBelowCeiling) {
  SearchConfig budget;
  budget.restarts = 3;
  budget.steps_per_restart = 150;
  budget.seed = 11;
  const auto table = conjecture_scan(5, budget);
  // (2,1) (3,1) (4,1) (4,2) (5,1) (5,2)
  ASSERT_EQ(table.size(), 6u);
  EXPECT_EQ(table[3].n, 4u);
  EXPECT_EQ(table[3].k, 2u);
  EXPECT_EQ(table[3].m, 2u);
  for (const auto& cell : table) {
    EXPECT_LE(cell.result.best_rho, cell.result.bound_set.lin_a + kSoundnessSlack);
    // The embedded family at eps = 0.5 is a seed, so rho >= (13/9)^m.
    EXPECT_GE(cell.result.best_rho, std::pow(13.0 / 9.0, static_cast<double>(cell.m)) - 1e-12);
  }
  EXPECT_THROW(conjecture_scan(1, budget), DomainError);
}
