#include <gtest/gtest.h>

#include "examsched/documents.hpp"
#include "support/oracle.hpp"

using namespace examsched;

namespace {

PortfolioConfig tiny_config(int parallel) {
  PortfolioConfig c;
  c.k_values = parse_k_range("17..21");
  c.max_parallel = parallel;
  c.seed = 7;
  c.run.phase1_initial_limit = 30;
  c.run.phase1_extension = 30;
  c.run.phase1_hard_cap = 60;
  c.run.phase2_limit = 60;
  return c;
}

}  // namespace

TEST(Portfolio, KRanges) {
  EXPECT_EQ(parse_k_range("17..21"), (std::vector<int>{17, 18, 19, 20, 21}));
  EXPECT_EQ(parse_k_range("19"), (std::vector<int>{19}));
  EXPECT_EQ(parse_k_range("17, 19,21"), (std::vector<int>{17, 19, 21}));
  EXPECT_THROW(parse_k_range("21..17"), Error);
  EXPECT_THROW(parse_k_range("x"), Error);
  EXPECT_THROW(parse_k_range(""), Error);
}

TEST(Portfolio, DefaultCatalog) {
  auto cat = default_catalog();
  ASSERT_EQ(cat.size(), 4u);
  EXPECT_EQ(cat[0].weights, survey_weights());
  for (const auto& w : cat) EXPECT_TRUE(w.weights.non_negative());
  EXPECT_EQ(cat[2].weights.faculty_overlap, 0.0);
}

TEST(Portfolio, SeedsDifferPerRun) {
  std::set<std::uint64_t> seeds;
  for (int w = 0; w < 4; ++w)
    for (int k = 17; k <= 21; ++k) seeds.insert(run_seed(7, w, k));
  EXPECT_EQ(seeds.size(), 20u);
  EXPECT_EQ(run_seed(7, 1, 18), run_seed(7, 1, 18));
}

TEST(Portfolio, TwentyRunsFourBest) {
  Instance inst = oracle::load_fixture("tiny");
  auto cat = default_catalog();
  std::atomic<int> callbacks{0};
  auto res = run_portfolio(inst, cat, tiny_config(4), [&](const PortfolioRun&) { ++callbacks; });
  ASSERT_EQ(res.runs.size(), 20u);
  EXPECT_EQ(callbacks.load(), 20);
  ASSERT_EQ(res.best.size(), 4u);
  for (std::size_t w = 0; w < 4; ++w) {
    const auto& b = res.best[w];
    ASSERT_GE(b.run_index, 0);
    double mine = evaluate_schedule(inst, b.schedule, cat[w].weights).weighted_objective;
    for (const auto& r : res.runs) {
      if (r.weight_index != static_cast<int>(w) || r.failed) continue;
      EXPECT_EQ(r.k_used, inst.n_groups());
      double other = evaluate_schedule(inst, r.result.schedule, cat[w].weights).weighted_objective;
      EXPECT_LE(mine, other);
    }
  }
}

TEST(Portfolio, SerialManifestIsReproducible) {
  Instance inst = oracle::load_fixture("tiny");
  auto a = run_portfolio(inst, default_catalog(), tiny_config(1));
  auto b = run_portfolio(inst, default_catalog(), tiny_config(1));
  EXPECT_EQ(dump(portfolio_manifest(inst, a, tiny_config(1))), dump(portfolio_manifest(inst, b, tiny_config(1))));
  auto c = run_portfolio(inst, default_catalog(), tiny_config(4));
  EXPECT_EQ(dump(portfolio_manifest(inst, a, tiny_config(1)))
                .compare(dump(portfolio_manifest(inst, c, tiny_config(1)))),
            0);
}

TEST(Portfolio, FailedRunDoesNotStopSweep) {
  Instance inst = oracle::load_fixture("tiny");
  PortfolioConfig c = tiny_config(2);
  c.run.backend = "external";  // no program configured
  unsetenv(kBackendEnv);
  auto res = run_portfolio(inst, default_catalog(), c);
  ASSERT_EQ(res.runs.size(), 20u);
  for (const auto& r : res.runs) EXPECT_TRUE(r.failed);
  for (const auto& b : res.best) EXPECT_EQ(b.run_index, -1);
  EXPECT_THROW(run_portfolio(inst, {}, tiny_config(1)), Error);
}
