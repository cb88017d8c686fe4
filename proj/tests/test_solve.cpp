#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "examsched/propagation.hpp"
#include "examsched/solve.hpp"
#include "support/oracle.hpp"

using namespace examsched;

namespace {

SolveLimits quick() {
  SolveLimits l;
  l.time_limit = 60;
  return l;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    if (value) setenv(name, value, 1);
    else unsetenv(name);
  }
  ~ScopedEnv() {
    if (old_.empty()) unsetenv(name_);
    else setenv(name_, old_.c_str(), 1);
  }

 private:
  const char* name_;
  std::string old_;
};

}  // namespace

TEST(BruteForce, AgreesWithNaiveOracle) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    auto bf = brute_force_optimal(inst, w);
    auto naive = oracle::naive_optimum(inst, w);
    ASSERT_EQ(bf.schedule.has_value(), naive.feasible);
    if (naive.feasible) {
      ASSERT_EQ(bf.objective, naive.objective);
      ASSERT_TRUE(evaluate_schedule(inst, *bf.schedule, w).hard_feasible());
    }
  }
}

TEST(BruteForce, BudgetIsEnforced) {
  Instance inst = oracle::load_fixture("tiny");
  try {
    brute_force_optimal(inst, survey_weights(), 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSearchBudget);
  }
}

TEST(Builtin, MatchesOracleOnTinyInstances) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 60; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    auto naive = oracle::naive_optimum(inst, w);
    MilpModel m = build_full_model(inst, w);
    SolveOutcome out = solve_model(m, quick());
    if (!naive.feasible) {
      ASSERT_EQ(out.status, SolveStatus::kInfeasible) << i;
      continue;
    }
    ASSERT_EQ(out.status, SolveStatus::kOptimal) << i;
    ASSERT_EQ(*out.objective, naive.objective) << i;
    ASSERT_EQ(*out.bound, naive.objective);
    auto r = evaluate_schedule(inst, out.assignment, w);
    ASSERT_TRUE(r.hard_feasible());
    ASSERT_EQ(r.weighted_objective, naive.objective);
    ASSERT_LE(m.max_violation(out.values), 1e-9);
  }
}

TEST(Builtin, WorkLimitIsDeterministic) {
  std::mt19937_64 rng(2);
  oracle::TinyLimits lim;
  lim.max_slots = 12;
  lim.max_groups = 8;
  Instance inst = oracle::random_tiny_instance(rng, lim);
  MilpModel m = build_full_model(inst, survey_weights());
  SolveLimits l = quick();
  l.work_limit = 20000;
  auto a = solve_model(m, l), b = solve_model(m, l);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.bound, b.bound);
}

TEST(Builtin, IncumbentsImprove) {
  Instance inst = oracle::load_fixture("tiny");
  MilpModel m = build_full_model(inst, survey_weights());
  std::vector<double> seen;
  SolveLimits l = quick();
  l.incumbent_callback = [&](double, double obj) { seen.push_back(obj); };
  auto out = solve_model(m, l);
  ASSERT_FALSE(seen.empty());
  for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_LT(seen[i], seen[i - 1]);
  EXPECT_EQ(seen.back(), *out.objective);
  ASSERT_EQ(out.incumbent_log.size(), seen.size());
}

TEST(Builtin, RejectsBadLimitsAndBackends) {
  Instance inst = oracle::load_fixture("singleton");
  MilpModel m = build_full_model(inst, survey_weights());
  SolveLimits l;
  l.time_limit = -1;
  EXPECT_THROW(solve_model(m, l), Error);
  EXPECT_THROW(solve_model(m, quick(), "cplex"), Error);
}

TEST(Propagation, CompleteAssignmentScoresLikeEvaluator) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    MilpModel m = build_full_model(inst, w);
    PropagationEngine e(m);
    ASSERT_EQ(e.n_blocks(), inst.n_groups());
    Schedule s = oracle::random_schedule(inst, rng, false);
    double last = e.objective();
    for (int b = 0; b < e.n_blocks(); ++b) {
      auto vars = e.block_vars(b);
      int g = m.var_index(vars[0])[0];
      e.assign(b, vars[static_cast<std::size_t>(s[g])]);
      ASSERT_GE(e.objective() + 1e-9, last);  // bound only rises
      last = e.objective();
    }
    auto r = evaluate_schedule(inst, s, w);
    // Single-variable rows live in allowed(), not in the dead count.
    bool ok = e.dead() == 0;
    for (int b = 0; b < e.n_blocks(); ++b) {
      const auto& a = e.allowed(b);
      ok = ok && std::find(a.begin(), a.end(), e.chosen(b)) != a.end();
    }
    ASSERT_EQ(ok, r.hard_feasible()) << i;
    if (r.hard_feasible()) {
      ASSERT_EQ(e.objective(), r.weighted_objective);
    }
    for (int b = e.n_blocks() - 1; b >= 0; --b) e.assign(b, -1);
    ASSERT_EQ(e.dead(), 0);
  }
}

TEST(External, SolvesThroughMpsProgram) {
  ScopedEnv env(kBackendEnv, EXAMSCHED_MPS_SOLVE);
  std::mt19937_64 rng(40);
  for (int i = 0; i < 8; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    MilpModel m = build_full_model(inst, w);
    auto ext = solve_model(m, quick(), "external");
    auto own = solve_model(m, quick(), "builtin");
    ASSERT_EQ(ext.status, own.status);
    ASSERT_EQ(ext.objective, own.objective);
  }
}

TEST(External, MissingProgram) {
  ScopedEnv env(kBackendEnv, nullptr);
  Instance inst = oracle::load_fixture("singleton");
  MilpModel m = build_full_model(inst, survey_weights());
  try {
    solve_model(m, quick(), "external");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}
