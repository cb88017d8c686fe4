#include <gtest/gtest.h>

#include <random>

#include "examsched/evaluate.hpp"
#include "support/oracle.hpp"

using namespace examsched;

namespace {

Instance line_instance(std::vector<std::vector<int>> student_groups, int n_groups,
                       std::vector<std::vector<int>> faculty_groups = {}) {
  IncidenceSpec spec;
  spec.period = default_period_config();
  for (std::size_t s = 0; s < student_groups.size(); ++s) spec.students.push_back("s" + std::to_string(s));
  for (std::size_t f = 0; f < faculty_groups.size(); ++f) spec.faculty.push_back("f" + std::to_string(f));
  for (int g = 0; g < n_groups; ++g) spec.group_labels.push_back("g" + std::to_string(g));
  spec.groups_of_student = std::move(student_groups);
  spec.groups_of_faculty = std::move(faculty_groups);
  return make_instance(spec);
}

}  // namespace

TEST(Evaluate, MatchesNaiveOnRandomPairs) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    Instance inst = oracle::random_tiny_instance(rng, {6, 12, 12, 3});
    Weights w = oracle::random_weights(rng);
    Schedule s = oracle::random_schedule(inst, rng, i % 2 == 0);
    auto r = evaluate_schedule(inst, s, w);
    auto n = oracle::naive_evaluate(inst, s, w);
    for (auto m : kAllMetrics) ASSERT_EQ(r.head_count(m), n.heads[static_cast<std::size_t>(m)]) << metric_key(m);
    ASSERT_EQ(r.overlap_occurrences, n.overlap_occurrences);
    ASSERT_EQ(r.b2b_occurrences, n.b2b_occurrences);
    ASSERT_EQ(r.pm_to_am_occurrences, n.pm_to_am_occurrences);
    ASSERT_EQ(r.hard_feasible(), n.hard_feasible);
    ASSERT_EQ(r.weighted_objective, n.objective);
  }
}

TEST(Evaluate, OccurrenceVersusPersonAccounting) {
  // One student with b2b twice on Monday (slots 0-1-2) and a 3-in-24.
  Instance inst = line_instance({{0, 1, 2}}, 3);
  Weights w{0, 1, 0, 1, 0, 0, 0};
  auto r = evaluate_schedule(inst, Schedule({0, 1, 2}), w);
  EXPECT_EQ(r.b2b_occurrences, 2);
  EXPECT_EQ(r.head_count(Metric::kStudentB2B), 1);
  EXPECT_EQ(r.head_count(Metric::kStudentThreeIn24), 1);
  EXPECT_EQ(r.weighted_objective, 3.0);
}

TEST(Evaluate, NightToMorning) {
  Instance inst = line_instance({{0, 1}}, 2);
  auto r = evaluate_schedule(inst, Schedule({3, 4}), survey_weights());  // Mon night, Tue 08:00
  EXPECT_EQ(r.pm_to_am_occurrences, 1);
  EXPECT_EQ(r.b2b_occurrences, 0);
  r = evaluate_schedule(inst, Schedule({2, 3}), survey_weights());  // Mon 15:00, Mon night
  EXPECT_EQ(r.b2b_occurrences, 1);
}

TEST(Evaluate, OverlapCapIsHard) {
  Instance inst = line_instance({{0, 1, 2}}, 3);
  auto r = evaluate_schedule(inst, Schedule({5, 5, 9}), survey_weights());
  EXPECT_TRUE(r.hard_feasible());
  EXPECT_EQ(r.overlap_occurrences, 1);
  r = evaluate_schedule(inst, Schedule({5, 5, 5}), survey_weights());
  EXPECT_FALSE(r.hard_feasible());
}

TEST(Evaluate, FacultyCountedOncePerPerson) {
  Instance inst = line_instance({}, 4, {{0, 1, 2, 3}});
  auto r = evaluate_schedule(inst, Schedule({0, 0, 4, 4}), survey_weights());
  EXPECT_EQ(r.faculty_overlap_occurrences, 2);
  EXPECT_EQ(r.head_count(Metric::kFacultyOverlap), 1);
  EXPECT_EQ(r.weighted_objective, survey_weights().faculty_overlap);
}

TEST(Evaluate, SingletonFixtureIsAllZero) {
  Instance inst = oracle::load_fixture("singleton");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto r = evaluate_schedule(inst, oracle::random_schedule(inst, rng, true), survey_weights());
    for (auto m : kAllMetrics) EXPECT_EQ(r.head_count(m), 0);
    EXPECT_EQ(r.weighted_objective, 0.0);
  }
}

TEST(Evaluate, RejectsMalformedSchedules) {
  Instance inst = line_instance({{0, 1}}, 2);
  EXPECT_THROW(evaluate_schedule(inst, Schedule({0}), survey_weights()), Error);
  EXPECT_THROW(evaluate_schedule(inst, Schedule({0, 22}), survey_weights()), Error);
  EXPECT_THROW(evaluate_schedule(inst, Schedule({0, -1}), survey_weights()), Error);
  EXPECT_NO_THROW(evaluate_partial(inst, Schedule({0, -1}), survey_weights()));
}

TEST(Evaluate, DeltaIsDifferenceOfEvaluations) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    Schedule a = oracle::random_schedule(inst, rng, false), b = oracle::random_schedule(inst, rng, false);
    auto ra = evaluate_schedule(inst, a, w), rb = evaluate_schedule(inst, b, w);
    auto d = report_delta(rb, ra);
    ASSERT_EQ(d.weighted_objective, rb.weighted_objective - ra.weighted_objective);
    for (auto m : kAllMetrics)
      ASSERT_EQ(d.head_counts[static_cast<std::size_t>(m)], rb.head_count(m) - ra.head_count(m));
  }
}

TEST(OverlapMatrix, CoEnrollmentCounts) {
  Instance inst = line_instance({{0, 1}, {0, 1}, {1, 2}}, 3);
  auto m = overlap_matrix(inst, &inst);
  EXPECT_EQ(m.current(0, 1), 2);
  EXPECT_EQ(m.current(1, 1), 3);
  EXPECT_EQ(m.current(0, 2), 0);
  ASSERT_TRUE(m.historical);
  EXPECT_EQ(*m.historical, m.current);
}
