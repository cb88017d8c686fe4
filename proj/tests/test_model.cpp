#include <gtest/gtest.h>

#include <random>
#include <set>

#include "examsched/heuristic.hpp"
#include "examsched/model.hpp"
#include "support/oracle.hpp"

using namespace examsched;

namespace {

int count_members(const Incidence& m, int row) {
  int n = 0;
  for (Incidence::InnerIterator it(m, row); it; ++it) ++n;
  return n;
}

}  // namespace

TEST(Model, FamilySizesOnFixture) {
  Instance inst = oracle::load_fixture("tiny");
  MilpModel m = build_full_model(inst, survey_weights());
  const int G = inst.n_groups(), T = inst.n_slots(), S = inst.n_students(), F = inst.n_faculty();
  const int B = static_cast<int>(inst.patterns.b2b_pairs.size()), P = static_cast<int>(inst.patterns.pm_to_am_pairs.size());
  EXPECT_EQ(m.count_vars(VarFamily::kX), G * T);
  EXPECT_EQ(m.count_vars(VarFamily::kV), S * T);
  EXPECT_EQ(m.count_vars(VarFamily::kW), F * T);
  EXPECT_EQ(m.count_vars(VarFamily::kZOverlap), S * T);
  EXPECT_EQ(m.count_vars(VarFamily::kZB2B), S * B);
  EXPECT_EQ(m.count_vars(VarFamily::kZPmToAm), S * P);
  EXPECT_EQ(m.count_vars(VarFamily::kZThreeIn24), S);
  EXPECT_EQ(m.count_vars(VarFamily::kZFourIn48), S);
  EXPECT_EQ(m.count_vars(VarFamily::kZFacOverlap), F);
  EXPECT_EQ(m.count_vars(VarFamily::kZFacB2B), F);
  int three = 0, four = 0;
  for (int s = 0; s < S; ++s) {
    int k = count_members(inst.student_group, s);
    three += k >= 3;
    four += k >= 4;
  }
  const std::vector<int> expected = {G,     S * T, S * T, G * T, T,         G * T, G * T, S * T,
                                     S * B, S * P, three * static_cast<int>(inst.patterns.windows_3in24.size()),
                                     four * static_cast<int>(inst.patterns.windows_4in48.size()),
                                     F * T, F * T, F * T, F * B};
  for (int f = 1; f <= 16; ++f) EXPECT_EQ(m.count_rows(static_cast<RowFamily>(f)), expected[f - 1]) << "c" << f;
}

TEST(Model, CanonicalNames) {
  Instance inst = oracle::load_fixture("tiny");
  MilpModel m = build_full_model(inst, survey_weights());
  EXPECT_EQ(m.var_name(0), "x_0_0");
  EXPECT_EQ(m.var_name(inst.n_slots() + 3), "x_1_3");
  EXPECT_EQ(m.row_name(0), "c1_0");
  std::set<std::string> names;
  for (int j = 0; j < m.n_vars(); ++j) names.insert(m.var_name(j));
  EXPECT_EQ(static_cast<int>(names.size()), m.n_vars());
}

TEST(Model, BlockedSlotRowHasZeroRhs) {
  Instance inst = oracle::load_fixture("tiny");
  MilpModel m = build_full_model(inst, survey_weights());
  const int g = inst.group_index("MWF-0900");
  int checked = 0;
  for (int r = 0; r < m.n_rows(); ++r) {
    if (m.row_family(r) != 7) continue;
    auto idx = m.row_index(r);
    ASSERT_EQ(m.sense(r), Sense::kLessEqual);
    EXPECT_EQ(m.rhs(r), inst.forbidden(idx[0], idx[1]) ? 0.0 : 1.0);
    checked += idx[0] == g && idx[1] == 0;
  }
  EXPECT_EQ(checked, 1);
}

// The induced assignment of a hard-feasible schedule satisfies every row and
// scores exactly the evaluator's objective.
TEST(Model, InducedAssignmentMatchesEvaluator) {
  std::mt19937_64 rng(21);
  int infeasible_seen = 0;
  for (int i = 0; i < 600; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    MilpModel m = build_full_model(inst, w);
    Schedule s = oracle::random_schedule(inst, rng, i % 3 != 0);
    auto r = evaluate_schedule(inst, s, w);
    auto values = induced_assignment(m, s);
    if (r.hard_feasible()) {
      ASSERT_LE(m.max_violation(values), 1e-9);
      ASSERT_EQ(m.objective_value(values), r.weighted_objective);
    } else {
      ++infeasible_seen;
      ASSERT_GT(m.max_violation(values), 0.5);
    }
  }
  EXPECT_GT(infeasible_seen, 10);
}

TEST(Model, PhaseOneIsRestricted) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    auto subset = select_phase1_groups(inst, 1 + i % inst.n_groups());
    MilpModel m = build_phase1_model(inst, w, subset);
    EXPECT_EQ(m.metadata.phase, "phase1");
    ASSERT_EQ(m.count_vars(VarFamily::kX), static_cast<int>(subset.size()) * inst.n_slots());
    for (auto f : {VarFamily::kW, VarFamily::kZThreeIn24, VarFamily::kZFourIn48, VarFamily::kZFacOverlap,
                   VarFamily::kZFacB2B})
      ASSERT_EQ(m.count_vars(f), 0);
    for (int f = 11; f <= 16; ++f) {
      if (f == 15) continue;
      ASSERT_EQ(m.count_rows(static_cast<RowFamily>(f)), 0);
    }
    // Faculty cap rows: one per slot for each faculty member with 3+ subset groups.
    int capped = 0;
    for (int f = 0; f < inst.n_faculty(); ++f) {
      int n = 0;
      for (int g : subset) n += inst.faculty_group.coeff(f, g);
      capped += n >= 3;
    }
    ASSERT_EQ(m.count_rows(15), capped * inst.n_slots());
    for (int r = 0; r < m.n_rows(); ++r) {
      if (m.row_family(r) != 15) continue;
      ASSERT_EQ(m.rhs(r), 2.0);
    }

    Schedule s = oracle::random_schedule(inst, rng, true);
    Schedule partial = Schedule::unassigned(inst.n_groups());
    for (int g : subset) partial[g] = s[g];
    auto r = evaluate_partial(inst, partial, w);
    auto values = induced_assignment(m, partial);
    if (!r.hard_feasible()) continue;
    ASSERT_LE(m.max_violation(values), 1e-9);
    ASSERT_EQ(m.objective_value(values), w.overlap * r.overlap_occurrences + w.b2b * r.b2b_occurrences +
                                             w.pm_to_am * r.pm_to_am_occurrences);
    ASSERT_EQ(schedule_from_values(m, values, inst.n_groups()), partial);
  }
}

TEST(Model, PhaseOneNeedsPinnedGroups) {
  Instance inst = oracle::load_fixture("tiny");
  int pinned = inst.group_index("MW-1500");
  std::vector<int> without;
  for (int g = 0; g < inst.n_groups(); ++g)
    if (g != pinned) without.push_back(g);
  EXPECT_THROW(build_phase1_model(inst, survey_weights(), without), Error);
  auto chosen = select_phase1_groups(inst, 1);
  EXPECT_NE(std::find(chosen.begin(), chosen.end(), pinned), chosen.end());
}

TEST(Model, FixesConflictWithBlocks) {
  Instance inst = oracle::load_fixture("tiny");
  FixSet bad{{{inst.group_index("MWF-0900"), 0}}};
  EXPECT_THROW(build_full_model(inst, survey_weights(), &bad), Error);
  FixSet twice{{{inst.group_index("MW-1500"), 7}}};
  EXPECT_THROW(build_full_model(inst, survey_weights(), &twice), Error);
  FixSet ok{{{0, 9}}};
  MilpModel m = build_full_model(inst, survey_weights(), &ok);
  for (int r = 0; r < m.n_rows(); ++r)
    if (m.row_family(r) == 6 && m.row_index(r) == std::array<int, 2>{0, 9}) {
      EXPECT_EQ(m.rhs(r), 1.0);
    }
}

TEST(ModelIo, MpsKeepsLongNamesApart) {
  Instance inst = oracle::load_fixture("tiny");
  MilpModel m = build_full_model(inst, survey_weights());
  ImportedModel back = read_mps(export_model(m, ExportFormat::kMps));
  ASSERT_EQ(back.model.n_vars(), m.n_vars());
  ASSERT_EQ(back.model.n_nonzeros(), m.n_nonzeros());
  for (int j = 0; j < m.n_vars(); ++j) ASSERT_EQ(back.model.var_name(j), m.var_name(j));
}

TEST(ModelIo, MpsRoundTrip) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    MilpModel m = build_full_model(inst, oracle::random_weights(rng));
    ImportedModel back = read_mps(export_model(m, ExportFormat::kMps));
    const MilpModel& b = back.model;
    ASSERT_EQ(b.n_vars(), m.n_vars());
    ASSERT_EQ(b.n_rows(), m.n_rows());
    for (int j = 0; j < m.n_vars(); ++j) {
      ASSERT_EQ(b.var_name(j), m.var_name(j));
      ASSERT_EQ(b.var_family(j), m.var_family(j));
      ASSERT_EQ(b.objective(j), m.objective(j));
      ASSERT_TRUE(back.integer[j]);
      ASSERT_EQ(back.upper[j], 1.0);
    }
    for (int r = 0; r < m.n_rows(); ++r) {
      ASSERT_EQ(b.row_name(r), m.row_name(r));
      ASSERT_EQ(b.sense(r), m.sense(r));
      ASSERT_EQ(b.rhs(r), m.rhs(r));
      auto mv = m.row_vars(r), bv = b.row_vars(r);
      auto mc = m.row_coefs(r), bc = b.row_coefs(r);
      ASSERT_TRUE(std::equal(mv.begin(), mv.end(), bv.begin(), bv.end()));
      ASSERT_TRUE(std::equal(mc.begin(), mc.end(), bc.begin(), bc.end()));
    }
  }
}

TEST(ModelIo, LpTextSections) {
  Instance inst = oracle::load_fixture("tiny");
  MilpModel m = build_full_model(inst, survey_weights());
  std::string lp = export_model(m, parse_export_format("lp"));
  for (const char* section : {"Minimize", "Subject To", "Binaries", "End"})
    EXPECT_NE(lp.find(section), std::string::npos) << section;
  EXPECT_NE(lp.find("c1_0: "), std::string::npos);
  EXPECT_THROW(parse_export_format("xlsx"), Error);
}

TEST(ModelIo, MpsReaderRejectsJunk) {
  EXPECT_THROW(read_mps("NAME x\nRANGES\nENDATA\n"), Error);
  EXPECT_THROW(read_mps("NAME x\nROWS\n Q r1\nENDATA\n"), Error);
  ImportedModel m = read_mps(
      "NAME t\nROWS\n N obj\n E one\nCOLUMNS\n    MARKER 'MARKER' 'INTORG'\n    a obj 2 one 1\n"
      "    b obj 3 one 1\n    MARKER 'MARKER' 'INTEND'\nRHS\n    RHS one 1\nBOUNDS\n UP BND a 1\n UP BND b 1\nENDATA\n");
  EXPECT_EQ(m.model.n_vars(), 2);
  EXPECT_EQ(m.model.var_family(0), VarFamily::kOther);
  EXPECT_EQ(m.model.row_name(0), "one");
}
