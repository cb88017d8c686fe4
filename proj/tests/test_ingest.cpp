#include <gtest/gtest.h>

#include "examsched/instance.hpp"
#include "support/oracle.hpp"

using namespace examsched;

namespace {

bool has_code(const std::vector<Finding>& f, const std::string& code) {
  return std::any_of(f.begin(), f.end(), [&](const Finding& x) { return x.code == code; });
}

SourceFiles small_sources() {
  SourceFiles f;
  f.sections =
      "course_code,section_id,meetings,faculty_ids\n"
      "A,1,MWF 09:00-09:50 lecture,P1\n"
      "B,1,MWF 09:00-09:50 lecture,P2\n"
      "C,1,TR 11:00-12:15 lecture; W 14:00-16:50 lab,P1\n"
      "D,1,,P3\n";
  f.enrollments = "student_id,course_code,section_id\nx,A,1\nx,B,1\ny,C,1\ny,A,1\nz,D,1\n";
  return f;
}

}  // namespace

TEST(Meetings, ParseAndFormat) {
  auto m = parse_meeting_pattern("MWF 10:00-10:50 lecture; T 13:00-15:50 lab");
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m[3].weekday, 'T');
  EXPECT_EQ(m[3].kind, MeetingKind::kLab);
  EXPECT_EQ(parse_meeting_pattern(format_meeting_pattern(m)), m);
  EXPECT_THROW(parse_meeting_pattern("MWF 10:00 lecture"), Error);
  EXPECT_THROW(parse_meeting_pattern("Q 10:00-11:00"), Error);
}

TEST(Grouping, MeetingTimeAndCoordinated) {
  Instance inst = oracle::load_fixture("tiny");
  ASSERT_EQ(inst.n_groups(), 5);
  EXPECT_EQ(inst.n_students(), 12);
  int econ = inst.group_index("ECON103");
  ASSERT_GE(econ, 0);
  EXPECT_EQ(inst.groups[econ].kind, GroupKind::kCoordinated);
  EXPECT_EQ(inst.groups[econ].section_keys.size(), 2u);
  int mwf9 = inst.group_index("MWF-0900");
  ASSERT_GE(mwf9, 0);
  EXPECT_EQ(inst.groups[mwf9].section_keys, (std::vector<std::string>{"BIOL101/01", "CHEM110/01"}));
  EXPECT_EQ(inst.group_size(mwf9), 8);
  ASSERT_EQ(inst.forced_overlaps.size(), 1u);
  EXPECT_EQ(inst.forced_overlaps[0].student_id, "S02");
  EXPECT_EQ(inst.pinned_slot(inst.group_index("MW-1500")), inst.grid.resolve("Tue-1"));
  EXPECT_TRUE(inst.forbidden(mwf9, 0));
}

TEST(Grouping, AmbiguousAndUnscheduledSections) {
  Instance inst = load_instance(small_sources());
  std::vector<std::string> keys;
  for (const auto& a : inst.ambiguous_sections) keys.push_back(a.section_key);
  EXPECT_EQ(keys, (std::vector<std::string>{"C/1", "D/1"}));
  auto findings = validate_instance(inst);
  EXPECT_TRUE(has_code(findings, "AMBIGUOUS_SECTION"));
  EXPECT_FALSE(has_errors(findings));
}

TEST(Grouping, EditsMoveSections) {
  Instance inst = load_instance(small_sources());
  GroupingResult g{inst.groups, inst.ambiguous_sections, inst.forced_overlaps};
  auto edited = apply_group_edits(inst.source, g, {{"C/1", "MWF-0900"}});
  auto it = std::find_if(edited.groups.begin(), edited.groups.end(), [](const auto& x) { return x.label == "MWF-0900"; });
  ASSERT_NE(it, edited.groups.end());
  EXPECT_NE(std::find(it->section_keys.begin(), it->section_keys.end(), "C/1"), it->section_keys.end());
  EXPECT_EQ(edited.ambiguous_sections.size(), 1u);
  EXPECT_THROW(apply_group_edits(inst.source, g, {{"Z/9", "MWF-0900"}}), Error);
}

TEST(Ingest, UnknownReferences) {
  auto f = small_sources();
  f.enrollments += "w,Q,1\n";
  try {
    load_instance(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownReference);
  }
  f = small_sources();
  f.constraints = "NOPE,Mon-1,require\n";
  EXPECT_THROW(load_instance(f), Error);
  f = small_sources();
  f.constraints = "MWF-0900,Sun-1,require\n";
  EXPECT_THROW(load_instance(f), Error);
}

TEST(Ingest, ConstraintsRoundTrip) {
  auto cs = parse_constraints("group_label,slot,action\nA,Mon-1,require\n*,Sat-3,unavailable\n@capacity,500\n");
  ASSERT_EQ(cs.rows.size(), 2u);
  EXPECT_EQ(cs.capacity, 500);
  EXPECT_EQ(parse_constraints(format_constraints(cs)), cs);
  EXPECT_THROW(parse_constraints("A,Mon-1,maybe\n"), Error);
  EXPECT_THROW(parse_constraints("*,Mon-1,require\n"), Error);
}

TEST(Validation, FlagsConflicts) {
  auto f = small_sources();
  f.constraints = "MWF-0900,Mon-1,require\nMWF-0900,Mon-1,forbid\n*,Tue-1,unavailable\nTR-1100,Tue-1,require\n";
  try {
    load_instance(f);
    FAIL();
  } catch (const ValidationFailure& e) {
    EXPECT_TRUE(has_code(e.findings(), "PIN_BLOCK_CONFLICT"));
    EXPECT_TRUE(has_code(e.findings(), "PIN_UNAVAILABLE"));
  }
  f = small_sources();
  f.constraints = "@capacity,1\n";
  try {
    load_instance(f);
    FAIL();
  } catch (const ValidationFailure& e) {
    EXPECT_TRUE(has_code(e.findings(), "GROUP_EXCEEDS_CAPACITY"));
  }
}

TEST(Validation, PinnedOverlapCap) {
  IncidenceSpec spec;
  spec.period = default_period_config();
  spec.students = {"s"};
  spec.group_labels = {"a", "b", "c"};
  spec.groups_of_student = {{0, 1, 2}};
  spec.pins = {{0, 0}, {1, 0}, {2, 0}};
  auto findings = validate_instance(make_instance(spec));
  EXPECT_TRUE(has_code(findings, "OVERLAP_CAP_PINNED"));
}

TEST(Validation, DuplicateEnrollmentIsWarning) {
  auto f = small_sources();
  f.enrollments += "x,A,1\n";
  Instance inst = load_instance(f);
  EXPECT_TRUE(has_code(validate_instance(inst), "DUPLICATE_ENROLLMENT"));
  EXPECT_EQ(inst.group_size(inst.group_index("MWF-0900")), 2);
}
