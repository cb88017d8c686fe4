#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace examsched {

enum class MeetingKind { kLecture, kLab, kEvening, kOther };

const char* to_string(MeetingKind kind);

// One weekly meeting. Weekday letters follow registrar convention:
// M T W R F S U.
struct Meeting {
  char weekday = 'M';
  int start = 0;
  int end = 0;
  MeetingKind kind = MeetingKind::kLecture;

  friend bool operator==(const Meeting&, const Meeting&) = default;
};

// Parses "MWF 10:00-10:50 lecture; T 13:00-15:50 lab".
std::vector<Meeting> parse_meeting_pattern(std::string_view pattern);
std::string format_meeting_pattern(const std::vector<Meeting>& meetings);

struct Section {
  std::string course_code;
  std::string section_id;
  std::vector<Meeting> meetings;
  std::vector<std::string> faculty_ids;

  // "COURSE/SECTION"
  std::string key() const { return course_code + "/" + section_id; }

  friend bool operator==(const Section&, const Section&) = default;
};

struct Enrollment {
  std::string student_id;
  std::string course_code;
  std::string section_id;

  friend auto operator<=>(const Enrollment&, const Enrollment&) = default;
};

struct GroupingInput {
  std::vector<Section> sections;        // sorted by key
  std::vector<Enrollment> enrollments;  // sorted, deduplicated
  std::vector<std::string> coordinated_courses;  // sorted
};

enum class GroupKind { kCoordinated, kMeetingTime };

const char* to_string(GroupKind kind);

struct CourseGroup {
  int id = 0;
  std::string label;
  GroupKind kind = GroupKind::kMeetingTime;
  std::vector<std::string> section_keys;
  int n_students = 0;

  friend bool operator==(const CourseGroup&, const CourseGroup&) = default;
};

struct AmbiguousSection {
  std::string section_key;
  std::vector<std::string> candidate_keys;

  friend bool operator==(const AmbiguousSection&, const AmbiguousSection&) = default;
};

// A student enrolled in two courses of one group whose meeting times
// intersect. Such pairs always share an exam slot.
struct ForcedOverlap {
  std::string student_id;
  std::string course_a;
  std::string course_b;

  friend auto operator<=>(const ForcedOverlap&, const ForcedOverlap&) = default;
};

struct GroupingResult {
  std::vector<CourseGroup> groups;
  std::vector<AmbiguousSection> ambiguous_sections;
  std::vector<ForcedOverlap> forced_overlap_pairs;

  friend bool operator==(const GroupingResult&, const GroupingResult&) = default;
};

// Kind priority lecture > other > evening > lab, then earliest weekday/start.
MeetingKind primary_kind(const std::vector<Meeting>& meetings);

// Group key of the meetings of one kind, e.g. "MWF-1000" or "M-0900+W-1100".
std::string meeting_key(const std::vector<Meeting>& meetings, MeetingKind kind);

bool meetings_intersect(const std::vector<Meeting>& a, const std::vector<Meeting>& b);

GroupingResult build_groups(const GroupingInput& input);

struct GroupEdit {
  std::string section_key;
  std::string target_group;
};

// Throws Error(kUnknownReference) for an unknown section key.
GroupingResult apply_group_edits(const GroupingInput& input, const GroupingResult& result,
                                 const std::vector<GroupEdit>& edits);

// Delimited-text export: group_id,label,kind,section,n_students,ambiguous
std::string grouping_report_csv(const GroupingResult& result);

}  // namespace examsched
