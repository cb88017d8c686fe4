#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>
#include <string>
#include <vector>

#include "examsched/error.hpp"
#include "examsched/grouping.hpp"
#include "examsched/timegrid.hpp"
#include "examsched/weights.hpp"

namespace examsched {

using Incidence = Eigen::SparseMatrix<int, Eigen::RowMajor>;
using SlotFlags = Eigen::Array<bool, Eigen::Dynamic, 1>;
using GroupSlotFlags = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class ConstraintAction { kRequire, kForbid, kUnavailable, kAvailable };

const char* to_string(ConstraintAction action);

// Registrar-entered hard constraints, by group label and slot reference so
// they survive regrouping.
struct ConstraintSet {
  struct Row {
    std::string group;  // "*" for slot-wide rows
    std::string slot;
    ConstraintAction action = ConstraintAction::kRequire;

    friend bool operator==(const Row&, const Row&) = default;
  };
  std::vector<Row> rows;
  std::optional<long long> capacity;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

// Rows "group,slot,require|forbid", "*,slot,unavailable|available" and
// "@capacity,<students per slot>".
ConstraintSet parse_constraints(std::string_view content);
std::string format_constraints(const ConstraintSet& constraints);

struct Finding {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
  int group = -1;
  int slot = -1;

  bool is_error() const { return severity == Severity::kError; }
};

// Everything the exam program needs, indexed densely: students and faculty in
// sorted id order, groups in grouping order, slots chronologically.
struct Instance {
  std::vector<std::string> students;
  std::vector<std::string> faculty;
  std::vector<CourseGroup> groups;
  TimeGrid grid;
  PatternSets patterns;

  Incidence student_group;  // |S| x |G|, 1 when the student attends the group
  Incidence faculty_group;  // |F| x |G|
  Eigen::VectorXi group_size;  // N_g
  SlotFlags available;         // a_t
  GroupSlotFlags required;     // r_gt
  GroupSlotFlags forbidden;    // q_gt
  long long capacity = 0;      // M1
  int max_groups_per_student = 1;  // M2
  int max_groups_per_faculty = 1;  // M3
  Weights weights = survey_weights();

  std::vector<ForcedOverlap> forced_overlaps;
  std::vector<AmbiguousSection> ambiguous_sections;
  std::vector<std::string> ingest_warnings;

  // Source data, kept so grouping and constraints can be re-applied.
  GroupingInput source;
  ConstraintSet constraints;

  int n_students() const { return static_cast<int>(students.size()); }
  int n_faculty() const { return static_cast<int>(faculty.size()); }
  int n_groups() const { return static_cast<int>(groups.size()); }
  int n_slots() const { return grid.size(); }

  int group_index(std::string_view label) const;  // -1 when absent
  // Slots g may take: available, not forbidden, and the pinned slot if any.
  std::vector<int> allowed_slots(int g) const;
  std::optional<int> pinned_slot(int g) const;
};

// Recomputes N_g, M2, M3 and the pattern sets from the primary fields, and
// M1 when no capacity is configured.
void refresh_derived(Instance& instance);

// Builds an instance from grouping output and constraints. Unknown group or
// slot references throw Error(kUnknownReference); conflicting constraints are
// kept and reported by validate_instance.
Instance assemble_instance(GroupingInput source, const GroupingResult& grouping,
                           const ConstraintSet& constraints, const ExamPeriodConfig& period,
                           const Weights& weights = survey_weights());

// Replaces pins, blocks, availability and capacity. Unknown group or slot
// references throw Error(kUnknownReference).
void apply_constraint_set(Instance& instance, const ConstraintSet& constraints);

// Instance directly from incidence lists (generators and tests).
struct IncidenceSpec {
  ExamPeriodConfig period;
  std::vector<std::string> students;
  std::vector<std::string> faculty;
  std::vector<std::string> group_labels;
  std::vector<std::vector<int>> groups_of_student;
  std::vector<std::vector<int>> groups_of_faculty;
  std::vector<std::pair<int, int>> pins;    // (group, slot)
  std::vector<std::pair<int, int>> blocks;  // (group, slot)
  std::vector<int> unavailable_slots;
  std::optional<long long> capacity;
  Weights weights = survey_weights();
};

Instance make_instance(const IncidenceSpec& spec);

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<Finding> findings);
  const std::vector<Finding>& findings() const { return findings_; }

 private:
  std::vector<Finding> findings_;
};

struct SourceFiles {
  std::string enrollments;   // student_id,course_code,section_id
  std::string sections;      // course_code,section_id,meetings,faculty_ids
  std::string constraints;   // optional
  std::string coordinated;   // one course code per line, optional
  std::string period_config; // optional; default grid when empty
};

GroupingInput parse_sources(const SourceFiles& files, std::vector<std::string>* warnings = nullptr);

// Parses, groups and validates. Throws ValidationFailure when validation
// reports errors.
Instance load_instance(const SourceFiles& files, const Weights& weights = survey_weights());

std::vector<Finding> validate_instance(const Instance& instance);

bool has_errors(const std::vector<Finding>& findings);

}  // namespace examsched
