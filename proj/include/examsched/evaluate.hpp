#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "examsched/instance.hpp"

namespace examsched {

// Group -> slot. -1 marks a group without a slot (partial schedules only).
struct Schedule {
  std::vector<int> slot_of_group;

  Schedule() = default;
  explicit Schedule(std::vector<int> slots) : slot_of_group(std::move(slots)) {}
  static Schedule unassigned(int n_groups) { return Schedule(std::vector<int>(static_cast<std::size_t>(n_groups), -1)); }

  int size() const { return static_cast<int>(slot_of_group.size()); }
  int operator[](int g) const { return slot_of_group[static_cast<std::size_t>(g)]; }
  int& operator[](int g) { return slot_of_group[static_cast<std::size_t>(g)]; }
  bool complete() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Report rows, in the order registrars read them.
enum class Metric {
  kStudentOverlap,
  kStudentThreeIn24,
  kStudentFourIn48,
  kStudentB2B,
  kStudentPmToAm,
  kStudentAny,
  kFacultyOverlap,
  kFacultyB2B,
};

inline constexpr int kMetricCount = 8;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::kStudentOverlap, Metric::kStudentThreeIn24, Metric::kStudentFourIn48, Metric::kStudentB2B,
    Metric::kStudentPmToAm,  Metric::kStudentAny,       Metric::kFacultyOverlap,  Metric::kFacultyB2B};

const char* metric_label(Metric m);  // "Students with an Unforced Overlap", ...
const char* metric_key(Metric m);    // "student_overlap_unforced", ...

struct HardViolation {
  std::string code;
  std::string message;
};

struct InconvenienceReport {
  std::array<long long, kMetricCount> head_counts{};
  long long overlap_occurrences = 0;   // (student, slot) with two exams
  long long b2b_occurrences = 0;       // (student, pair start)
  long long pm_to_am_occurrences = 0;  // (student, night slot)
  long long faculty_overlap_occurrences = 0;
  long long faculty_b2b_occurrences = 0;
  long long forced_overlap_count = 0;
  double weighted_objective = 0.0;

  // Indices into Instance::students (student metrics) or Instance::faculty.
  std::array<std::vector<int>, kMetricCount> people;
  std::vector<HardViolation> hard_violations;

  long long head_count(Metric m) const { return head_counts[static_cast<std::size_t>(m)]; }
  bool hard_feasible() const { return hard_violations.empty(); }
};

// Objective under the exam program's accounting: overlap, back-to-back and
// night-to-morning per occurrence; windows and faculty terms once per person.
template <typename Scalar>
Scalar weighted_objective(const InconvenienceReport& r, const BasicWeights<Scalar>& w) {
  auto c = [](long long v) { return static_cast<Scalar>(v); };
  return w.overlap * c(r.overlap_occurrences) + w.b2b * c(r.b2b_occurrences) +
         w.pm_to_am * c(r.pm_to_am_occurrences) +
         w.three_in_24 * c(r.head_count(Metric::kStudentThreeIn24)) +
         w.four_in_48 * c(r.head_count(Metric::kStudentFourIn48)) +
         w.faculty_overlap * c(r.head_count(Metric::kFacultyOverlap)) +
         w.faculty_b2b * c(r.head_count(Metric::kFacultyB2B));
}

// One-hot |G| x |T| assignment matrix; unassigned groups give zero rows.
Eigen::MatrixXi assignment_matrix(const Schedule& schedule, int n_slots);

// Throws Error(kEvaluation) when a group lacks a slot or a slot id is out of
// range. Hard-rule breaches are reported, not thrown.
InconvenienceReport evaluate_schedule(const Instance& instance, const Schedule& schedule, const Weights& weights);

// Same accounting, skipping unassigned groups.
InconvenienceReport evaluate_partial(const Instance& instance, const Schedule& schedule, const Weights& weights);

struct ReportDelta {
  std::array<long long, kMetricCount> head_counts{};
  long long overlap_occurrences = 0;
  long long b2b_occurrences = 0;
  long long pm_to_am_occurrences = 0;
  double weighted_objective = 0.0;
};

ReportDelta report_delta(const InconvenienceReport& after, const InconvenienceReport& before);

struct OverlapMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXi current;  // symmetric, diagonal = N_g
  // Co-enrollment of same-labelled groups in the earlier instance; -1 where a
  // label did not exist then.
  std::optional<Eigen::MatrixXi> historical;
};

OverlapMatrix overlap_matrix(const Instance& instance, const Instance* historical = nullptr);

}  // namespace examsched
