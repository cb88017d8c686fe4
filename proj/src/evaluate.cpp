#include "examsched/evaluate.hpp"

#include <algorithm>
#include <unordered_map>

namespace examsched {
namespace {

constexpr std::size_t idx(Metric m) { return static_cast<std::size_t>(m); }

InconvenienceReport evaluate_impl(const Instance& inst, const Schedule& schedule, const Weights& weights) {
  const int T = inst.n_slots();
  if (schedule.size() != inst.n_groups())
    throw Error(ErrorCode::kEvaluation, "schedule covers " + std::to_string(schedule.size()) + " groups, instance has " +
                                            std::to_string(inst.n_groups()));
  for (int g = 0; g < schedule.size(); ++g)
    if (schedule[g] < -1 || schedule[g] >= T)
      throw Error(ErrorCode::kEvaluation, "slot " + std::to_string(schedule[g]) + " out of range");

  InconvenienceReport r;
  const Eigen::MatrixXi x = assignment_matrix(schedule, T);
  const Eigen::MatrixXi exams = inst.student_group * x;  // |S| x |T| exam counts
  const Eigen::MatrixXi duties = inst.faculty_group * x;

  for (int s = 0; s < inst.n_students(); ++s) {
    bool hit_overlap = false, hit_b2b = false, hit_pm = false, hit_3 = false, hit_4 = false;
    int total = 0;
    for (int t = 0; t < T; ++t) {
      int c = exams(s, t);
      total += c > 0;
      if (c >= 2) {
        ++r.overlap_occurrences;
        hit_overlap = true;
      }
      if (c >= 3)
        r.hard_violations.push_back({"STUDENT_OVERLAP_CAP", "student " + inst.students[static_cast<std::size_t>(s)] +
                                                                " has " + std::to_string(c) + " exams in " +
                                                                inst.grid.label(t)});
    }
    auto has = [&](int t) { return exams(s, t) > 0; };
    for (auto [a, b] : inst.patterns.b2b_pairs)
      if (has(a) && has(b)) {
        ++r.b2b_occurrences;
        hit_b2b = true;
      }
    for (auto [a, b] : inst.patterns.pm_to_am_pairs)
      if (has(a) && has(b)) {
        ++r.pm_to_am_occurrences;
        hit_pm = true;
      }
    if (total >= 3)
      for (const auto& w : inst.patterns.windows_3in24)
        if (has(w[0]) + has(w[1]) + has(w[2]) >= 3) {
          hit_3 = true;
          break;
        }
    if (total >= 4)
      for (const auto& w : inst.patterns.windows_4in48)
        if (has(w[0]) + has(w[1]) + has(w[2]) + has(w[3]) >= 4) {
          hit_4 = true;
          break;
        }
    auto mark = [&](Metric m, bool hit) {
      if (!hit) return;
      ++r.head_counts[idx(m)];
      r.people[idx(m)].push_back(s);
    };
    mark(Metric::kStudentOverlap, hit_overlap);
    mark(Metric::kStudentThreeIn24, hit_3);
    mark(Metric::kStudentFourIn48, hit_4);
    mark(Metric::kStudentB2B, hit_b2b);
    mark(Metric::kStudentPmToAm, hit_pm);
    mark(Metric::kStudentAny, hit_overlap || hit_3 || hit_4 || hit_b2b || hit_pm);
  }

  for (int f = 0; f < inst.n_faculty(); ++f) {
    bool hit_overlap = false, hit_b2b = false;
    for (int t = 0; t < T; ++t) {
      int c = duties(f, t);
      if (c >= 2) {
        ++r.faculty_overlap_occurrences;
        hit_overlap = true;
      }
      if (c >= 3)
        r.hard_violations.push_back({"FACULTY_OVERLAP_CAP", "faculty " + inst.faculty[static_cast<std::size_t>(f)] +
                                                                " gives " + std::to_string(c) + " exams in " +
                                                                inst.grid.label(t)});
    }
    for (auto [a, b] : inst.patterns.b2b_pairs)
      if (duties(f, a) > 0 && duties(f, b) > 0) {
        ++r.faculty_b2b_occurrences;
        hit_b2b = true;
      }
    if (hit_overlap) {
      ++r.head_counts[idx(Metric::kFacultyOverlap)];
      r.people[idx(Metric::kFacultyOverlap)].push_back(f);
    }
    if (hit_b2b) {
      ++r.head_counts[idx(Metric::kFacultyB2B)];
      r.people[idx(Metric::kFacultyB2B)].push_back(f);
    }
  }

  const Eigen::VectorXi seats = x.transpose() * inst.group_size;
  for (int t = 0; t < T; ++t)
    if (seats(t) > inst.capacity)
      r.hard_violations.push_back({"CAPACITY", inst.grid.label(t) + " seats " + std::to_string(seats(t)) +
                                                   " students, capacity " + std::to_string(inst.capacity)});
  for (int g = 0; g < schedule.size(); ++g) {
    int t = schedule[g];
    if (t < 0) continue;
    const auto& label = inst.groups[static_cast<std::size_t>(g)].label;
    if (!inst.available(t)) r.hard_violations.push_back({"UNAVAILABLE_SLOT", label + " sits in unavailable " + inst.grid.label(t)});
    if (inst.forbidden(g, t)) r.hard_violations.push_back({"BLOCKED_SLOT", label + " sits in blocked " + inst.grid.label(t)});
    auto pin = inst.pinned_slot(g);
    if (pin && *pin != t) r.hard_violations.push_back({"PIN_VIOLATED", label + " must sit in " + inst.grid.label(*pin)});
  }

  r.forced_overlap_count = static_cast<long long>(inst.forced_overlaps.size());
  r.weighted_objective = weighted_objective(r, weights);
  return r;
}

}  // namespace

bool Schedule::complete() const {
  return std::all_of(slot_of_group.begin(), slot_of_group.end(), [](int t) { return t >= 0; });
}

const char* metric_label(Metric m) {
  switch (m) {
    case Metric::kStudentOverlap: return "Students with an Unforced Overlap";
    case Metric::kStudentThreeIn24: return "Students with 3 Exams in 24 Hours";
    case Metric::kStudentFourIn48: return "Students with 4 Exams in 48 Hours";
    case Metric::kStudentB2B: return "Students with Back-to-Back Exams";
    case Metric::kStudentPmToAm: return "Students with Night-to-Morning Exams";
    case Metric::kStudentAny: return "Students with at Least One Inconvenience";
    case Metric::kFacultyOverlap: return "Faculty with an Unforced Overlap";
    case Metric::kFacultyB2B: return "Faculty with Back-to-Back Exams";
  }
  return "";
}

const char* metric_key(Metric m) {
  switch (m) {
    case Metric::kStudentOverlap: return "student_overlap_unforced";
    case Metric::kStudentThreeIn24: return "student_3in24";
    case Metric::kStudentFourIn48: return "student_4in48";
    case Metric::kStudentB2B: return "student_b2b";
    case Metric::kStudentPmToAm: return "student_pm_to_am";
    case Metric::kStudentAny: return "student_any";
    case Metric::kFacultyOverlap: return "fac_overlap_unforced";
    case Metric::kFacultyB2B: return "fac_b2b";
  }
  return "";
}

Eigen::MatrixXi assignment_matrix(const Schedule& schedule, int n_slots) {
  Eigen::MatrixXi x = Eigen::MatrixXi::Zero(schedule.size(), n_slots);
  for (int g = 0; g < schedule.size(); ++g)
    if (schedule[g] >= 0) x(g, schedule[g]) = 1;
  return x;
}

InconvenienceReport evaluate_schedule(const Instance& instance, const Schedule& schedule, const Weights& weights) {
  if (schedule.size() == instance.n_groups() && !schedule.complete()) {
    for (int g = 0; g < schedule.size(); ++g)
      if (schedule[g] < 0)
        throw Error(ErrorCode::kEvaluation, "group " + instance.groups[static_cast<std::size_t>(g)].label + " has no slot");
  }
  return evaluate_impl(instance, schedule, weights);
}

InconvenienceReport evaluate_partial(const Instance& instance, const Schedule& schedule, const Weights& weights) {
  return evaluate_impl(instance, schedule, weights);
}

ReportDelta report_delta(const InconvenienceReport& after, const InconvenienceReport& before) {
  ReportDelta d;
  for (std::size_t i = 0; i < d.head_counts.size(); ++i) d.head_counts[i] = after.head_counts[i] - before.head_counts[i];
  d.overlap_occurrences = after.overlap_occurrences - before.overlap_occurrences;
  d.b2b_occurrences = after.b2b_occurrences - before.b2b_occurrences;
  d.pm_to_am_occurrences = after.pm_to_am_occurrences - before.pm_to_am_occurrences;
  d.weighted_objective = after.weighted_objective - before.weighted_objective;
  return d;
}

OverlapMatrix overlap_matrix(const Instance& instance, const Instance* historical) {
  OverlapMatrix out;
  for (const auto& g : instance.groups) out.labels.push_back(g.label);
  out.current = Eigen::MatrixXi(instance.student_group.transpose() * instance.student_group);
  if (historical) {
    const Eigen::MatrixXi past = Eigen::MatrixXi(historical->student_group.transpose() * historical->student_group);
    const int G = instance.n_groups();
    std::vector<int> map(static_cast<std::size_t>(G));
    for (int g = 0; g < G; ++g) map[static_cast<std::size_t>(g)] = historical->group_index(out.labels[static_cast<std::size_t>(g)]);
    Eigen::MatrixXi h = Eigen::MatrixXi::Constant(G, G, -1);
    for (int a = 0; a < G; ++a)
      for (int b = 0; b < G; ++b) {
        int pa = map[static_cast<std::size_t>(a)], pb = map[static_cast<std::size_t>(b)];
        if (pa >= 0 && pb >= 0) h(a, b) = past(pa, pb);
      }
    out.historical = std::move(h);
  }
  return out;
}

}  // namespace examsched
