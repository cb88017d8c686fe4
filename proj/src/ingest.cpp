#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "examsched/instance.hpp"
#include "examsched/text.hpp"

namespace examsched {
namespace {

using Triplet = Eigen::Triplet<int>;

Incidence incidence_from(int rows, int cols, const std::vector<Triplet>& entries) {
  Incidence m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end(), [](int, int) { return 1; });
  m.makeCompressed();
  return m;
}

Finding error(std::string code, std::string message, int g = -1, int t = -1) {
  return {Finding::Severity::kError, std::move(code), std::move(message), g, t};
}

Finding warning(std::string code, std::string message, int g = -1, int t = -1) {
  return {Finding::Severity::kWarning, std::move(code), std::move(message), g, t};
}

bool is_header(const std::vector<std::string>& record, std::string_view first) {
  return !record.empty() && record.front() == first;
}

void apply_constraints(Instance& inst, const ConstraintSet& constraints) {
  const int G = inst.n_groups();
  const int T = inst.n_slots();
  inst.available = SlotFlags::Constant(T, true);
  inst.required = GroupSlotFlags::Constant(G, T, false);
  inst.forbidden = GroupSlotFlags::Constant(G, T, false);
  for (const auto& row : constraints.rows) {
    int t = inst.grid.resolve(row.slot);
    switch (row.action) {
      case ConstraintAction::kUnavailable: inst.available(t) = false; break;
      case ConstraintAction::kAvailable: inst.available(t) = true; break;
      case ConstraintAction::kRequire:
      case ConstraintAction::kForbid: {
        int g = inst.group_index(row.group);
        if (g < 0) throw Error(ErrorCode::kUnknownReference, "unknown group '" + row.group + "' in constraints");
        (row.action == ConstraintAction::kRequire ? inst.required : inst.forbidden)(g, t) = true;
        break;
      }
    }
  }
  inst.constraints = constraints;
}

}  // namespace

const char* to_string(ConstraintAction action) {
  switch (action) {
    case ConstraintAction::kRequire: return "require";
    case ConstraintAction::kForbid: return "forbid";
    case ConstraintAction::kUnavailable: return "unavailable";
    case ConstraintAction::kAvailable: return "available";
  }
  return "require";
}

ConstraintSet parse_constraints(std::string_view content) {
  ConstraintSet out;
  for (const auto& rec : text::read_records(content)) {
    if (is_header(rec, "group_label")) continue;
    if (rec.front() == "@capacity") {
      if (rec.size() < 2) throw Error(ErrorCode::kParse, "@capacity needs a value");
      try {
        out.capacity = std::stoll(rec[1]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParse, "bad capacity '" + rec[1] + "'");
      }
      continue;
    }
    if (rec.size() != 3) throw Error(ErrorCode::kParse, "constraint rows need group,slot,action");
    ConstraintSet::Row row{rec[0], rec[1], ConstraintAction::kRequire};
    if (rec[2] == "require") row.action = ConstraintAction::kRequire;
    else if (rec[2] == "forbid") row.action = ConstraintAction::kForbid;
    else if (rec[2] == "unavailable") row.action = ConstraintAction::kUnavailable;
    else if (rec[2] == "available") row.action = ConstraintAction::kAvailable;
    else throw Error(ErrorCode::kParse, "unknown constraint action '" + rec[2] + "'");
    bool slot_wide = row.action == ConstraintAction::kUnavailable || row.action == ConstraintAction::kAvailable;
    if (slot_wide != (row.group == "*"))
      throw Error(ErrorCode::kParse, "availability rows use '*' as group; pins and blocks name a group");
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string format_constraints(const ConstraintSet& constraints) {
  std::ostringstream out;
  out << "group_label,slot_ref,action\n";
  for (const auto& r : constraints.rows) out << r.group << ',' << r.slot << ',' << to_string(r.action) << '\n';
  if (constraints.capacity) out << "@capacity," << *constraints.capacity << '\n';
  return out.str();
}

void apply_constraint_set(Instance& inst, const ConstraintSet& constraints) {
  apply_constraints(inst, constraints);
  refresh_derived(inst);
}

int Instance::group_index(std::string_view label) const {
  for (const auto& g : groups)
    if (g.label == label) return g.id;
  return -1;
}

std::optional<int> Instance::pinned_slot(int g) const {
  for (int t = 0; t < n_slots(); ++t)
    if (required(g, t)) return t;
  return std::nullopt;
}

std::vector<int> Instance::allowed_slots(int g) const {
  std::vector<int> out;
  auto pin = pinned_slot(g);
  for (int t = 0; t < n_slots(); ++t) {
    if (pin && *pin != t) continue;
    if (available(t) && !forbidden(g, t)) out.push_back(t);
  }
  return out;
}

void refresh_derived(Instance& inst) {
  inst.patterns = pattern_sets(inst.grid);
  inst.group_size = (Eigen::RowVectorXi::Ones(inst.n_students()) * inst.student_group).transpose();
  for (int g = 0; g < inst.n_groups(); ++g) inst.groups[static_cast<std::size_t>(g)].n_students = inst.group_size(g);
  Eigen::VectorXi per_student = inst.student_group * Eigen::VectorXi::Ones(inst.n_groups());
  Eigen::VectorXi per_faculty = inst.faculty_group * Eigen::VectorXi::Ones(inst.n_groups());
  inst.max_groups_per_student = std::max(1, per_student.size() ? per_student.maxCoeff() : 0);
  inst.max_groups_per_faculty = std::max(1, per_faculty.size() ? per_faculty.maxCoeff() : 0);
  // Unconfigured capacity seats every enrollment at once.
  inst.capacity = inst.constraints.capacity.value_or(std::max<long long>(1, inst.group_size.sum()));
}

Instance assemble_instance(GroupingInput source, const GroupingResult& grouping,
                           const ConstraintSet& constraints, const ExamPeriodConfig& period,
                           const Weights& weights) {
  Instance inst;
  inst.grid = build_grid(period);
  inst.groups = grouping.groups;
  inst.forced_overlaps = grouping.forced_overlap_pairs;
  inst.ambiguous_sections = grouping.ambiguous_sections;
  inst.weights = weights;

  std::set<std::string> students, faculty;
  for (const auto& e : source.enrollments) students.insert(e.student_id);
  for (const auto& s : source.sections) faculty.insert(s.faculty_ids.begin(), s.faculty_ids.end());
  inst.students.assign(students.begin(), students.end());
  inst.faculty.assign(faculty.begin(), faculty.end());

  std::unordered_map<std::string, int> student_idx, faculty_idx, group_of_section;
  for (int i = 0; i < inst.n_students(); ++i) student_idx[inst.students[static_cast<std::size_t>(i)]] = i;
  for (int i = 0; i < inst.n_faculty(); ++i) faculty_idx[inst.faculty[static_cast<std::size_t>(i)]] = i;
  for (const auto& g : inst.groups)
    for (const auto& key : g.section_keys) group_of_section[key] = g.id;

  std::vector<Triplet> b, d;
  for (const auto& e : source.enrollments) {
    auto it = group_of_section.find(e.course_code + "/" + e.section_id);
    if (it == group_of_section.end())
      throw Error(ErrorCode::kUnknownReference, "section " + e.course_code + "/" + e.section_id + " is in no group");
    b.emplace_back(student_idx.at(e.student_id), it->second, 1);
  }
  for (const auto& s : source.sections) {
    int g = group_of_section.at(s.key());
    for (const auto& f : s.faculty_ids) d.emplace_back(faculty_idx.at(f), g, 1);
  }
  inst.student_group = incidence_from(inst.n_students(), inst.n_groups(), b);
  inst.faculty_group = incidence_from(inst.n_faculty(), inst.n_groups(), d);
  inst.source = std::move(source);
  apply_constraints(inst, constraints);
  refresh_derived(inst);
  return inst;
}

Instance make_instance(const IncidenceSpec& spec) {
  Instance inst;
  inst.grid = build_grid(spec.period);
  inst.students = spec.students;
  inst.faculty = spec.faculty;
  inst.weights = spec.weights;
  for (std::size_t g = 0; g < spec.group_labels.size(); ++g)
    inst.groups.push_back({static_cast<int>(g), spec.group_labels[g], GroupKind::kMeetingTime, {}, 0});
  std::vector<Triplet> b, d;
  for (std::size_t s = 0; s < spec.groups_of_student.size(); ++s)
    for (int g : spec.groups_of_student[s]) b.emplace_back(static_cast<int>(s), g, 1);
  for (std::size_t f = 0; f < spec.groups_of_faculty.size(); ++f)
    for (int g : spec.groups_of_faculty[f]) d.emplace_back(static_cast<int>(f), g, 1);
  inst.student_group = incidence_from(inst.n_students(), inst.n_groups(), b);
  inst.faculty_group = incidence_from(inst.n_faculty(), inst.n_groups(), d);

  const int T = inst.n_slots();
  inst.available = SlotFlags::Constant(T, true);
  inst.required = GroupSlotFlags::Constant(inst.n_groups(), T, false);
  inst.forbidden = GroupSlotFlags::Constant(inst.n_groups(), T, false);
  ConstraintSet cs;
  for (auto [g, t] : spec.pins) {
    inst.required(g, t) = true;
    cs.rows.push_back({spec.group_labels[static_cast<std::size_t>(g)], std::to_string(t), ConstraintAction::kRequire});
  }
  for (auto [g, t] : spec.blocks) {
    inst.forbidden(g, t) = true;
    cs.rows.push_back({spec.group_labels[static_cast<std::size_t>(g)], std::to_string(t), ConstraintAction::kForbid});
  }
  for (int t : spec.unavailable_slots) {
    inst.available(t) = false;
    cs.rows.push_back({"*", std::to_string(t), ConstraintAction::kUnavailable});
  }
  cs.capacity = spec.capacity;
  inst.constraints = cs;
  refresh_derived(inst);
  return inst;
}

ValidationFailure::ValidationFailure(std::vector<Finding> findings)
    : Error(ErrorCode::kValidation,
            [&] {
              std::string msg = "instance validation failed:";
              for (const auto& f : findings)
                if (f.is_error()) msg += " [" + f.code + "] " + f.message + ";";
              return msg;
            }()),
      findings_(std::move(findings)) {}

GroupingInput parse_sources(const SourceFiles& files, std::vector<std::string>* warnings) {
  GroupingInput input;
  std::set<std::string> section_keys;
  std::set<std::string> courses;
  for (const auto& rec : text::read_records(files.sections)) {
    if (is_header(rec, "course_code")) continue;
    if (rec.size() < 2) throw Error(ErrorCode::kParse, "section rows need course_code,section_id,...");
    Section s;
    s.course_code = rec[0];
    s.section_id = rec[1];
    if (rec.size() > 2) s.meetings = parse_meeting_pattern(rec[2]);
    if (rec.size() > 3) {
      for (auto f : text::split(rec[3], ';'))
        if (!f.empty()) s.faculty_ids.push_back(f);
      std::sort(s.faculty_ids.begin(), s.faculty_ids.end());
      s.faculty_ids.erase(std::unique(s.faculty_ids.begin(), s.faculty_ids.end()), s.faculty_ids.end());
    }
    if (!section_keys.insert(s.key()).second)
      throw Error(ErrorCode::kParse, "duplicate section " + s.key());
    courses.insert(s.course_code);
    input.sections.push_back(std::move(s));
  }
  std::sort(input.sections.begin(), input.sections.end(),
            [](const Section& a, const Section& b) { return a.key() < b.key(); });

  for (const auto& rec : text::read_records(files.enrollments)) {
    if (is_header(rec, "student_id")) continue;
    if (rec.size() != 3) throw Error(ErrorCode::kParse, "enrollment rows need student_id,course_code,section_id");
    if (!courses.count(rec[1])) throw Error(ErrorCode::kUnknownReference, "unknown course '" + rec[1] + "' in enrollments");
    if (!section_keys.count(rec[1] + "/" + rec[2]))
      throw Error(ErrorCode::kUnknownReference, "unknown section '" + rec[1] + "/" + rec[2] + "' in enrollments");
    input.enrollments.push_back({rec[0], rec[1], rec[2]});
  }
  std::sort(input.enrollments.begin(), input.enrollments.end());
  auto dup = std::unique(input.enrollments.begin(), input.enrollments.end());
  if (warnings) {
    for (auto it = dup; it != input.enrollments.end(); ++it)
      warnings->push_back("duplicate enrollment " + it->student_id + " in " + it->course_code + "/" + it->section_id);
  }
  input.enrollments.erase(dup, input.enrollments.end());

  for (const auto& rec : text::read_records(files.coordinated)) {
    if (!courses.count(rec[0]))
      throw Error(ErrorCode::kUnknownReference, "coordinated course '" + rec[0] + "' has no sections");
    input.coordinated_courses.push_back(rec[0]);
  }
  std::sort(input.coordinated_courses.begin(), input.coordinated_courses.end());
  input.coordinated_courses.erase(std::unique(input.coordinated_courses.begin(), input.coordinated_courses.end()),
                                  input.coordinated_courses.end());
  return input;
}

Instance load_instance(const SourceFiles& files, const Weights& weights) {
  std::vector<std::string> warnings;
  GroupingInput input = parse_sources(files, &warnings);
  GroupingResult grouping = build_groups(input);
  ConstraintSet constraints = parse_constraints(files.constraints);
  ExamPeriodConfig period =
      files.period_config.empty() ? default_period_config() : parse_period_config(files.period_config);
  Instance inst = assemble_instance(std::move(input), grouping, constraints, period, weights);
  inst.ingest_warnings = std::move(warnings);
  auto findings = validate_instance(inst);
  if (has_errors(findings)) throw ValidationFailure(std::move(findings));
  return inst;
}

bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) { return f.is_error(); });
}

std::vector<Finding> validate_instance(const Instance& inst) {
  std::vector<Finding> out;
  const int G = inst.n_groups();
  const int T = inst.n_slots();
  auto glabel = [&](int g) { return inst.groups[static_cast<std::size_t>(g)].label; };

  for (int g = 0; g < G; ++g) {
    int pins = 0;
    for (int t = 0; t < T; ++t) {
      if (!inst.required(g, t)) continue;
      ++pins;
      if (inst.forbidden(g, t))
        out.push_back(error("PIN_BLOCK_CONFLICT",
                            "group " + glabel(g) + " is both required and forbidden in slot " + inst.grid.label(t), g, t));
      if (!inst.available(t))
        out.push_back(error("PIN_UNAVAILABLE",
                            "group " + glabel(g) + " is required in unavailable slot " + inst.grid.label(t), g, t));
    }
    if (pins > 1) out.push_back(error("MULTIPLE_PINS", "group " + glabel(g) + " is required in several slots", g));
    if (inst.allowed_slots(g).empty())
      out.push_back(error("NO_ALLOWED_SLOT", "group " + glabel(g) + " has no slot it may take", g));
    if (inst.group_size(g) > inst.capacity)
      out.push_back(error("GROUP_EXCEEDS_CAPACITY",
                          "group " + glabel(g) + " has " + std::to_string(inst.group_size(g)) +
                              " students but a slot seats " + std::to_string(inst.capacity), g));
    if (inst.group_size(g) == 0) out.push_back(warning("EMPTY_GROUP", "group " + glabel(g) + " has no students", g));
  }

  // Pinned groups sharing a slot.
  for (int t = 0; t < T; ++t) {
    long long seats = 0;
    for (int g = 0; g < G; ++g)
      if (inst.required(g, t)) seats += inst.group_size(g);
    if (seats > inst.capacity)
      out.push_back(error("PINNED_CAPACITY", "groups pinned to " + inst.grid.label(t) + " exceed slot capacity", -1, t));
    auto check_cap = [&](const Incidence& m, const std::vector<std::string>& ids, const char* code, const char* who) {
      for (int p = 0; p < m.rows(); ++p) {
        int hits = 0;
        for (Incidence::InnerIterator it(m, p); it; ++it)
          if (inst.required(static_cast<int>(it.col()), t)) ++hits;
        if (hits > 2)
          out.push_back(error(code, std::string(who) + " " + ids[static_cast<std::size_t>(p)] + " has " +
                                        std::to_string(hits) + " groups pinned to " + inst.grid.label(t) +
                                        "; at most two groups per person may share a slot",
                              -1, t));
      }
    };
    check_cap(inst.student_group, inst.students, "OVERLAP_CAP_PINNED", "student");
    check_cap(inst.faculty_group, inst.faculty, "FACULTY_OVERLAP_CAP_PINNED", "faculty");
  }

  if (!inst.weights.non_negative()) out.push_back(error("NEGATIVE_WEIGHT", "penalty weights must be non-negative"));
  if (inst.capacity <= 0) out.push_back(error("BAD_CAPACITY", "slot capacity must be positive"));

  for (const auto& a : inst.ambiguous_sections)
    out.push_back(warning("AMBIGUOUS_SECTION", "section " + a.section_key + " needs a grouping decision"));
  for (const auto& w : inst.ingest_warnings) out.push_back(warning("DUPLICATE_ENROLLMENT", w));
  for (const auto& f : inst.forced_overlaps)
    out.push_back(warning("FORCED_OVERLAP", "student " + f.student_id + " attends overlapping " + f.course_a +
                                                " and " + f.course_b + " in one group"));
  return out;
}

}  // namespace examsched
