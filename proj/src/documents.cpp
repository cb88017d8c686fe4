#include "examsched/documents.hpp"

#include <algorithm>
#include <unordered_map>

#include "examsched/text.hpp"

namespace examsched {
namespace {

Json header(const char* kind) { return Json{{"schema_version", kSchemaVersion}, {"kind", kind}}; }

template <typename T>
T field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::kParse, std::string("document lacks '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "': " + e.what());
  }
}

GroupKind group_kind_from(const std::string& s) {
  if (s == "coordinated") return GroupKind::kCoordinated;
  if (s == "meeting-time") return GroupKind::kMeetingTime;
  throw Error(ErrorCode::kParse, "unknown group kind '" + s + "'");
}

MeetingKind meeting_kind_from(const std::string& s) {
  for (auto k : {MeetingKind::kLecture, MeetingKind::kLab, MeetingKind::kEvening, MeetingKind::kOther})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::kParse, "unknown meeting kind '" + s + "'");
}

ConstraintAction action_from(const std::string& s) {
  for (auto a : {ConstraintAction::kRequire, ConstraintAction::kForbid, ConstraintAction::kUnavailable,
                 ConstraintAction::kAvailable})
    if (s == to_string(a)) return a;
  throw Error(ErrorCode::kParse, "unknown constraint action '" + s + "'");
}

Json interval(const ClockInterval& c) { return text::format_clock(c.start) + "-" + text::format_clock(c.end); }

ClockInterval interval_from(const std::string& s) {
  auto parts = text::split(s, '-');
  if (parts.size() != 2) throw Error(ErrorCode::kParse, "bad interval '" + s + "'");
  return {text::parse_clock(parts[0]), text::parse_clock(parts[1])};
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json constraints_to_json(const ConstraintSet& cs) {
  Json rows = Json::array();
  for (const auto& r : cs.rows) rows.push_back({{"group", r.group}, {"slot", r.slot}, {"action", to_string(r.action)}});
  return {{"rows", rows}, {"capacity", cs.capacity ? Json(*cs.capacity) : Json(nullptr)}};
}

ConstraintSet constraints_from_json(const Json& doc) {
  ConstraintSet cs;
  for (const auto& r : doc.at("rows"))
    cs.rows.push_back({field<std::string>(r, "group"), field<std::string>(r, "slot"),
                       action_from(field<std::string>(r, "action"))});
  if (doc.contains("capacity") && !doc.at("capacity").is_null()) cs.capacity = doc.at("capacity").get<long long>();
  return cs;
}

std::vector<std::vector<int>> incidence_lists(const Incidence& m) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(m.rows()));
  for (int r = 0; r < m.outerSize(); ++r)
    for (Incidence::InnerIterator it(m, r); it; ++it) out[static_cast<std::size_t>(r)].push_back(static_cast<int>(it.col()));
  return out;
}

Incidence incidence_from_lists(const std::vector<std::vector<int>>& lists, int cols) {
  std::vector<Eigen::Triplet<int>> t;
  for (std::size_t r = 0; r < lists.size(); ++r)
    for (int c : lists[r]) {
      if (c < 0 || c >= cols) throw Error(ErrorCode::kParse, "group index out of range");
      t.emplace_back(static_cast<int>(r), c, 1);
    }
  Incidence m(static_cast<Eigen::Index>(lists.size()), cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_document(std::string_view text, std::string_view expected_kind) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("not a valid document: ") + e.what());
  }
  if (!expected_kind.empty()) {
    if (!doc.is_object() || !doc.contains("kind") || doc.at("kind") != expected_kind)
      throw Error(ErrorCode::kParse, "expected a '" + std::string(expected_kind) + "' document");
    if (doc.value("schema_version", 0) != kSchemaVersion)
      throw Error(ErrorCode::kParse, "unsupported schema version");
  }
  return doc;
}

Json period_to_json(const ExamPeriodConfig& c) {
  Json days = Json::array();
  for (const auto& d : c.days) days.push_back({{"label", d.label}, {"night", d.has_night}});
  Json daytime = Json::array();
  for (const auto& s : c.daytime_slots) daytime.push_back(interval(s));
  return {{"days", days},
          {"daytime_slots", daytime},
          {"night_slot", interval(c.night_slot)},
          {"exam_length_minutes", c.exam_length_minutes}};
}

ExamPeriodConfig period_from_json(const Json& doc) {
  ExamPeriodConfig c;
  for (const auto& d : doc.at("days")) c.days.push_back({field<std::string>(d, "label"), field<bool>(d, "night")});
  for (const auto& s : doc.at("daytime_slots")) c.daytime_slots.push_back(interval_from(s.get<std::string>()));
  c.night_slot = interval_from(field<std::string>(doc, "night_slot"));
  c.exam_length_minutes = field<int>(doc, "exam_length_minutes");
  validate_config(c);
  return c;
}

Json grid_to_json(const TimeGrid& grid) {
  Json slots = Json::array();
  for (const auto& s : grid.slots())
    slots.push_back({{"id", s.id},
                     {"day", s.day_index},
                     {"day_label", grid.config().days[static_cast<std::size_t>(s.day_index)].label},
                     {"ref", slot_ref(grid, s.id)},
                     {"label", grid.label(s.id)},
                     {"night", s.is_night}});
  auto patterns = pattern_sets(grid);
  Json b2b = Json::array(), pm = Json::array();
  for (auto [a, b] : patterns.b2b_pairs) b2b.push_back({a, b});
  for (auto [a, b] : patterns.pm_to_am_pairs) pm.push_back({a, b});
  return {{"slots", slots},
          {"b2b_pairs", b2b},
          {"pm_to_am_pairs", pm},
          {"windows_3in24", patterns.windows_3in24.size()},
          {"windows_4in48", patterns.windows_4in48.size()}};
}

Json weights_to_json(const Weights& w) {
  return {{"overlap", w.overlap},       {"b2b", w.b2b},
          {"pm_to_am", w.pm_to_am},     {"three_in_24", w.three_in_24},
          {"four_in_48", w.four_in_48}, {"faculty_overlap", w.faculty_overlap},
          {"faculty_b2b", w.faculty_b2b}};
}

Weights weights_from_json(const Json& doc) {
  Weights w{field<double>(doc, "overlap"),    field<double>(doc, "b2b"),
            field<double>(doc, "pm_to_am"),   field<double>(doc, "three_in_24"),
            field<double>(doc, "four_in_48"), field<double>(doc, "faculty_overlap"),
            field<double>(doc, "faculty_b2b")};
  if (!w.non_negative()) throw Error(ErrorCode::kConfiguration, "weights must be non-negative");
  return w;
}

Json catalog_to_json(const WeightCatalog& catalog) {
  Json sets = Json::array();
  for (const auto& w : catalog) sets.push_back({{"name", w.name}, {"weights", weights_to_json(w.weights)}, {"note", w.note}});
  Json doc = header("weight-catalog");
  doc["sets"] = sets;
  return doc;
}

WeightCatalog catalog_from_json(const Json& doc) {
  WeightCatalog out;
  const Json& sets = doc.is_array() ? doc : doc.at("sets");
  for (const auto& s : sets) out.push_back({field<std::string>(s, "name"), weights_from_json(s.at("weights")), s.value("note", "")});
  if (out.empty()) throw Error(ErrorCode::kConfiguration, "weight catalog is empty");
  return out;
}

Json instance_to_json(const Instance& inst) {
  Json doc = header("instance");
  doc["period"] = period_to_json(inst.grid.config());
  doc["students"] = inst.students;
  doc["faculty"] = inst.faculty;
  Json groups = Json::array();
  for (const auto& g : inst.groups)
    groups.push_back({{"id", g.id}, {"label", g.label}, {"kind", to_string(g.kind)}, {"sections", g.section_keys},
                      {"n_students", g.n_students}});
  doc["groups"] = groups;
  doc["student_groups"] = incidence_lists(inst.student_group);
  doc["faculty_groups"] = incidence_lists(inst.faculty_group);
  Json unavailable = Json::array(), required = Json::array(), forbidden = Json::array();
  for (int t = 0; t < inst.n_slots(); ++t)
    if (!inst.available(t)) unavailable.push_back(t);
  for (int g = 0; g < inst.n_groups(); ++g)
    for (int t = 0; t < inst.n_slots(); ++t) {
      if (inst.required(g, t)) required.push_back({g, t});
      if (inst.forbidden(g, t)) forbidden.push_back({g, t});
    }
  doc["unavailable_slots"] = unavailable;
  doc["required"] = required;
  doc["forbidden"] = forbidden;
  doc["capacity"] = inst.capacity;
  doc["weights"] = weights_to_json(inst.weights);
  Json forced = Json::array();
  for (const auto& f : inst.forced_overlaps) forced.push_back({f.student_id, f.course_a, f.course_b});
  doc["forced_overlaps"] = forced;
  Json ambiguous = Json::array();
  for (const auto& a : inst.ambiguous_sections) ambiguous.push_back({{"section", a.section_key}, {"candidates", a.candidate_keys}});
  doc["ambiguous_sections"] = ambiguous;
  doc["ingest_warnings"] = inst.ingest_warnings;

  Json sections = Json::array();
  for (const auto& s : inst.source.sections) {
    Json meetings = Json::array();
    for (const auto& m : s.meetings)
      meetings.push_back({{"day", std::string(1, m.weekday)},
                          {"start", text::format_clock(m.start)},
                          {"end", text::format_clock(m.end)},
                          {"kind", to_string(m.kind)}});
    sections.push_back({{"course", s.course_code}, {"section", s.section_id}, {"meetings", meetings}, {"faculty", s.faculty_ids}});
  }
  Json enrollments = Json::array();
  for (const auto& e : inst.source.enrollments) enrollments.push_back({e.student_id, e.course_code, e.section_id});
  doc["source"] = {{"sections", sections}, {"enrollments", enrollments}, {"coordinated", inst.source.coordinated_courses}};
  doc["constraints"] = constraints_to_json(inst.constraints);
  return doc;
}

Instance instance_from_json(const Json& doc) {
  try {
    Instance inst;
    inst.grid = build_grid(period_from_json(doc.at("period")));
    inst.students = field<std::vector<std::string>>(doc, "students");
    inst.faculty = field<std::vector<std::string>>(doc, "faculty");
    for (const auto& g : doc.at("groups"))
      inst.groups.push_back({field<int>(g, "id"), field<std::string>(g, "label"), group_kind_from(field<std::string>(g, "kind")),
                             field<std::vector<std::string>>(g, "sections"), field<int>(g, "n_students")});
    const int G = inst.n_groups(), T = inst.n_slots();
    auto sg = field<std::vector<std::vector<int>>>(doc, "student_groups");
    auto fg = field<std::vector<std::vector<int>>>(doc, "faculty_groups");
    if (sg.size() != inst.students.size() || fg.size() != inst.faculty.size())
      throw Error(ErrorCode::kParse, "incidence lists do not match the people lists");
    inst.student_group = incidence_from_lists(sg, G);
    inst.faculty_group = incidence_from_lists(fg, G);
    inst.available = SlotFlags::Constant(T, true);
    inst.required = GroupSlotFlags::Constant(G, T, false);
    inst.forbidden = GroupSlotFlags::Constant(G, T, false);
    auto in_range = [&](int g, int t) {
      if (g < 0 || g >= G || t < 0 || t >= T) throw Error(ErrorCode::kParse, "group/slot index out of range");
    };
    for (int t : field<std::vector<int>>(doc, "unavailable_slots")) {
      in_range(0, t);
      inst.available(t) = false;
    }
    for (const auto& p : doc.at("required")) {
      in_range(p.at(0), p.at(1));
      inst.required(p.at(0).get<int>(), p.at(1).get<int>()) = true;
    }
    for (const auto& p : doc.at("forbidden")) {
      in_range(p.at(0), p.at(1));
      inst.forbidden(p.at(0).get<int>(), p.at(1).get<int>()) = true;
    }
    inst.capacity = field<long long>(doc, "capacity");
    inst.weights = weights_from_json(doc.at("weights"));
    for (const auto& f : doc.at("forced_overlaps"))
      inst.forced_overlaps.push_back({f.at(0).get<std::string>(), f.at(1).get<std::string>(), f.at(2).get<std::string>()});
    for (const auto& a : doc.at("ambiguous_sections"))
      inst.ambiguous_sections.push_back({field<std::string>(a, "section"), field<std::vector<std::string>>(a, "candidates")});
    inst.ingest_warnings = field<std::vector<std::string>>(doc, "ingest_warnings");
    const Json& src = doc.at("source");
    for (const auto& s : src.at("sections")) {
      Section sec{field<std::string>(s, "course"), field<std::string>(s, "section"), {}, field<std::vector<std::string>>(s, "faculty")};
      for (const auto& m : s.at("meetings")) {
        auto day = field<std::string>(m, "day");
        if (day.size() != 1) throw Error(ErrorCode::kParse, "bad meeting day '" + day + "'");
        sec.meetings.push_back({day[0], text::parse_clock(field<std::string>(m, "start")),
                                text::parse_clock(field<std::string>(m, "end")), meeting_kind_from(field<std::string>(m, "kind"))});
      }
      inst.source.sections.push_back(std::move(sec));
    }
    for (const auto& e : src.at("enrollments"))
      inst.source.enrollments.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>(), e.at(2).get<std::string>()});
    inst.source.coordinated_courses = field<std::vector<std::string>>(src, "coordinated");
    inst.constraints = constraints_from_json(doc.at("constraints"));
    refresh_derived(inst);
    return inst;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed instance document: ") + e.what());
  }
}

std::string instance_digest(const Instance& instance) { return text::digest(instance_to_json(instance).dump()); }

Json grouping_to_json(const Instance& inst) {
  Json doc = header("grouping");
  std::unordered_map<std::string, const AmbiguousSection*> ambiguous;
  for (const auto& a : inst.ambiguous_sections) ambiguous[a.section_key] = &a;
  Json groups = Json::array();
  for (const auto& g : inst.groups) {
    Json sections = Json::array();
    bool flagged = false;
    for (const auto& key : g.section_keys) {
      auto it = ambiguous.find(key);
      Json s = {{"section", key}, {"ambiguous", it != ambiguous.end()}};
      if (it != ambiguous.end()) {
        s["candidates"] = it->second->candidate_keys;
        flagged = true;
      }
      sections.push_back(s);
    }
    groups.push_back({{"id", g.id}, {"label", g.label}, {"kind", to_string(g.kind)}, {"n_students", g.n_students},
                      {"sections", sections}, {"ambiguous", flagged}});
  }
  doc["groups"] = groups;
  doc["forced_overlap_count"] = inst.forced_overlaps.size();
  doc["ambiguous_count"] = inst.ambiguous_sections.size();
  return doc;
}

std::vector<GroupEdit> group_edits_from_json(const Json& doc) {
  std::vector<GroupEdit> out;
  const Json& edits = doc.is_array() ? doc : doc.at("edits");
  for (const auto& e : edits) out.push_back({field<std::string>(e, "section"), field<std::string>(e, "group")});
  return out;
}

Json findings_to_json(const std::vector<Finding>& findings) {
  Json doc = header("validation");
  Json list = Json::array();
  for (const auto& f : findings) {
    Json item = {{"severity", f.is_error() ? "error" : "warning"}, {"code", f.code}, {"message", f.message}};
    if (f.group >= 0) item["group"] = f.group;
    if (f.slot >= 0) item["slot"] = f.slot;
    list.push_back(item);
  }
  doc["findings"] = list;
  doc["valid"] = !has_errors(findings);
  return doc;
}

Json overlap_matrix_to_json(const OverlapMatrix& m) {
  Json doc = header("overlap-matrix");
  doc["labels"] = m.labels;
  auto rows = [](const Eigen::MatrixXi& a) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
      out.push_back(row);
    }
    return out;
  };
  doc["current"] = rows(m.current);
  doc["historical"] = m.historical ? rows(*m.historical) : Json(nullptr);
  return doc;
}

Json schedule_to_json(const Instance& inst, const Schedule& schedule, const std::string& weight_set) {
  Json doc = header("schedule");
  doc["instance_digest"] = instance_digest(inst);
  if (!weight_set.empty()) doc["weight_set"] = weight_set;
  Json rows = Json::array();
  for (int g = 0; g < schedule.size(); ++g) {
    const auto& grp = inst.groups[static_cast<std::size_t>(g)];
    Json row = {{"group", grp.label}, {"sections", grp.section_keys}, {"slot", schedule[g]}};
    if (schedule[g] >= 0) {
      row["slot_ref"] = slot_ref(inst.grid, schedule[g]);
      row["slot_label"] = inst.grid.label(schedule[g]);
    }
    rows.push_back(row);
  }
  doc["assignments"] = rows;
  return doc;
}

Schedule schedule_from_json(const Instance& inst, const Json& doc) {
  Schedule s = Schedule::unassigned(inst.n_groups());
  for (const auto& row : doc.at("assignments")) {
    auto label = field<std::string>(row, "group");
    int g = inst.group_index(label);
    if (g < 0) throw Error(ErrorCode::kUnknownReference, "schedule names unknown group '" + label + "'");
    int t = -1;
    if (row.contains("slot") && !row.at("slot").is_null()) t = row.at("slot").get<int>();
    else if (row.contains("slot_ref")) t = inst.grid.resolve(row.at("slot_ref").get<std::string>());
    if (t >= inst.n_slots()) throw Error(ErrorCode::kUnknownReference, "slot " + std::to_string(t) + " out of range");
    s[g] = t;
  }
  return s;
}

std::string schedule_csv(const Instance& inst, const Schedule& schedule) {
  std::string out = "group,sections,slot,day,time\n";
  for (int g = 0; g < schedule.size(); ++g) {
    const auto& grp = inst.groups[static_cast<std::size_t>(g)];
    std::string sections;
    for (const auto& k : grp.section_keys) sections += (sections.empty() ? "" : " ") + k;
    out += "\"" + grp.label + "\",\"" + sections + "\",";
    if (schedule[g] >= 0) {
      const auto& slot = inst.grid.slot(schedule[g]);
      out += std::to_string(schedule[g]) + "," + inst.grid.config().days[static_cast<std::size_t>(slot.day_index)].label +
             "," + text::format_clock(slot.start % 1440) + "-" + text::format_clock(slot.end % 1440);
    } else {
      out += ",,";
    }
    out += "\n";
  }
  return out;
}

Json report_to_json(const InconvenienceReport& r) {
  Json doc = header("report");
  Json rows = Json::array();
  for (auto m : kAllMetrics) rows.push_back({{"key", metric_key(m)}, {"label", metric_label(m)}, {"value", r.head_count(m)}});
  doc["rows"] = rows;
  doc["occurrences"] = {{"overlap", r.overlap_occurrences},
                        {"b2b", r.b2b_occurrences},
                        {"pm_to_am", r.pm_to_am_occurrences},
                        {"faculty_overlap", r.faculty_overlap_occurrences},
                        {"faculty_b2b", r.faculty_b2b_occurrences}};
  doc["forced_overlap_count"] = r.forced_overlap_count;
  doc["weighted_objective"] = r.weighted_objective;
  Json hard = Json::array();
  for (const auto& h : r.hard_violations) hard.push_back({{"code", h.code}, {"message", h.message}});
  doc["hard_violations"] = hard;
  doc["hard_feasible"] = r.hard_feasible();
  return doc;
}

Json delta_to_json(const ReportDelta& d) {
  Json rows = Json::array();
  for (auto m : kAllMetrics)
    rows.push_back({{"key", metric_key(m)}, {"label", metric_label(m)}, {"value", d.head_counts[static_cast<std::size_t>(m)]}});
  return {{"rows", rows},
          {"occurrences", {{"overlap", d.overlap_occurrences}, {"b2b", d.b2b_occurrences}, {"pm_to_am", d.pm_to_am_occurrences}}},
          {"weighted_objective", d.weighted_objective}};
}

Json outcome_to_json(const SolveOutcome& o, bool timings) {
  Json doc = {{"status", to_string(o.status)},
              {"objective", optional_number(o.objective)},
              {"bound", optional_number(o.bound)},
              {"work", o.work}};
  if (!o.message.empty()) doc["message"] = o.message;
  Json log = Json::array();
  for (const auto& p : o.incumbent_log) {
    Json point = {{"work", p.work}, {"objective", p.objective}};
    if (timings) point["seconds"] = p.seconds;
    log.push_back(point);
  }
  doc["incumbents"] = log;
  if (timings) doc["runtime"] = o.runtime;
  return doc;
}

Json two_phase_log(const TwoPhaseResult& r, const TwoPhaseConfig& c, bool timings) {
  Json doc = header("run-log");
  doc["config"] = {{"k_fixed", c.k_fixed},
                   {"phase1_initial_limit", c.phase1_initial_limit},
                   {"phase1_extension", c.phase1_extension},
                   {"phase1_hard_cap", c.phase1_hard_cap},
                   {"phase2_limit", c.phase2_limit},
                   {"phase1_work_limit", c.phase1_work_limit},
                   {"phase2_work_limit", c.phase2_work_limit},
                   {"seed", c.seed},
                   {"backend", c.backend}};
  doc["phase1_groups"] = r.phase1_groups;
  doc["phase1"] = outcome_to_json(r.phase1, timings);
  doc["phase2"] = outcome_to_json(r.phase2, timings);
  doc["objective"] = optional_number(r.objective);
  doc["phase2_bound"] = optional_number(r.phase2_bound);
  doc["gap"] = optional_number(r.gap);
  doc["degraded"] = r.degraded;
  doc["infeasible"] = r.infeasible;
  doc["message"] = r.message;
  doc["model"] = {{"variables", r.model_vars}, {"rows", r.model_rows}};
  return doc;
}

Json portfolio_manifest(const Instance& inst, const PortfolioResult& res, const PortfolioConfig& config) {
  Json doc = header("portfolio-manifest");
  doc["instance_digest"] = instance_digest(inst);
  doc["seed"] = config.seed;
  doc["k_values"] = res.k_values;
  doc["catalog"] = catalog_to_json(res.catalog)["sets"];
  doc["backend"] = config.run.backend;
  Json runs = Json::array();
  for (std::size_t i = 0; i < res.runs.size(); ++i) {
    const auto& run = res.runs[i];
    Json item = {{"index", i},
                 {"weight_set", res.catalog[static_cast<std::size_t>(run.weight_index)].name},
                 {"k_requested", run.k_requested},
                 {"k_used", run.k_used},
                 {"seed", run.seed},
                 {"status", run.failed ? "failed" : run.result.degraded ? "degraded" : "ok"}};
    if (run.failed) item["error"] = run.error;
    item["phase1"] = outcome_to_json(run.result.phase1, false);
    item["phase2"] = outcome_to_json(run.result.phase2, false);
    item["objective"] = run.report ? Json(run.report->weighted_objective) : Json(nullptr);
    item["gap"] = optional_number(run.result.gap);
    runs.push_back(item);
  }
  doc["runs"] = runs;
  Json best = Json::array();
  for (const auto& b : res.best) {
    const auto& name = res.catalog[static_cast<std::size_t>(b.weight_index)].name;
    Json item = {{"weight_set", name}, {"run", b.run_index}, {"k_used", b.k_used}};
    if (b.report) {
      item["objective"] = b.report->weighted_objective;
      item["report"] = report_to_json(*b.report);
      item["schedule"] = schedule_to_json(inst, b.schedule, name);
    }
    best.push_back(item);
  }
  doc["best"] = best;
  return doc;
}

Json portfolio_timings(const PortfolioResult& res) {
  Json doc = header("portfolio-timings");
  doc["wall_seconds"] = res.wall_seconds;
  doc["max_parallel"] = res.max_parallel;
  Json runs = Json::array();
  for (const auto& run : res.runs)
    runs.push_back({{"wall_seconds", run.wall_seconds},
                    {"phase1", outcome_to_json(run.result.phase1, true)},
                    {"phase2", outcome_to_json(run.result.phase2, true)}});
  doc["runs"] = runs;
  return doc;
}

Json whatif_to_json(const WhatIfTable& t) {
  Json doc = header("whatif");
  doc["base_days"] = t.base_days;
  doc["day_counts"] = t.day_counts;
  Json sets = Json::array();
  for (std::size_t w = 0; w < t.weight_sets.size(); ++w) {
    Json columns = Json::array();
    for (std::size_t c = 0; c < t.day_counts.size(); ++c) {
      const auto& cell = t.cells[w][c];
      std::string title = std::to_string(t.day_counts[c]) + " Exam Days" + (t.day_counts[c] == t.base_days ? " (Current Schedule)" : "");
      Json col = {{"days", t.day_counts[c]}, {"title", title}, {"infeasible", cell.infeasible}};
      if (!cell.message.empty()) col["message"] = cell.message;
      if (cell.report) col["objective"] = cell.report->weighted_objective;
      columns.push_back(col);
    }
    Json rows = Json::array();
    for (auto m : kAllMetrics) {
      Json values = Json::array();
      for (std::size_t c = 0; c < t.day_counts.size(); ++c) {
        const auto& cell = t.cells[w][c];
        values.push_back(cell.report ? Json(cell.report->head_count(m)) : Json(nullptr));
      }
      rows.push_back({{"key", metric_key(m)}, {"label", metric_label(m)}, {"values", values}});
    }
    sets.push_back({{"weight_set", t.weight_sets[w]}, {"columns", columns}, {"rows", rows}});
  }
  doc["tables"] = sets;
  return doc;
}

Json error_to_json(ErrorCode code, const std::string& message) {
  return {{"error", {{"code", to_string(code)}, {"message", message}}}};
}

}  // namespace examsched
