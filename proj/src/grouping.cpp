#include "examsched/grouping.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "examsched/error.hpp"
#include "examsched/text.hpp"

namespace examsched {
namespace {

constexpr std::string_view kWeekdayOrder = "MTWRFSU";
constexpr std::array<MeetingKind, 4> kKindPriority = {MeetingKind::kLecture, MeetingKind::kOther,
                                                      MeetingKind::kEvening, MeetingKind::kLab};

int weekday_rank(char d) { return static_cast<int>(kWeekdayOrder.find(d)); }

MeetingKind parse_kind(std::string_view s) {
  if (s == "lecture") return MeetingKind::kLecture;
  if (s == "lab") return MeetingKind::kLab;
  if (s == "evening") return MeetingKind::kEvening;
  if (s == "other") return MeetingKind::kOther;
  throw Error(ErrorCode::kParse, "unknown meeting kind '" + std::string(s) + "'");
}

std::string hhmm(int minutes) {
  auto c = text::format_clock(minutes);
  return c.substr(0, 2) + c.substr(3, 2);
}

// (first weekday, earliest start) of a group's defining meetings, for ordering.
std::pair<int, int> chronological_rank(const std::vector<Meeting>& meetings, MeetingKind kind) {
  std::pair<int, int> best{99, 0};
  for (const auto& m : meetings)
    if (m.kind == kind) best = std::min(best, {weekday_rank(m.weekday), m.start});
  return best;
}

struct Lookup {
  std::unordered_map<std::string, const Section*> sections;
  std::unordered_map<std::string, std::vector<std::string>> students_of_section;

  explicit Lookup(const GroupingInput& input) {
    for (const auto& s : input.sections) sections.emplace(s.key(), &s);
    for (const auto& e : input.enrollments)
      students_of_section[e.course_code + "/" + e.section_id].push_back(e.student_id);
  }
};

void recompute(const GroupingInput& input, GroupingResult& result) {
  Lookup lookup(input);
  std::set<ForcedOverlap> forced;
  for (auto& g : result.groups) {
    // student -> sections of this group they attend
    std::map<std::string, std::vector<const Section*>> attending;
    for (const auto& key : g.section_keys) {
      auto it = lookup.students_of_section.find(key);
      if (it == lookup.students_of_section.end()) continue;
      for (const auto& student : it->second) attending[student].push_back(lookup.sections.at(key));
    }
    g.n_students = static_cast<int>(attending.size());
    for (const auto& [student, secs] : attending) {
      for (std::size_t i = 0; i < secs.size(); ++i) {
        for (std::size_t j = i + 1; j < secs.size(); ++j) {
          if (secs[i]->course_code == secs[j]->course_code) continue;
          if (!meetings_intersect(secs[i]->meetings, secs[j]->meetings)) continue;
          auto a = std::min(secs[i]->course_code, secs[j]->course_code);
          auto b = std::max(secs[i]->course_code, secs[j]->course_code);
          forced.insert({student, a, b});
        }
      }
    }
  }
  result.forced_overlap_pairs.assign(forced.begin(), forced.end());
}

}  // namespace

const char* to_string(MeetingKind kind) {
  switch (kind) {
    case MeetingKind::kLecture: return "lecture";
    case MeetingKind::kLab: return "lab";
    case MeetingKind::kEvening: return "evening";
    case MeetingKind::kOther: return "other";
  }
  return "other";
}

const char* to_string(GroupKind kind) {
  return kind == GroupKind::kCoordinated ? "coordinated" : "meeting-time";
}

std::vector<Meeting> parse_meeting_pattern(std::string_view pattern) {
  std::vector<Meeting> out;
  for (const auto& part : text::split(pattern, ';')) {
    if (part.empty()) continue;
    std::istringstream in(part);
    std::string days, times, kind = "lecture";
    in >> days >> times;
    if (days.empty() || times.empty())
      throw Error(ErrorCode::kParse, "bad meeting pattern '" + part + "'");
    in >> kind;
    auto dash = times.find('-');
    if (dash == std::string::npos) throw Error(ErrorCode::kParse, "bad meeting time '" + times + "'");
    int start = text::parse_clock(std::string_view(times).substr(0, dash));
    int end = text::parse_clock(std::string_view(times).substr(dash + 1));
    if (start >= end) throw Error(ErrorCode::kParse, "meeting must start before it ends: '" + part + "'");
    MeetingKind k = parse_kind(kind);
    for (char d : days) {
      if (weekday_rank(d) < 0) throw Error(ErrorCode::kParse, "unknown weekday '" + std::string(1, d) + "'");
      out.push_back({d, start, end, k});
    }
  }
  std::sort(out.begin(), out.end(), [](const Meeting& a, const Meeting& b) {
    return std::tuple(a.kind, a.start, a.end, weekday_rank(a.weekday)) <
           std::tuple(b.kind, b.start, b.end, weekday_rank(b.weekday));
  });
  return out;
}

std::string format_meeting_pattern(const std::vector<Meeting>& meetings) {
  // Re-collapse weekdays that share (kind, start, end); input is sorted that way.
  std::string out;
  for (std::size_t i = 0; i < meetings.size();) {
    std::size_t j = i;
    std::string days;
    while (j < meetings.size() && meetings[j].kind == meetings[i].kind &&
           meetings[j].start == meetings[i].start && meetings[j].end == meetings[i].end) {
      days.push_back(meetings[j].weekday);
      ++j;
    }
    if (!out.empty()) out += "; ";
    out += days + " " + text::format_clock(meetings[i].start) + "-" + text::format_clock(meetings[i].end) +
           " " + to_string(meetings[i].kind);
    i = j;
  }
  return out;
}

MeetingKind primary_kind(const std::vector<Meeting>& meetings) {
  for (auto kind : kKindPriority)
    if (std::any_of(meetings.begin(), meetings.end(), [&](const Meeting& m) { return m.kind == kind; }))
      return kind;
  throw Error(ErrorCode::kConfiguration, "section has no meeting times");
}

std::string meeting_key(const std::vector<Meeting>& meetings, MeetingKind kind) {
  std::map<int, std::string> by_start;
  for (const auto& m : meetings)
    if (m.kind == kind) by_start[m.start].push_back(m.weekday);
  std::vector<std::string> parts;
  for (auto& [start, days] : by_start) {
    std::sort(days.begin(), days.end(), [](char a, char b) { return weekday_rank(a) < weekday_rank(b); });
    parts.push_back(days + "-" + hhmm(start));
  }
  std::sort(parts.begin(), parts.end(), [](const std::string& a, const std::string& b) {
    return std::pair(weekday_rank(a[0]), a) < std::pair(weekday_rank(b[0]), b);
  });
  std::string key;
  for (const auto& p : parts) key += (key.empty() ? "" : "+") + p;
  return key;
}

bool meetings_intersect(const std::vector<Meeting>& a, const std::vector<Meeting>& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (x.weekday == y.weekday && x.start < y.end && y.start < x.end) return true;
  return false;
}

GroupingResult build_groups(const GroupingInput& input) {
  GroupingResult result;
  std::set<std::string> coordinated(input.coordinated_courses.begin(), input.coordinated_courses.end());
  std::map<std::string, std::vector<std::string>> coordinated_sections;
  for (const auto& c : coordinated) coordinated_sections[c];

  struct Pending {
    std::pair<int, int> rank;
    std::vector<std::string> sections;
  };
  std::map<std::string, Pending> by_key;
  std::vector<std::string> unscheduled;

  for (const auto& s : input.sections) {
    if (coordinated.count(s.course_code)) {
      coordinated_sections[s.course_code].push_back(s.key());
      continue;
    }
    if (s.meetings.empty()) {
      unscheduled.push_back(s.key());
      result.ambiguous_sections.push_back({s.key(), {}});
      continue;
    }
    MeetingKind kind = primary_kind(s.meetings);
    std::string key = meeting_key(s.meetings, kind);
    auto& pending = by_key[key];
    pending.rank = chronological_rank(s.meetings, kind);
    pending.sections.push_back(s.key());

    std::vector<std::string> candidates;
    for (auto k : kKindPriority) {
      if (std::any_of(s.meetings.begin(), s.meetings.end(), [&](const Meeting& m) { return m.kind == k; }))
        candidates.push_back(meeting_key(s.meetings, k));
    }
    if (candidates.size() > 1) result.ambiguous_sections.push_back({s.key(), std::move(candidates)});
  }

  for (auto& [course, sections] : coordinated_sections) {
    if (sections.empty())
      throw Error(ErrorCode::kUnknownReference, "coordinated course '" + course + "' has no sections");
    result.groups.push_back({0, course, GroupKind::kCoordinated, std::move(sections), 0});
  }
  std::vector<std::pair<std::string, Pending>> keyed(by_key.begin(), by_key.end());
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.second.rank < b.second.rank; });
  for (auto& [key, pending] : keyed)
    result.groups.push_back({0, key, GroupKind::kMeetingTime, std::move(pending.sections), 0});
  for (auto& key : unscheduled) result.groups.push_back({0, key, GroupKind::kMeetingTime, {key}, 0});

  for (std::size_t i = 0; i < result.groups.size(); ++i) result.groups[i].id = static_cast<int>(i);
  std::sort(result.ambiguous_sections.begin(), result.ambiguous_sections.end(),
            [](const auto& a, const auto& b) { return a.section_key < b.section_key; });
  recompute(input, result);
  return result;
}

GroupingResult apply_group_edits(const GroupingInput& input, const GroupingResult& result,
                                 const std::vector<GroupEdit>& edits) {
  GroupingResult out = result;
  std::unordered_map<std::string, std::size_t> owner;
  for (std::size_t g = 0; g < out.groups.size(); ++g)
    for (const auto& key : out.groups[g].section_keys) owner[key] = g;

  std::set<std::string> edited;
  for (const auto& edit : edits) {
    auto it = owner.find(edit.section_key);
    if (it == owner.end())
      throw Error(ErrorCode::kUnknownReference, "unknown section '" + edit.section_key + "'");
    auto target = std::find_if(out.groups.begin(), out.groups.end(),
                               [&](const CourseGroup& g) { return g.label == edit.target_group; });
    std::size_t to;
    if (target == out.groups.end()) {
      out.groups.push_back({0, edit.target_group, GroupKind::kMeetingTime, {}, 0});
      to = out.groups.size() - 1;
    } else {
      to = static_cast<std::size_t>(target - out.groups.begin());
    }
    auto& from_keys = out.groups[it->second].section_keys;
    from_keys.erase(std::find(from_keys.begin(), from_keys.end(), edit.section_key));
    auto& to_keys = out.groups[to].section_keys;
    to_keys.insert(std::lower_bound(to_keys.begin(), to_keys.end(), edit.section_key), edit.section_key);
    it->second = to;
    edited.insert(edit.section_key);
  }

  std::erase_if(out.groups, [](const CourseGroup& g) { return g.section_keys.empty(); });
  for (std::size_t i = 0; i < out.groups.size(); ++i) out.groups[i].id = static_cast<int>(i);
  std::erase_if(out.ambiguous_sections,
                [&](const AmbiguousSection& a) { return edited.count(a.section_key) > 0; });
  recompute(input, out);
  return out;
}

std::string grouping_report_csv(const GroupingResult& result) {
  std::set<std::string> ambiguous;
  for (const auto& a : result.ambiguous_sections) ambiguous.insert(a.section_key);
  std::ostringstream out;
  out << "group_id,label,kind,section,n_students,ambiguous\n";
  for (const auto& g : result.groups)
    for (const auto& s : g.section_keys)
      out << g.id << ',' << g.label << ',' << to_string(g.kind) << ',' << s << ',' << g.n_students << ','
          << (ambiguous.count(s) ? "yes" : "no") << '\n';
  return out.str();
}

}  // namespace examsched
