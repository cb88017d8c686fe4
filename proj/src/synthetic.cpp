#include "examsched/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "examsched/text.hpp"

namespace examsched {
namespace {

std::string clock(int minutes) { return text::format_clock(minutes); }

std::string pattern(const std::string& days, int start, int length, const char* kind = "lecture") {
  return days + " " + clock(start) + "-" + clock(start + length) + " " + kind;
}

// About sixty distinct weekly patterns, most common first.
std::vector<std::string> lecture_patterns() {
  std::vector<std::string> out;
  for (int h = 8; h <= 16; ++h) out.push_back(pattern("MWF", h * 60, 50));
  for (int s : {480, 570, 660, 750, 840, 930}) out.push_back(pattern("TR", s, 75));
  for (int s : {780, 870, 960}) out.push_back(pattern("MW", s, 75));
  for (int h = 8; h <= 12; ++h) out.push_back(pattern("MTWF", h * 60, 50));
  for (int h = 9; h <= 13; ++h) out.push_back(pattern("MWRF", h * 60, 50));
  for (int s : {480, 600, 780, 900}) out.push_back(pattern("TR", s, 110));
  for (const char* d : {"M", "T", "W", "R"}) out.push_back(pattern(d, 19 * 60, 170, "evening"));
  out.push_back(pattern("WF", 660, 75));
  out.push_back(pattern("MF", 780, 75));
  out.push_back(pattern("F", 840, 170));
  out.push_back(pattern("MWF", 17 * 60, 50));
  out.push_back(pattern("T", 780, 170));
  out.push_back(pattern("R", 780, 170));
  out.push_back(pattern("R", 540, 170));
  out.push_back(pattern("W", 840, 170));
  for (int h : {8, 9}) out.push_back(pattern("MTWRF", h * 60, 50));
  for (int h : {10, 11}) out.push_back(pattern("TWR", h * 60, 50));
  for (int s : {480, 570, 660}) out.push_back(pattern("MW", s, 75));
  out.push_back(pattern("TR", 1020, 75));
  out.push_back(pattern("M", 840, 170));
  out.push_back(pattern("T", 540, 170));
  out.push_back(pattern("F", 540, 170));
  out.push_back(pattern("MR", 900, 75));
  out.push_back(pattern("TF", 600, 75));
  out.push_back(pattern("WR", 780, 75));
  return out;
}

const char* kDepartments[] = {"ACFM", "ANTH", "ARTH", "ASTR", "BIOL", "BMEG", "CHEG", "CHEM", "CLAS", "CSCI",
                              "ECON", "ECEG", "EDUC", "ENGL", "ENST", "FREN", "GEOG", "GEOL", "GRMN", "HIST",
                              "LING", "MATH", "MECH", "MGMT", "MUSC", "PHIL", "PHYS", "POLS", "PSYC", "SOCI"};

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen); }
  int below(int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(gen)); }
  int pick(const std::discrete_distribution<int>::param_type& p) {
    return std::discrete_distribution<int>(p)(gen);
  }
};

}  // namespace

SourceFiles generate_sources(const SyntheticConfig& c) {
  if (c.students < 1 || c.courses < 1 || c.faculty < 1 || c.min_courses < 1 || c.max_courses < c.min_courses ||
      c.coordinated > c.multi_section || c.multi_section > c.courses)
    throw Error(ErrorCode::kConfiguration, "inconsistent synthetic generator settings");
  Rng rng(c.seed);
  const auto patterns = lecture_patterns();
  std::vector<double> pattern_weight(patterns.size());
  for (std::size_t i = 0; i < patterns.size(); ++i) pattern_weight[i] = 1.0 / std::pow(static_cast<double>(i) + 3.0, 0.8);
  std::discrete_distribution<int>::param_type pattern_dist(pattern_weight.begin(), pattern_weight.end());

  struct Course {
    std::string code;
    std::vector<std::string> section_ids;
    std::vector<std::vector<Meeting>> meetings;
  };
  std::vector<Course> courses;
  std::set<std::string> codes;
  std::string sections_csv = "course_code,section_id,meetings,faculty_ids\n";
  std::vector<std::vector<std::vector<Meeting>>> faculty_load(static_cast<std::size_t>(c.faculty));
  auto faculty_id = [](int f) {
    std::string s = std::to_string(f + 1);
    return "F" + std::string(4 - std::min<std::size_t>(4, s.size()), '0') + s;
  };

  for (int i = 0; i < c.courses; ++i) {
    Course course;
    do {
      const char* dept = kDepartments[rng.below(static_cast<int>(std::size(kDepartments)))];
      course.code = std::string(dept) + std::to_string(100 + rng.below(400));
    } while (!codes.insert(course.code).second);
    int n_sections = i < c.multi_section ? 2 + rng.below(4) : 1;
    bool coordinated = i < c.coordinated;
    int shared = rng.pick(pattern_dist);
    for (int s = 0; s < n_sections; ++s) {
      std::string sid = (s < 9 ? "0" : "") + std::to_string(s + 1);
      // Coordinated courses spread their sections over several times; others
      // sometimes repeat one time in parallel rooms.
      int p = coordinated || rng.unit() < 0.7 ? rng.pick(pattern_dist) : shared;
      std::string meet = patterns[static_cast<std::size_t>(p)];
      if (rng.unit() < c.lab_fraction) {
        static const char* lab_days[] = {"M", "T", "W", "R"};
        meet += "; " + pattern(lab_days[rng.below(4)], 13 * 60 + 30 * rng.below(2), 170, "lab");
      }
      auto meetings = parse_meeting_pattern(meet);
      std::vector<int> teachers;
      int n_teachers = rng.unit() < 0.05 ? 2 : 1;
      for (int attempt = 0; static_cast<int>(teachers.size()) < n_teachers && attempt < 50; ++attempt) {
        int f = rng.below(c.faculty);
        if (std::find(teachers.begin(), teachers.end(), f) != teachers.end()) continue;
        bool clash = std::any_of(faculty_load[static_cast<std::size_t>(f)].begin(),
                                 faculty_load[static_cast<std::size_t>(f)].end(),
                                 [&](const auto& other) { return meetings_intersect(other, meetings); });
        if (!clash || attempt == 49) teachers.push_back(f);
      }
      std::string fac;
      for (int f : teachers) {
        faculty_load[static_cast<std::size_t>(f)].push_back(meetings);
        fac += (fac.empty() ? "" : ";") + faculty_id(f);
      }
      sections_csv += course.code + "," + sid + ",\"" + meet + "\"," + fac + "\n";
      course.section_ids.push_back(sid);
      course.meetings.push_back(std::move(meetings));
    }
    courses.push_back(std::move(course));
  }

  std::vector<double> popularity(courses.size());
  for (std::size_t i = 0; i < courses.size(); ++i) popularity[i] = 1.0 / std::pow(static_cast<double>(i) + 5.0, 0.9);
  std::discrete_distribution<int>::param_type course_dist(popularity.begin(), popularity.end());

  std::string enrollments_csv = "student_id,course_code,section_id\n";
  for (int s = 0; s < c.students; ++s) {
    std::string sid = std::to_string(s + 1);
    sid = "S" + std::string(5 - std::min<std::size_t>(5, sid.size()), '0') + sid;
    int want = c.min_courses + rng.below(c.max_courses - c.min_courses + 1);
    std::vector<int> taken;
    std::vector<const std::vector<Meeting>*> busy;
    for (int attempt = 0; static_cast<int>(taken.size()) < want && attempt < 60; ++attempt) {
      int ci = rng.pick(course_dist);
      if (std::find(taken.begin(), taken.end(), ci) != taken.end()) continue;
      const auto& course = courses[static_cast<std::size_t>(ci)];
      int sec = rng.below(static_cast<int>(course.section_ids.size()));
      const auto& m = course.meetings[static_cast<std::size_t>(sec)];
      if (std::any_of(busy.begin(), busy.end(), [&](const auto* b) { return meetings_intersect(*b, m); })) continue;
      taken.push_back(ci);
      busy.push_back(&m);
      enrollments_csv += sid + "," + course.code + "," + course.section_ids[static_cast<std::size_t>(sec)] + "\n";
    }
  }

  std::string coordinated_csv;
  for (int i = 0; i < c.coordinated; ++i) coordinated_csv += courses[static_cast<std::size_t>(i)].code + "\n";

  SourceFiles files;
  files.sections = std::move(sections_csv);
  files.enrollments = std::move(enrollments_csv);
  files.coordinated = std::move(coordinated_csv);
  return files;
}

Instance generate_instance(const SyntheticConfig& config, const Weights& weights) {
  return load_instance(generate_sources(config), weights);
}

}  // namespace examsched
