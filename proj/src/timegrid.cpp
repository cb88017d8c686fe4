#include "examsched/timegrid.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "examsched/error.hpp"
#include "examsched/text.hpp"

namespace examsched {
namespace {

constexpr int kMinutesPerDay = 24 * kMinutesPerHour;
const std::array<std::string_view, 7> kWeekdays = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

bool night_by_rule(std::string_view label, int day, int n_days) {
  return label != "Fri" && day != n_days - 1;
}

ClockInterval parse_interval(std::string_view s) {
  auto dash = s.find('-');
  if (dash == s.npos) throw Error(ErrorCode::kParse, "bad slot time '" + std::string(s) + "'");
  return {text::parse_clock(s.substr(0, dash)), text::parse_clock(s.substr(dash + 1))};
}

std::string format_interval(const ClockInterval& c) {
  return text::format_clock(c.start) + "-" + text::format_clock(c.end);
}

}  // namespace

ExamPeriodConfig default_period_config(int n_days) {
  ExamPeriodConfig config;
  config.daytime_slots = {{8 * 60, 11 * 60}, {11 * 60 + 30, 14 * 60 + 30}, {15 * 60, 18 * 60}};
  config.night_slot = {19 * 60, 22 * 60};
  config.exam_length_minutes = 180;
  config.days.push_back({"Mon", false});
  return with_day_count(config, n_days);
}

ExamPeriodConfig with_day_count(const ExamPeriodConfig& config, int n_days) {
  if (n_days < 1) throw Error(ErrorCode::kConfiguration, "an exam period needs at least one day");
  ExamPeriodConfig out = config;
  std::size_t first = 0;
  if (!config.days.empty()) {
    auto it = std::find(kWeekdays.begin(), kWeekdays.end(), config.days.front().label);
    if (it != kWeekdays.end()) first = static_cast<std::size_t>(it - kWeekdays.begin());
  }
  out.days.clear();
  for (int d = 0; d < n_days; ++d) {
    std::string label(kWeekdays[(first + static_cast<std::size_t>(d)) % kWeekdays.size()]);
    bool night = night_by_rule(label, d, n_days);
    out.days.push_back({std::move(label), night});
  }
  return out;
}

void validate_config(const ExamPeriodConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfiguration, msg); };
  if (config.days.empty()) fail("an exam period needs at least one day");
  if (config.daytime_slots.empty()) fail("each day needs at least one daytime slot");
  if (config.exam_length_minutes <= 0) fail("exam length must be positive");
  int prev_end = -1;
  for (const auto& s : config.daytime_slots) {
    if (s.end - s.start != config.exam_length_minutes)
      fail("slot " + format_interval(s) + " does not match the exam length");
    if (s.start < 0 || s.end > kMinutesPerDay) fail("slot " + format_interval(s) + " leaves the day");
    if (s.start < prev_end) fail("daytime slots overlap or are out of order at " + format_interval(s));
    prev_end = s.end;
  }
  bool any_night = std::any_of(config.days.begin(), config.days.end(),
                               [](const ExamDay& d) { return d.has_night; });
  if (any_night) {
    const auto& n = config.night_slot;
    if (n.end - n.start != config.exam_length_minutes) fail("night slot does not match the exam length");
    if (n.start < prev_end) fail("night slot must start after the last daytime slot ends");
    if (n.end > kMinutesPerDay) fail("night slot leaves the day");
  }
}

ExamPeriodConfig parse_period_config(std::string_view content) {
  ExamPeriodConfig config = default_period_config();
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == t.npos) throw Error(ErrorCode::kParse, "expected key = value: " + std::string(t));
    auto key = text::trim(t.substr(0, eq));
    auto value = text::trim(t.substr(eq + 1));
    if (key == "days") {
      config.days.clear();
      for (const auto& item : text::split(value, ',')) {
        auto colon = item.find(':');
        if (text::trim(item).empty()) {
          throw Error(ErrorCode::kParse, "empty day entry in '" + std::string(value) + "'");
        } else if (colon == std::string::npos) {
          config.days.push_back({item, false});
        } else if (text::trim(std::string_view(item).substr(colon + 1)) == "night") {
          config.days.push_back({std::string(text::trim(std::string_view(item).substr(0, colon))), true});
        } else {
          throw Error(ErrorCode::kParse, "bad day entry '" + item + "'");
        }
      }
    } else if (key == "daytime_slots") {
      config.daytime_slots.clear();
      for (const auto& item : text::split(value, ',')) config.daytime_slots.push_back(parse_interval(item));
    } else if (key == "night_slot") {
      config.night_slot = parse_interval(value);
    } else if (key == "exam_length_minutes") {
      int v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size())
        throw Error(ErrorCode::kParse, "bad exam_length_minutes");
      config.exam_length_minutes = v;
    } else {
      throw Error(ErrorCode::kParse, "unknown key '" + std::string(key) + "'");
    }
  }
  validate_config(config);
  return config;
}

std::string format_period_config(const ExamPeriodConfig& config) {
  std::ostringstream out;
  out << "days = ";
  for (std::size_t i = 0; i < config.days.size(); ++i) {
    if (i) out << ", ";
    out << config.days[i].label << (config.days[i].has_night ? ":night" : "");
  }
  out << "\ndaytime_slots = ";
  for (std::size_t i = 0; i < config.daytime_slots.size(); ++i) {
    if (i) out << ", ";
    out << format_interval(config.daytime_slots[i]);
  }
  out << "\nnight_slot = " << format_interval(config.night_slot)
      << "\nexam_length_minutes = " << config.exam_length_minutes << "\n";
  return out.str();
}

TimeGrid::TimeGrid(ExamPeriodConfig config) : config_(std::move(config)) {
  validate_config(config_);
  for (int d = 0; d < day_count(); ++d) {
    int seq = 0;
    for (const auto& s : config_.daytime_slots) {
      slots_.push_back({size(), d, seq++, d * kMinutesPerDay + s.start, d * kMinutesPerDay + s.end, false});
    }
    if (config_.days[static_cast<std::size_t>(d)].has_night) {
      const auto& n = config_.night_slot;
      slots_.push_back({size(), d, seq, d * kMinutesPerDay + n.start, d * kMinutesPerDay + n.end, true});
    }
  }
}

std::string TimeGrid::label(int id) const {
  const auto& s = slot(id);
  return config_.days[static_cast<std::size_t>(s.day_index)].label + " " +
         text::format_clock(s.start % kMinutesPerDay) + "-" + text::format_clock(s.end % kMinutesPerDay);
}

std::optional<int> TimeGrid::find(int day_index, int seq_in_day) const {
  for (const auto& s : slots_)
    if (s.day_index == day_index && s.seq_in_day == seq_in_day) return s.id;
  return std::nullopt;
}

int TimeGrid::resolve(std::string_view ref) const {
  ref = text::trim(ref);
  int id = 0;
  auto [p, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), id);
  if (ec == std::errc() && p == ref.data() + ref.size()) {
    if (id < 0 || id >= size()) throw Error(ErrorCode::kUnknownReference, "slot id out of range: " + std::string(ref));
    return id;
  }
  auto dash = ref.rfind('-');
  if (dash != ref.npos) {
    auto day = ref.substr(0, dash);
    auto pos = ref.substr(dash + 1);
    for (int d = 0; d < day_count(); ++d) {
      if (config_.days[static_cast<std::size_t>(d)].label != day) continue;
      for (const auto& s : slots_) {
        if (s.day_index != d) continue;
        if (pos == "night" && s.is_night) return s.id;
        if (!s.is_night && pos == std::to_string(s.seq_in_day + 1)) return s.id;
      }
    }
  }
  throw Error(ErrorCode::kUnknownReference, "unknown slot reference '" + std::string(ref) + "'");
}

TimeGrid build_grid(const ExamPeriodConfig& config) { return TimeGrid(config); }

PatternSets pattern_sets(const TimeGrid& grid) {
  PatternSets out;
  const auto& slots = grid.slots();
  const int n = grid.size();
  for (int t = 0; t + 1 < n; ++t) {
    const auto& a = slots[static_cast<std::size_t>(t)];
    const auto& b = slots[static_cast<std::size_t>(t + 1)];
    if (a.day_index == b.day_index) {
      out.b2b_pairs.emplace_back(t, t + 1);
    } else if (a.is_night && b.day_index == a.day_index + 1 && b.seq_in_day == 0) {
      out.pm_to_am_pairs.emplace_back(t, t + 1);
    }
  }
  // Slots are sorted by start and share one length, so the span of a subset
  // is end(last) - start(first).
  auto span_ok = [&](int first, int last, int limit) {
    return slots[static_cast<std::size_t>(last)].end - slots[static_cast<std::size_t>(first)].start <= limit;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n && span_ok(i, k, kFourInWindowMinutes); ++k) {
        if (span_ok(i, k, kThreeInWindowMinutes)) out.windows_3in24.push_back({i, j, k});
        for (int l = k + 1; l < n && span_ok(i, l, kFourInWindowMinutes); ++l)
          out.windows_4in48.push_back({i, j, k, l});
      }
    }
  }
  return out;
}

}  // namespace examsched
