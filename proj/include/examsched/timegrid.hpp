#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace examsched {

// Clock interval within one day, minutes after midnight.
struct ClockInterval {
  int start = 0;
  int end = 0;

  friend bool operator==(const ClockInterval&, const ClockInterval&) = default;
};

struct ExamDay {
  std::string label;
  bool has_night = false;

  friend bool operator==(const ExamDay&, const ExamDay&) = default;
};

// Days are consecutive calendar days; day d starts 24h after day d-1.
struct ExamPeriodConfig {
  std::vector<ExamDay> days;
  std::vector<ClockInterval> daytime_slots;
  ClockInterval night_slot;
  int exam_length_minutes = 180;

  friend bool operator==(const ExamPeriodConfig&, const ExamPeriodConfig&) = default;
};

// Mon..Sat (or any length), three daytime slots, a night slot on every day
// except Friday and the last day.
ExamPeriodConfig default_period_config(int n_days = 6);

// Rebuilds the day list with n_days days, cycling weekday labels from the
// first day's label and re-deriving night placement (no night on Friday or on
// the last day). Slot times are kept.
ExamPeriodConfig with_day_count(const ExamPeriodConfig& config, int n_days);

// Throws Error(kConfiguration) when the config is malformed.
void validate_config(const ExamPeriodConfig& config);

ExamPeriodConfig parse_period_config(std::string_view text);
std::string format_period_config(const ExamPeriodConfig& config);

struct TimeSlot {
  int id = 0;
  int day_index = 0;
  int seq_in_day = 0;
  int start = 0;  // minutes since period start
  int end = 0;
  bool is_night = false;
};

class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(ExamPeriodConfig config);

  const ExamPeriodConfig& config() const { return config_; }
  const std::vector<TimeSlot>& slots() const { return slots_; }
  const TimeSlot& slot(int id) const { return slots_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(slots_.size()); }
  int day_count() const { return static_cast<int>(config_.days.size()); }

  // "Mon 08:00-11:00"
  std::string label(int id) const;

  // Accepts an integer id, "Mon-2" (1-based daytime position) or "Mon-night".
  int resolve(std::string_view ref) const;

  std::optional<int> find(int day_index, int seq_in_day) const;

 private:
  ExamPeriodConfig config_;
  std::vector<TimeSlot> slots_;
};

TimeGrid build_grid(const ExamPeriodConfig& config);

struct PatternSets {
  std::vector<std::pair<int, int>> b2b_pairs;
  std::vector<std::pair<int, int>> pm_to_am_pairs;
  std::vector<std::array<int, 3>> windows_3in24;
  std::vector<std::array<int, 4>> windows_4in48;
};

inline constexpr int kMinutesPerHour = 60;
inline constexpr int kThreeInWindowMinutes = 24 * kMinutesPerHour;
inline constexpr int kFourInWindowMinutes = 48 * kMinutesPerHour;

PatternSets pattern_sets(const TimeGrid& grid);

}  // namespace examsched
