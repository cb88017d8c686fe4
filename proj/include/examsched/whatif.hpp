#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "examsched/portfolio.hpp"

namespace examsched {

enum class WhatIfMethod {
  kTwoPhase,  // the production heuristic
  kExact,     // built-in solve of the full model
  kOracle,    // brute force, tiny instances only
};

WhatIfMethod parse_whatif_method(std::string_view tag);  // "two-phase" | "exact" | "oracle"
const char* to_string(WhatIfMethod method);

// Canonical slot reference: "Mon-2" for daytime slots, "Mon-night".
std::string slot_ref(const TimeGrid& grid, int slot);

struct ResizedInstance {
  Instance instance;
  std::vector<std::string> lost_pins;  // pins whose slot no longer exists
};

// Same students, groups and rules over a period with day_delta more (or
// fewer) days. Slots keep their day and position; constraints on removed
// slots are dropped, and dropped pins are listed. Throws Error(kConfiguration)
// when fewer than one day would remain.
ResizedInstance with_days(const Instance& instance, int day_delta);

struct WhatIfCell {
  bool infeasible = false;
  std::string message;
  Schedule schedule;
  std::optional<InconvenienceReport> report;
};

struct WhatIfTable {
  int base_days = 0;
  std::vector<int> day_counts;  // ascending, base included
  std::vector<std::string> weight_sets;
  std::vector<std::vector<WhatIfCell>> cells;  // [weight set][day column]
};

WhatIfTable whatif_days(const Instance& instance, std::span<const int> day_deltas, const WeightCatalog& catalog,
                        WhatIfMethod method, const TwoPhaseConfig& config);

}  // namespace examsched
