#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "examsched/evaluate.hpp"
#include "examsched/solve.hpp"

namespace examsched {

// Top-k groups by N_g (ties to the lower id) plus every pinned group, sorted
// by id. k is clamped to [0, |G|].
std::vector<int> select_phase1_groups(const Instance& instance, int k);

struct TwoPhaseConfig {
  int k_fixed = 19;
  double phase1_initial_limit = 600.0;
  double phase1_extension = 600.0;
  double phase1_hard_cap = 7200.0;
  double phase2_limit = 4 * 3600.0;
  long long phase1_work_limit = 0;
  long long phase2_work_limit = 0;
  std::uint64_t seed = 0;
  std::string backend = "builtin";
};

void validate_config(const TwoPhaseConfig& config);  // throws Error(kConfiguration)

struct TwoPhaseResult {
  bool infeasible = false;
  bool degraded = false;  // phase 2 gave nothing, greedy completion used
  std::string message;

  std::vector<int> phase1_groups;
  Schedule phase1_schedule;  // -1 outside the phase-1 groups
  Schedule schedule;         // empty when infeasible
  SolveOutcome phase1;
  SolveOutcome phase2;

  std::optional<double> objective;  // evaluate_schedule under the run's weights
  std::optional<double> phase2_bound;
  std::optional<double> gap;  // (objective - bound) / max(1, |objective|)
  long long model_vars = 0;
  long long model_rows = 0;
};

TwoPhaseResult run_two_phase(const Instance& instance, const Weights& weights, const TwoPhaseConfig& config);

// Places every unassigned group, in the given order, in the allowed slot with
// the fewest hard violations and then the least marginal objective (lowest
// slot on ties). Groups already placed are left alone.
Schedule greedy_complete(const Instance& instance, const Weights& weights, Schedule partial,
                         std::span<const int> order);

// Largest groups first.
std::vector<int> size_order(const Instance& instance);

// Baseline: greedy placement in grouping order, i.e. meeting-time order.
Schedule meeting_time_greedy(const Instance& instance, const Weights& weights);

}  // namespace examsched
