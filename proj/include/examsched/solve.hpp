#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "examsched/evaluate.hpp"
#include "examsched/model.hpp"

namespace examsched {

struct SolveLimits {
  double time_limit = 600.0;  // seconds
  // When > 0, every new incumbent moves the deadline to at least
  // incumbent time + extension, but never past hard_time_cap.
  double extension = 0.0;
  double hard_time_cap = 0.0;
  double gap_tolerance = 0.0;
  // Deterministic budget in propagation work units; 0 means none.
  long long work_limit = 0;
  std::uint64_t seed = 0;
  bool local_search = true;
  // Called once per strictly improving incumbent, on the solving thread.
  std::function<void(double seconds, double objective)> incumbent_callback;
};

enum class SolveStatus { kOptimal, kFeasibleLimit, kInfeasible, kError };

const char* to_string(SolveStatus status);

struct IncumbentPoint {
  double seconds = 0.0;
  long long work = 0;
  double objective = 0.0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::kError;
  std::vector<double> values;  // empty without an incumbent
  Schedule assignment;         // from the x variables; empty without an incumbent
  std::optional<double> objective;
  std::optional<double> bound;
  double runtime = 0.0;
  long long work = 0;
  std::vector<IncumbentPoint> incumbent_log;
  std::string message;

  bool has_solution() const { return objective.has_value(); }
};

// Backends: "builtin" (propagation branch-and-bound) or "external". The
// external backend runs the program named by EXAMSCHED_BACKEND as
//   <program> <model.mps> <solution.txt> --time-limit <seconds>
// and reads "status <word>", optional "objective <v>" / "bound <v>" lines and
// then "<variable> <value>" lines from the solution file. A missing program or
// a failed run throws Error(kBackendUnavailable).
SolveOutcome solve_model(const MilpModel& model, const SolveLimits& limits, const std::string& backend = "builtin");

inline constexpr const char* kBackendEnv = "EXAMSCHED_BACKEND";

// Solution file in the external backend format.
std::string format_solution(const MilpModel& model, const SolveOutcome& outcome);

struct BruteForceResult {
  std::optional<Schedule> schedule;  // empty when no hard-feasible schedule exists
  double objective = 0.0;
  long long enumerated = 0;
};

inline constexpr long long kBruteForceBudget = 10'000'000;

// Exhaustive search over allowed slots per group, scored by
// evaluate_schedule. Ties keep the lexicographically first schedule.
// Throws Error(kSearchBudget) when the search space exceeds the budget.
BruteForceResult brute_force_optimal(const Instance& instance, const Weights& weights,
                                     long long budget = kBruteForceBudget);

}  // namespace examsched
