#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "examsched/evaluate.hpp"

namespace examsched::oracle {

// Random instances small enough for exhaustive search: at most 6 groups,
// 5 slots, 12 students and 2 faculty.
struct TinyLimits {
  int max_groups = 6;
  int max_slots = 5;
  int max_students = 12;
  int max_faculty = 2;
  double pin_rate = 0.2;
  double block_rate = 0.3;
  double unavailable_rate = 0.1;
  double capacity_rate = 0.2;
};

ExamPeriodConfig random_period(std::mt19937_64& rng, int max_slots);
Instance random_tiny_instance(std::mt19937_64& rng, const TinyLimits& limits = {});
Weights random_weights(std::mt19937_64& rng);  // small integers, so sums are exact
// Any slot per group when respect_rules is false.
Schedule random_schedule(const Instance& inst, std::mt19937_64& rng, bool respect_rules);

// Evaluation written from the definitions (clock times and slot days),
// sharing nothing with the library's pattern sets or matrix products.
struct NaiveReport {
  std::array<long long, kMetricCount> heads{};
  long long overlap_occurrences = 0;
  long long b2b_occurrences = 0;
  long long pm_to_am_occurrences = 0;
  bool hard_feasible = true;
  double objective = 0.0;
};

NaiveReport naive_evaluate(const Instance& inst, const Schedule& schedule, const Weights& w);

// Brute-force span filters over slot clock times.
std::vector<std::array<int, 3>> naive_windows3(const TimeGrid& grid);
std::vector<std::array<int, 4>> naive_windows4(const TimeGrid& grid);
std::vector<std::pair<int, int>> naive_b2b(const TimeGrid& grid);
std::vector<std::pair<int, int>> naive_pm_to_am(const TimeGrid& grid);

// Exhaustive optimum via naive_evaluate; -1 objective when infeasible.
struct NaiveOptimum {
  bool feasible = false;
  double objective = 0.0;
};
NaiveOptimum naive_optimum(const Instance& inst, const Weights& w);

std::string fixture_dir(const std::string& name);
Instance load_fixture(const std::string& name);

}  // namespace examsched::oracle
