#include "examsched/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace examsched {

std::vector<int> size_order(const Instance& instance) {
  std::vector<int> order(static_cast<std::size_t>(instance.n_groups()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return instance.group_size(a) > instance.group_size(b); });
  return order;
}

std::vector<int> select_phase1_groups(const Instance& instance, int k) {
  auto order = size_order(instance);
  k = std::clamp(k, 0, instance.n_groups());
  std::vector<int> out(order.begin(), order.begin() + k);
  for (int g = 0; g < instance.n_groups(); ++g)
    if (instance.pinned_slot(g) && std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

void validate_config(const TwoPhaseConfig& c) {
  if (c.k_fixed < 0) throw Error(ErrorCode::kConfiguration, "k must be non-negative");
  if (c.phase1_initial_limit <= 0 || c.phase1_extension < 0 || c.phase1_hard_cap <= 0 || c.phase2_limit <= 0)
    throw Error(ErrorCode::kConfiguration, "time limits must be positive");
  if (c.phase1_work_limit < 0 || c.phase2_work_limit < 0)
    throw Error(ErrorCode::kConfiguration, "work limits must be non-negative");
  if (c.backend != "builtin" && c.backend != "external")
    throw Error(ErrorCode::kConfiguration, "unknown backend '" + c.backend + "'");
}

Schedule greedy_complete(const Instance& instance, const Weights& weights, Schedule partial,
                         std::span<const int> order) {
  for (int g : order) {
    if (partial[g] >= 0) continue;
    int best = -1;
    std::size_t best_hard = 0;
    double best_obj = 0.0;
    auto candidates = instance.allowed_slots(g);
    if (candidates.empty()) {  // every slot breaks a rule; take the least bad
      candidates.resize(static_cast<std::size_t>(instance.n_slots()));
      std::iota(candidates.begin(), candidates.end(), 0);
    }
    for (int t : candidates) {
      partial[g] = t;
      auto r = evaluate_partial(instance, partial, weights);
      if (best < 0 || r.hard_violations.size() < best_hard ||
          (r.hard_violations.size() == best_hard && r.weighted_objective < best_obj)) {
        best = t;
        best_hard = r.hard_violations.size();
        best_obj = r.weighted_objective;
      }
    }
    partial[g] = best;
  }
  return partial;
}

Schedule meeting_time_greedy(const Instance& instance, const Weights& weights) {
  std::vector<int> order(static_cast<std::size_t>(instance.n_groups()));
  std::iota(order.begin(), order.end(), 0);
  return greedy_complete(instance, weights, Schedule::unassigned(instance.n_groups()), order);
}

TwoPhaseResult run_two_phase(const Instance& instance, const Weights& weights, const TwoPhaseConfig& config) {
  validate_config(config);
  TwoPhaseResult out;
  const int G = instance.n_groups();
  out.phase1_groups = select_phase1_groups(instance, config.k_fixed);

  SolveLimits l1;
  l1.time_limit = config.phase1_initial_limit;
  l1.extension = config.phase1_extension;
  l1.hard_time_cap = config.phase1_hard_cap;
  l1.work_limit = config.phase1_work_limit;
  l1.seed = config.seed;
  try {
    MilpModel m1 = build_phase1_model(instance, weights, out.phase1_groups);
    out.phase1 = solve_model(m1, l1, config.backend);
    if (out.phase1.has_solution()) out.phase1_schedule = schedule_from_values(m1, out.phase1.values, G);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBuild) throw;
    out.infeasible = true;  // contradictory pins and blocks
    out.message = e.what();
    return out;
  }
  if (out.phase1.status == SolveStatus::kInfeasible) {
    out.infeasible = true;
    out.message = "phase 1 is infeasible; the pins and blocks cannot all hold";
    return out;
  }
  if (!out.phase1.has_solution()) {
    out.infeasible = true;
    out.message = out.phase1.status == SolveStatus::kError ? "phase 1 failed: " + out.phase1.message
                                                           : "phase 1 found no schedule within its limits";
    return out;
  }

  FixSet fixes;
  for (int g : out.phase1_groups) fixes.pins.emplace_back(g, out.phase1_schedule[g]);
  SolveLimits l2;
  l2.time_limit = config.phase2_limit;
  l2.work_limit = config.phase2_work_limit;
  l2.seed = config.seed ^ 0x9e3779b97f4a7c15ULL;
  {
    MilpModel m2 = build_full_model(instance, weights, &fixes);
    out.model_vars = m2.n_vars();
    out.model_rows = m2.n_rows();
    out.phase2 = solve_model(m2, l2, config.backend);
    if (out.phase2.has_solution()) out.schedule = schedule_from_values(m2, out.phase2.values, G);
  }
  out.phase2_bound = out.phase2.bound;

  if (!out.phase2.has_solution()) {
    out.degraded = true;
    out.schedule = greedy_complete(instance, weights, out.phase1_schedule, size_order(instance));
    out.message = std::string("phase 2 ended ") + to_string(out.phase2.status) +
                  " without a schedule; remaining groups placed greedily";
  }
  auto report = evaluate_schedule(instance, out.schedule, weights);
  if (!report.hard_feasible()) {
    out.infeasible = true;
    out.message += out.message.empty() ? "" : "; ";
    out.message += "no hard-feasible schedule: " + report.hard_violations.front().message;
    out.schedule = Schedule();
    return out;
  }
  out.objective = report.weighted_objective;
  if (out.phase2_bound) out.gap = (*out.objective - *out.phase2_bound) / std::max(1.0, std::abs(*out.objective));
  return out;
}

}  // namespace examsched
