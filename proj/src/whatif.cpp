#include "examsched/whatif.hpp"

#include <algorithm>

namespace examsched {

WhatIfMethod parse_whatif_method(std::string_view tag) {
  if (tag == "two-phase") return WhatIfMethod::kTwoPhase;
  if (tag == "exact") return WhatIfMethod::kExact;
  if (tag == "oracle") return WhatIfMethod::kOracle;
  throw Error(ErrorCode::kConfiguration, "unknown what-if method '" + std::string(tag) + "'");
}

const char* to_string(WhatIfMethod method) {
  switch (method) {
    case WhatIfMethod::kTwoPhase: return "two-phase";
    case WhatIfMethod::kExact: return "exact";
    case WhatIfMethod::kOracle: return "oracle";
  }
  return "";
}

std::string slot_ref(const TimeGrid& grid, int slot) {
  const auto& s = grid.slot(slot);
  const auto& day = grid.config().days[static_cast<std::size_t>(s.day_index)].label;
  return day + "-" + (s.is_night ? std::string("night") : std::to_string(s.seq_in_day + 1));
}

ResizedInstance with_days(const Instance& instance, int day_delta) {
  const int days = instance.grid.day_count() + day_delta;
  if (days < 1) throw Error(ErrorCode::kConfiguration, "the exam period needs at least one day");
  ResizedInstance out{instance, {}};
  Instance& inst = out.instance;
  inst.grid = build_grid(with_day_count(instance.grid.config(), days));
  const int T = inst.n_slots(), G = inst.n_groups();

  // old slot -> new slot by (day, position)
  std::vector<int> map(static_cast<std::size_t>(instance.n_slots()), -1);
  for (const auto& s : instance.grid.slots())
    if (auto t = inst.grid.find(s.day_index, s.seq_in_day)) map[static_cast<std::size_t>(s.id)] = *t;

  inst.available = SlotFlags::Constant(T, true);
  inst.required = GroupSlotFlags::Constant(G, T, false);
  inst.forbidden = GroupSlotFlags::Constant(G, T, false);
  ConstraintSet cs;
  cs.capacity = instance.constraints.capacity;
  for (int t = 0; t < instance.n_slots(); ++t) {
    int u = map[static_cast<std::size_t>(t)];
    if (!instance.available(t) && u >= 0) {
      inst.available(u) = false;
      cs.rows.push_back({"*", slot_ref(inst.grid, u), ConstraintAction::kUnavailable});
    }
  }
  for (int g = 0; g < G; ++g) {
    const auto& label = inst.groups[static_cast<std::size_t>(g)].label;
    for (int t = 0; t < instance.n_slots(); ++t) {
      int u = map[static_cast<std::size_t>(t)];
      if (instance.required(g, t)) {
        if (u < 0) {
          out.lost_pins.push_back(label + " in " + instance.grid.label(t));
        } else {
          inst.required(g, u) = true;
          cs.rows.push_back({label, slot_ref(inst.grid, u), ConstraintAction::kRequire});
        }
      }
      if (instance.forbidden(g, t) && u >= 0) {
        inst.forbidden(g, u) = true;
        cs.rows.push_back({label, slot_ref(inst.grid, u), ConstraintAction::kForbid});
      }
    }
  }
  inst.constraints = std::move(cs);
  refresh_derived(inst);
  return out;
}

namespace {

WhatIfCell solve_cell(const ResizedInstance& ri, const Weights& weights, WhatIfMethod method,
                      const TwoPhaseConfig& config) {
  WhatIfCell cell;
  if (!ri.lost_pins.empty()) {
    cell.infeasible = true;
    cell.message = "pinned slot removed: " + ri.lost_pins.front();
    return cell;
  }
  const Instance& inst = ri.instance;
  try {
    switch (method) {
      case WhatIfMethod::kTwoPhase: {
        auto r = run_two_phase(inst, weights, config);
        if (r.infeasible) {
          cell.infeasible = true;
          cell.message = r.message;
          return cell;
        }
        cell.schedule = r.schedule;
        break;
      }
      case WhatIfMethod::kExact: {
        SolveLimits limits;
        limits.time_limit = config.phase2_limit;
        limits.work_limit = config.phase2_work_limit;
        limits.seed = config.seed;
        MilpModel m = build_full_model(inst, weights);
        auto o = solve_model(m, limits, config.backend);
        if (!o.has_solution()) {
          cell.infeasible = true;
          cell.message = std::string("solve ended ") + to_string(o.status);
          return cell;
        }
        if (o.status != SolveStatus::kOptimal) cell.message = "time limit reached; best schedule found";
        cell.schedule = schedule_from_values(m, o.values, inst.n_groups());
        break;
      }
      case WhatIfMethod::kOracle: {
        auto r = brute_force_optimal(inst, weights);
        if (!r.schedule) {
          cell.infeasible = true;
          cell.message = "no schedule satisfies the hard rules";
          return cell;
        }
        cell.schedule = *r.schedule;
        break;
      }
    }
  } catch (const Error& e) {
    cell.infeasible = true;
    cell.message = std::string(to_string(e.code())) + ": " + e.what();
    return cell;
  }
  cell.report = evaluate_schedule(inst, cell.schedule, weights);
  return cell;
}

}  // namespace

WhatIfTable whatif_days(const Instance& instance, std::span<const int> day_deltas, const WeightCatalog& catalog,
                        WhatIfMethod method, const TwoPhaseConfig& config) {
  WhatIfTable table;
  table.base_days = instance.grid.day_count();
  std::vector<int> deltas{0};
  for (int d : day_deltas) {
    if (table.base_days + d < 1) throw Error(ErrorCode::kConfiguration, "the exam period needs at least one day");
    deltas.push_back(d);
  }
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  std::vector<ResizedInstance> variants;
  for (int d : deltas) {
    table.day_counts.push_back(table.base_days + d);
    variants.push_back(with_days(instance, d));
  }
  for (const auto& w : catalog) {
    table.weight_sets.push_back(w.name);
    auto& row = table.cells.emplace_back();
    for (const auto& v : variants) row.push_back(solve_cell(v, w.weights, method, config));
  }
  return table;
}

}  // namespace examsched
