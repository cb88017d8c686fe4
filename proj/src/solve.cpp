#include "examsched/solve.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

#include "examsched/propagation.hpp"
#include "examsched/text.hpp"

namespace examsched {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasibleLimit: return "feasible-limit";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kError: return "error";
  }
  return "error";
}

namespace {

using Clock = std::chrono::steady_clock;

int x_group_count(const MilpModel& model) {
  int n = 0;
  for (int j = 0; j < model.n_vars(); ++j)
    if (model.var_family(j) == VarFamily::kX) n = std::max(n, model.var_index(j)[0] + 1);
  return n;
}

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveLimits& limits, PropagationEngine& engine)
      : model_(model), limits_(limits), eng_(engine), rng_(limits.seed) {
    start_ = Clock::now();
    deadline_ = limits.time_limit;
    if (limits.hard_time_cap > 0) deadline_ = std::min(deadline_, limits.hard_time_cap);
  }

  SolveOutcome run() {
    SolveOutcome out;
    std::vector<int> free_blocks;
    for (int b = 0; b < eng_.n_blocks(); ++b) {
      if (eng_.allowed(b).size() == 1) eng_.assign(b, eng_.allowed(b)[0]);
      else free_blocks.push_back(b);
    }
    std::stable_sort(free_blocks.begin(), free_blocks.end(),
                     [&](int a, int b) { return eng_.block_priority(a) > eng_.block_priority(b); });
    order_ = free_blocks;
    if (eng_.root_infeasible() || eng_.dead() > 0) {
      out.status = SolveStatus::kInfeasible;
      return finish(out);
    }
    bool exhausted = search();
    if (best_values_.empty()) {
      out.status = exhausted ? SolveStatus::kInfeasible : SolveStatus::kFeasibleLimit;
      if (!exhausted) out.bound = open_bound_;
      return finish(out);
    }
    out.values = best_values_;
    out.objective = best_;
    out.bound = exhausted ? std::min(best_, pruned_min_) : std::min({best_, open_bound_, pruned_min_});
    out.status = exhausted ? SolveStatus::kOptimal : SolveStatus::kFeasibleLimit;
    return finish(out);
  }

 private:
  struct Level {
    int block;
    std::vector<std::pair<double, int>> cands;
    std::size_t next = 0;
  };

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  bool out_of_budget() {
    if (limits_.work_limit > 0 && eng_.work() >= limits_.work_limit) return true;
    if ((++ticks_ & 15) == 0 || limits_.work_limit == 0) return elapsed() >= deadline_;
    return false;
  }

  double cutoff() const {
    if (best_values_.empty()) return std::numeric_limits<double>::infinity();
    return best_ - std::max(limits_.gap_tolerance * std::max(1.0, std::abs(best_)), 1e-9);
  }

  Level expand(int b) {
    Level lv{b, {}, 0};
    for (int j : eng_.allowed(b)) {
      eng_.assign(b, j);
      if (eng_.dead() == 0) lv.cands.emplace_back(eng_.objective(), j);
    }
    eng_.assign(b, -1);
    std::sort(lv.cands.begin(), lv.cands.end());
    return lv;
  }

  // Returns true when the tree was exhausted.
  bool search() {
    if (order_.empty()) {
      record(eng_.objective());
      return true;
    }
    std::vector<Level> stack;
    stack.push_back(expand(order_[0]));
    while (!stack.empty()) {
      if (out_of_budget()) {
        open_bound_ = std::numeric_limits<double>::infinity();
        for (const auto& lv : stack)
          if (lv.next < lv.cands.size()) open_bound_ = std::min(open_bound_, lv.cands[lv.next].first);
        return false;
      }
      Level& top = stack.back();
      if (top.next < top.cands.size() && top.cands[top.next].first >= cutoff()) {
        pruned_min_ = std::min(pruned_min_, top.cands[top.next].first);
        top.next = top.cands.size();
      }
      if (top.next >= top.cands.size()) {
        eng_.assign(top.block, -1);
        stack.pop_back();
        continue;
      }
      eng_.assign(top.block, top.cands[top.next++].second);
      if (stack.size() == order_.size()) {
        record(eng_.objective());
        if (limits_.local_search) polish();
      } else {
        stack.push_back(expand(order_[stack.size()]));
      }
    }
    return true;
  }

  void record(double objective) {
    if (!best_values_.empty() && objective >= best_ - 1e-9) return;
    best_ = objective;
    best_values_ = eng_.values();
    double t = elapsed();
    log_.push_back({t, eng_.work(), objective});
    if (limits_.extension > 0) {
      deadline_ = std::max(deadline_, t + limits_.extension);
      if (limits_.hard_time_cap > 0) deadline_ = std::min(deadline_, limits_.hard_time_cap);
    }
    if (limits_.incumbent_callback) limits_.incumbent_callback(t, objective);
  }

  // Block moves and pairwise swaps from the current leaf, then back to it.
  void polish() {
    std::vector<std::pair<int, int>> trail;
    std::vector<int> blocks = order_;
    std::shuffle(blocks.begin(), blocks.end(), rng_);
    auto position = [&](int b, int j) {
      auto vars = eng_.block_vars(b);
      return static_cast<int>(std::find(vars.begin(), vars.end(), j) - vars.begin());
    };
    auto allowed = [&](int b, int j) {
      const auto& a = eng_.allowed(b);
      return std::find(a.begin(), a.end(), j) != a.end();
    };
    double cur = eng_.objective();
    bool improved = true;
    while (improved && !out_of_budget()) {
      improved = false;
      for (int b : blocks) {
        const int old = eng_.chosen(b);
        int best_j = -1;
        double best_v = cur - 1e-9;
        for (int j : eng_.allowed(b)) {
          if (j == old) continue;
          eng_.assign(b, j);
          if (eng_.dead() == 0 && eng_.objective() < best_v) {
            best_v = eng_.objective();
            best_j = j;
          }
        }
        eng_.assign(b, best_j >= 0 ? best_j : old);
        if (best_j >= 0) {
          trail.emplace_back(b, old);
          cur = eng_.objective();
          improved = true;
        }
      }
      if (improved || out_of_budget()) continue;
      for (std::size_t p = 0; p < blocks.size() && !improved; ++p)
        for (std::size_t q = p + 1; q < blocks.size() && !improved; ++q) {
          int a = blocks[p], b = blocks[q];
          int ja = eng_.chosen(a), jb = eng_.chosen(b);
          int pa = position(a, ja), pb = position(b, jb);
          if (pa == pb) continue;
          auto va = eng_.block_vars(a), vb = eng_.block_vars(b);
          if (pb >= static_cast<int>(va.size()) || pa >= static_cast<int>(vb.size())) continue;
          int na = va[static_cast<std::size_t>(pb)], nb = vb[static_cast<std::size_t>(pa)];
          if (!allowed(a, na) || !allowed(b, nb)) continue;
          eng_.assign(a, na);
          eng_.assign(b, nb);
          if (eng_.dead() == 0 && eng_.objective() < cur - 1e-9) {
            trail.emplace_back(a, ja);
            trail.emplace_back(b, jb);
            cur = eng_.objective();
            improved = true;
          } else {
            eng_.assign(a, ja);
            eng_.assign(b, jb);
          }
        }
    }
    if (!trail.empty()) record(cur);
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) eng_.assign(it->first, it->second);
  }

  SolveOutcome& finish(SolveOutcome& out) {
    out.runtime = elapsed();
    out.work = eng_.work();
    out.incumbent_log = log_;
    return out;
  }

  const MilpModel& model_;
  const SolveLimits& limits_;
  PropagationEngine& eng_;
  std::mt19937_64 rng_;
  Clock::time_point start_;
  double deadline_ = 0.0;
  unsigned ticks_ = 0;
  std::vector<int> order_;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_values_;
  double pruned_min_ = std::numeric_limits<double>::infinity();
  double open_bound_ = std::numeric_limits<double>::infinity();
  std::vector<IncumbentPoint> log_;
};

SolveOutcome solve_builtin(const MilpModel& model, const SolveLimits& limits) {
  auto start = Clock::now();
  std::optional<PropagationEngine> engine;
  try {
    engine.emplace(model);
  } catch (const Error& e) {
    SolveOutcome out;
    out.status = SolveStatus::kError;
    out.message = std::string(to_string(e.code())) + ": " + e.what();
    out.runtime = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }
  BranchAndBound bnb(model, limits, *engine);
  SolveOutcome out = bnb.run();
  out.runtime = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

SolveOutcome solve_external(const MilpModel& model, const SolveLimits& limits) {
  SolveOutcome out;
  auto start = Clock::now();
  auto done = [&]() -> SolveOutcome& {
    out.runtime = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  };
  const char* program = std::getenv(kBackendEnv);
  if (!program || !*program)
    throw Error(ErrorCode::kBackendUnavailable, std::string(kBackendEnv) + " is not set");
  static std::atomic<int> counter{0};
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() /
                 ("examsched-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::create_directories(dir);
  const fs::path mps = dir / "model.mps", sol = dir / "solution.txt";
  text::write_file(mps.string(), export_model(model, ExportFormat::kMps));
  std::ostringstream cmd;
  cmd << shell_quote(program) << " " << shell_quote(mps.string()) << " " << shell_quote(sol.string())
      << " --time-limit " << limits.time_limit;
  int rc = std::system(cmd.str().c_str());
  std::string content;
  if (rc == 0 && fs::exists(sol)) content = text::read_file(sol.string());
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (rc != 0 || content.empty())
    throw Error(ErrorCode::kBackendUnavailable, "backend exited with status " + std::to_string(rc));

  std::unordered_map<std::string, int> by_name;
  for (int j = 0; j < model.n_vars(); ++j) by_name.emplace(model.var_name(j), j);
  std::vector<double> values(static_cast<std::size_t>(model.n_vars()), 0.0);
  std::string status;
  bool any_value = false;
  std::istringstream in(content);
  std::string key, value;
  while (in >> key >> value) {
    if (key == "status") status = value;
    else if (key == "objective") out.objective = std::stod(value);
    else if (key == "bound") out.bound = std::stod(value);
    else if (auto it = by_name.find(key); it != by_name.end()) {
      values[static_cast<std::size_t>(it->second)] = std::stod(value);
      any_value = true;
    }
  }
  if (status == "infeasible") {
    out.status = SolveStatus::kInfeasible;
    out.objective.reset();
    return done();
  }
  if (status != "optimal" && status != "feasible-limit" && status != "feasible") {
    out.message = "backend reported status '" + status + "'";
    out.objective.reset();
    return done();
  }
  if (!any_value || model.max_violation(values) > 1e-6) {
    out.objective.reset();
    out.status = any_value ? SolveStatus::kError : SolveStatus::kFeasibleLimit;
    if (any_value) out.message = "backend solution violates the model";
    return done();
  }
  out.status = status == "optimal" ? SolveStatus::kOptimal : SolveStatus::kFeasibleLimit;
  out.objective = model.objective_value(values);
  out.values = std::move(values);
  out.incumbent_log.push_back({0.0, 0, *out.objective});
  if (limits.incumbent_callback) limits.incumbent_callback(0.0, *out.objective);
  return done();
}

}  // namespace

SolveOutcome solve_model(const MilpModel& model, const SolveLimits& limits, const std::string& backend) {
  if (limits.time_limit <= 0 || limits.gap_tolerance < 0)
    throw Error(ErrorCode::kConfiguration, "time limit must be positive and gap tolerance non-negative");
  SolveOutcome out;
  if (backend == "builtin") out = solve_builtin(model, limits);
  else if (backend == "external") out = solve_external(model, limits);
  else throw Error(ErrorCode::kConfiguration, "unknown backend '" + backend + "'");
  if (!out.values.empty()) out.assignment = schedule_from_values(model, out.values, x_group_count(model));
  return out;
}

std::string format_solution(const MilpModel& model, const SolveOutcome& outcome) {
  std::ostringstream out;
  out.precision(17);
  out << "status " << to_string(outcome.status) << "\n";
  if (outcome.objective) out << "objective " << *outcome.objective << "\n";
  if (outcome.bound) out << "bound " << *outcome.bound << "\n";
  for (std::size_t j = 0; j < outcome.values.size(); ++j)
    if (outcome.values[j] != 0.0) out << model.var_name(static_cast<int>(j)) << " " << outcome.values[j] << "\n";
  return out.str();
}

BruteForceResult brute_force_optimal(const Instance& instance, const Weights& weights, long long budget) {
  const int G = instance.n_groups();
  std::vector<std::vector<int>> options(static_cast<std::size_t>(G));
  long long space = 1;
  for (int g = 0; g < G; ++g) {
    options[static_cast<std::size_t>(g)] = instance.allowed_slots(g);
    auto n = static_cast<long long>(options[static_cast<std::size_t>(g)].size());
    if (n == 0) return {};
    if (space > budget / n) throw Error(ErrorCode::kSearchBudget, "brute-force search space exceeds the budget");
    space *= n;
  }
  BruteForceResult result;
  std::vector<std::size_t> digit(static_cast<std::size_t>(G), 0);
  Schedule s = Schedule::unassigned(G);
  while (true) {
    for (int g = 0; g < G; ++g) s[g] = options[static_cast<std::size_t>(g)][digit[static_cast<std::size_t>(g)]];
    ++result.enumerated;
    auto report = evaluate_schedule(instance, s, weights);
    if (report.hard_feasible() && (!result.schedule || report.weighted_objective < result.objective)) {
      result.schedule = s;
      result.objective = report.weighted_objective;
    }
    int g = G - 1;
    while (g >= 0 && ++digit[static_cast<std::size_t>(g)] == options[static_cast<std::size_t>(g)].size()) {
      digit[static_cast<std::size_t>(g)] = 0;
      --g;
    }
    if (g < 0) break;
  }
  return result;
}

}  // namespace examsched
