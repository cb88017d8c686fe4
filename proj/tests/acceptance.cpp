// Acceptance run: one PASS/FAIL line per primary criterion. Tolerances and
// budgets are fixed here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>

#include "examsched/documents.hpp"
#include "examsched/synthetic.hpp"
#include "support/oracle.hpp"

using namespace examsched;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kOracleInstances = 120;
constexpr int kConsistencyPairs = 1200;
constexpr int kTwoPhaseInstances = 80;
constexpr int kWhatIfInstances = 60;
constexpr long long kScaleVarsLow = 150'000;  // 300k..400k, +-50%
constexpr long long kScaleVarsHigh = 600'000;
constexpr double kScaleBudgetSeconds = 1800.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Every schedule handed back by the library during this run is checked
// against the blocks of its instance.
struct BlockAudit {
  long long schedules = 0;
  long long blocked_placements = 0;

  void check(const Instance& inst, const Schedule& s) {
    if (s.size() == 0) return;
    ++schedules;
    for (int g = 0; g < s.size(); ++g)
      if (s[g] >= 0 && inst.forbidden(g, s[g])) ++blocked_placements;
  }
} audit;

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome oracle_optimality() {
  std::mt19937_64 rng(2024);
  int feasible = 0, mismatches = 0;
  for (int i = 0; i < kOracleInstances; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    auto naive = oracle::naive_optimum(inst, w);
    auto brute = brute_force_optimal(inst, w);
    SolveLimits lim;
    lim.time_limit = 60;
    auto out = solve_model(build_full_model(inst, w), lim);
    if (!out.assignment.slot_of_group.empty()) audit.check(inst, out.assignment);
    bool ok;
    if (!naive.feasible) {
      ok = out.status == SolveStatus::kInfeasible && !brute.schedule;
    } else {
      ++feasible;
      ok = out.status == SolveStatus::kOptimal && out.objective && *out.objective == naive.objective &&
           brute.schedule && brute.objective == naive.objective;
    }
    if (!ok) ++mismatches;
  }
  return {mismatches == 0, fmt("%.0f instances (%.0f feasible), %.0f mismatches", kOracleInstances, feasible, mismatches)};
}

// Pairs are drawn until kConsistencyPairs hard-feasible ones are collected:
// a schedule with three exams in one slot for a student has no binary image
// in the model (z^overlap <= 1). Every drawn pair still goes through the
// naive evaluator.
Outcome evaluator_consistency() {
  std::mt19937_64 rng(77);
  int pairs = 0, drawn = 0, mismatches = 0, with_b2b = 0, with_pm = 0, with_windows = 0, with_faculty = 0;
  while (pairs < kConsistencyPairs) {
    ++drawn;
    Instance inst = oracle::random_tiny_instance(rng, {6, 5, 12, 2, 0.1, 0.1, 0.0, 0.0});
    Weights w = oracle::random_weights(rng);
    Schedule s = oracle::random_schedule(inst, rng, true);
    auto r = evaluate_schedule(inst, s, w);
    auto naive = oracle::naive_evaluate(inst, s, w);
    if (naive.objective != r.weighted_objective || naive.hard_feasible != r.hard_feasible()) ++mismatches;
    if (!r.hard_feasible()) continue;
    ++pairs;
    MilpModel m = build_full_model(inst, w);
    auto values = induced_assignment(m, s);
    if (m.objective_value(values) != r.weighted_objective || m.max_violation(values) != 0.0) ++mismatches;
    with_b2b += r.b2b_occurrences > r.head_count(Metric::kStudentB2B);
    with_pm += r.pm_to_am_occurrences > 0;
    with_windows += r.head_count(Metric::kStudentThreeIn24) > 0;
    with_faculty += r.head_count(Metric::kFacultyOverlap) + r.head_count(Metric::kFacultyB2B) > 0;
  }
  std::ostringstream d;
  d << pairs << " feasible pairs (" << drawn << " drawn), " << mismatches << " mismatches; coverage: repeat b2b "
    << with_b2b << ", pm-to-am " << with_pm << ", 3-in-24 " << with_windows << ", faculty " << with_faculty;
  bool covered = with_b2b > 0 && with_pm > 0 && with_windows > 0 && with_faculty > 0;
  return {mismatches == 0 && covered, d.str()};
}

Outcome grid_structure() {
  TimeGrid grid(default_period_config());
  PatternSets p = pattern_sets(grid);
  bool ok = grid.size() == 22 && p.b2b_pairs.size() == 16 && p.pm_to_am_pairs.size() == 4;
  ok = ok && p.b2b_pairs == oracle::naive_b2b(grid) && p.pm_to_am_pairs == oracle::naive_pm_to_am(grid);
  ok = ok && p.windows_3in24 == oracle::naive_windows3(grid) && p.windows_4in48 == oracle::naive_windows4(grid);
  std::ostringstream d;
  d << grid.size() << " slots, " << p.b2b_pairs.size() << " b2b pairs, " << p.pm_to_am_pairs.size() << " pm-to-am pairs, "
    << p.windows_3in24.size() << " 3-in-24 and " << p.windows_4in48.size() << " 4-in-48 windows";
  return {ok, d.str()};
}

TwoPhaseConfig tiny_run(int k) {
  TwoPhaseConfig c;
  c.k_fixed = k;
  c.phase1_initial_limit = 30;
  c.phase1_extension = 30;
  c.phase1_hard_cap = 60;
  c.phase2_limit = 60;
  return c;
}

Outcome two_phase_soundness() {
  std::mt19937_64 rng(31337);
  int checked = 0, failures = 0, full_k_checked = 0;
  for (int i = 0; i < kTwoPhaseInstances; ++i) {
    Instance inst = oracle::random_tiny_instance(rng);
    Weights w = oracle::random_weights(rng);
    auto opt = oracle::naive_optimum(inst, w);
    if (!opt.feasible) continue;
    for (int k : {1 + i % inst.n_groups(), inst.n_groups()}) {
      ++checked;
      auto r = run_two_phase(inst, w, tiny_run(k));
      audit.check(inst, r.schedule);
      if (r.infeasible || !r.objective || !r.gap) {
        ++failures;
        continue;
      }
      auto rep = oracle::naive_evaluate(inst, r.schedule, w);
      bool ok = rep.hard_feasible && rep.objective == *r.objective && rep.objective >= opt.objective && *r.gap >= 0;
      for (int g : r.phase1_groups) ok = ok && r.schedule[g] == r.phase1_schedule[g];
      if (k == inst.n_groups()) {
        ++full_k_checked;
        ok = ok && *r.objective == oracle::naive_evaluate(inst, r.phase1_schedule, w).objective;
      }
      if (!ok) ++failures;
    }
  }
  return {failures == 0 && checked > 0,
          fmt("%.0f runs (%.0f with k = |G|), %.0f failures", checked, full_k_checked, failures)};
}

Outcome portfolio_contract() {
  Instance inst = oracle::load_fixture("tiny");
  PortfolioConfig c;
  c.k_values = parse_k_range("17..21");
  c.seed = 7;
  c.max_parallel = 1;
  c.run = tiny_run(19);
  auto cat = default_catalog();
  auto a = run_portfolio(inst, cat, c);
  auto b = run_portfolio(inst, cat, c);
  bool ok = a.runs.size() == 20 && a.best.size() == 4;
  for (const auto& run : a.runs) audit.check(inst, run.result.schedule);
  for (std::size_t w = 0; ok && w < a.best.size(); ++w) {
    const auto& best = a.best[w];
    if (best.run_index < 0) {
      ok = false;
      break;
    }
    audit.check(inst, best.schedule);
    double mine = oracle::naive_evaluate(inst, best.schedule, cat[w].weights).objective;
    for (const auto& run : a.runs)
      if (run.weight_index == static_cast<int>(w) && !run.failed)
        ok = ok && mine <= oracle::naive_evaluate(inst, run.result.schedule, cat[w].weights).objective;
  }
  bool same = dump(portfolio_manifest(inst, a, c)) == dump(portfolio_manifest(inst, b, c));
  std::ostringstream d;
  d << a.runs.size() << " runs, " << a.best.size() << " reported schedules, serial manifests "
    << (same ? "identical" : "differ");
  return {ok && same, d.str()};
}

Outcome whatif_monotonicity() {
  std::mt19937_64 rng(99);
  oracle::TinyLimits lim;
  lim.max_groups = 5;
  lim.max_slots = 4;
  int compared = 0, violations = 0;
  for (int i = 0; i < kWhatIfInstances; ++i) {
    Instance inst = oracle::random_tiny_instance(rng, lim);
    Weights w = oracle::random_weights(rng);
    auto base = oracle::naive_optimum(inst, w);
    if (!base.feasible) continue;
    ++compared;
    auto plus = oracle::naive_optimum(with_days(inst, 1).instance, w);
    if (!plus.feasible || plus.objective > base.objective) ++violations;
  }
  Instance tiny = oracle::load_fixture("tiny");
  std::vector<int> deltas{-1, 1};
  auto table = whatif_days(tiny, deltas, default_catalog(), WhatIfMethod::kExact, tiny_run(19));
  Json doc = whatif_to_json(table);
  bool rows = doc["tables"].size() == 4;
  for (const auto& t : doc["tables"]) rows = rows && t["rows"].size() == kMetricCount;
  for (std::size_t w = 0; w < table.cells.size(); ++w)
    for (std::size_t c = 0; c < table.cells[w].size(); ++c) {
      const auto& cell = table.cells[w][c];
      if (cell.infeasible) continue;
      int delta = table.day_counts[c] - table.base_days;
      audit.check(delta == 0 ? tiny : with_days(tiny, delta).instance, cell.schedule);
    }
  return {violations == 0 && compared > 0 && rows,
          fmt("%.0f instances compared, %.0f violations, table rows per weight set = %.0f", compared, violations,
              rows ? kMetricCount : -1)};
}

// Independent structural check of the MPS text: section order, one ROWS entry
// per row, columns contiguous, entry counts matching the model.
bool mps_is_valid(const std::string& text, const MilpModel& m, std::string& why) {
  std::istringstream in(text);
  std::string line, section, last_col;
  long long rows = 0, cols = 0, entries = 0, bounds = 0;
  std::unordered_set<std::string> row_names, seen_cols;
  std::vector<std::string> order;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (line[0] != ' ') {
      section = tok[0];
      order.push_back(section);
      continue;
    }
    if (section == "ROWS") {
      if (tok.size() != 2) return why = "bad ROWS line", false;
      if (tok[0] != "N") ++rows;
      row_names.insert(tok[1]);
    } else if (section == "COLUMNS") {
      if (tok.size() != 3 && tok.size() != 5) return why = "bad COLUMNS line: " + line, false;
      if (tok[0] != last_col) {
        if (!seen_cols.insert(tok[0]).second) return why = "column " + tok[0] + " not contiguous", false;
        last_col = tok[0];
        ++cols;
      }
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        if (!row_names.count(tok[k])) return why = "unknown row " + tok[k], false;
        char* end = nullptr;
        std::strtod(tok[k + 1].c_str(), &end);
        if (*end) return why = "bad number " + tok[k + 1], false;
        if (tok[k] != "obj") ++entries;
      }
    } else if (section == "RHS") {
      if (tok.size() != 3 || !row_names.count(tok[1])) return why = "bad RHS line", false;
    } else if (section == "BOUNDS") {
      if (tok.size() != 3 || tok[0] != "BV" || !seen_cols.count(tok[2])) return why = "bad BOUNDS line", false;
      ++bounds;
    }
  }
  std::vector<std::string> expected{"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"};
  if (order != expected) return why = "section order", false;
  if (rows != m.n_rows() || cols != m.n_vars() || entries != m.n_nonzeros() || bounds != m.n_vars())
    return why = "counts differ from the model", false;
  return true;
}

Outcome scale_smoke() {
  auto start = Clock::now();
  SyntheticConfig cfg;
  cfg.seed = 1;
  Instance inst = generate_instance(cfg);
  long long vars = 0;
  bool mps_ok = false;
  std::string why;
  {
    MilpModel m = build_full_model(inst, survey_weights());
    vars = m.n_vars();
    mps_ok = mps_is_valid(export_model(m, ExportFormat::kMps), m, why);
  }
  TwoPhaseConfig c;
  c.k_fixed = 19;
  c.seed = 1;
  c.phase1_initial_limit = 60;
  c.phase1_extension = 60;
  c.phase1_hard_cap = 180;
  c.phase2_limit = 420;
  auto r = run_two_phase(inst, survey_weights(), c);
  audit.check(inst, r.schedule);
  Schedule base = meeting_time_greedy(inst, survey_weights());
  audit.check(inst, base);
  double greedy = evaluate_schedule(inst, base, survey_weights()).weighted_objective;
  double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  bool feasible = !r.infeasible && r.objective && evaluate_schedule(inst, r.schedule, survey_weights()).hard_feasible();
  bool ok = vars >= kScaleVarsLow && vars <= kScaleVarsHigh && mps_ok && feasible && *r.objective < greedy &&
            seconds <= kScaleBudgetSeconds;
  std::ostringstream d;
  d << inst.n_students() << " students, " << inst.n_groups() << " groups, " << inst.n_slots() << " slots; " << vars
    << " variables; MPS " << (mps_ok ? "valid" : "invalid (" + why + ")") << "; two-phase "
    << (r.objective ? std::to_string(*r.objective) : std::string("none")) << " vs greedy " << greedy << "; "
    << static_cast<int>(seconds) << " s";
  return {ok, d.str()};
}

Outcome block_semantics() {
  // Dense blocks on top of the schedules audited above.
  std::mt19937_64 rng(4242);
  oracle::TinyLimits lim;
  lim.block_rate = 0.6;
  lim.pin_rate = 0.0;
  for (int i = 0; i < 60; ++i) {
    Instance inst = oracle::random_tiny_instance(rng, lim);
    Weights w = oracle::random_weights(rng);
    SolveLimits sl;
    sl.time_limit = 30;
    auto out = solve_model(build_full_model(inst, w), sl);
    if (!out.assignment.slot_of_group.empty()) audit.check(inst, out.assignment);
    auto bf = brute_force_optimal(inst, w);
    if (bf.schedule) audit.check(inst, *bf.schedule);
    auto r = run_two_phase(inst, w, tiny_run(2));
    audit.check(inst, r.schedule);
  }
  return {audit.blocked_placements == 0 && audit.schedules > 0,
          std::to_string(audit.schedules) + " schedules audited, " + std::to_string(audit.blocked_placements) +
              " blocked placements"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {"oracle-optimality", oracle_optimality},
      {"evaluator-objective-consistency", evaluator_consistency},
      {"grid-structure", grid_structure},
      {"two-phase-soundness", two_phase_soundness},
      {"portfolio-contract", portfolio_contract},
      {"whatif-monotonicity", whatif_monotonicity},
      {"scale-smoke", scale_smoke},
      {"blocked-slot-semantics", block_semantics},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), s);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
