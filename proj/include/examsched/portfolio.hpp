#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "examsched/heuristic.hpp"

namespace examsched {

struct NamedWeights {
  std::string name;
  Weights weights;
  std::string note;
};

using WeightCatalog = std::vector<NamedWeights>;

// Four sets: survey-based, overlap-dominant, student-only, balanced. The
// numbers are defaults chosen here, not survey output.
WeightCatalog default_catalog();

struct PortfolioConfig {
  std::vector<int> k_values{17, 18, 19, 20, 21};
  int max_parallel = 4;
  std::uint64_t seed = 0;
  TwoPhaseConfig run;  // k_fixed and seed are set per run
};

// Parses "17..21", "19" or "17,19,21".
std::vector<int> parse_k_range(std::string_view text);

std::uint64_t run_seed(std::uint64_t portfolio_seed, int weight_index, int k);

struct PortfolioRun {
  int weight_index = 0;
  int k_requested = 0;
  int k_used = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  TwoPhaseResult result;
  std::optional<InconvenienceReport> report;  // re-evaluated under the run's weights
  double wall_seconds = 0.0;
};

struct PortfolioBest {
  int weight_index = 0;
  int run_index = -1;  // -1 when every run of the sweep failed
  Schedule schedule;
  std::optional<InconvenienceReport> report;
  int k_used = 0;
};

struct PortfolioResult {
  WeightCatalog catalog;
  std::vector<int> k_values;
  std::vector<PortfolioRun> runs;  // weight-major, k ascending as given
  std::vector<PortfolioBest> best;
  double wall_seconds = 0.0;
  int max_parallel = 1;
};

// Runs every (weight set, k) pair on at most max_parallel threads. A failing
// run is recorded and the rest continue. on_run_done is called from worker
// threads and must be thread-safe.
PortfolioResult run_portfolio(const Instance& instance, const WeightCatalog& catalog, const PortfolioConfig& config,
                              const std::function<void(const PortfolioRun&)>& on_run_done = {});

}  // namespace examsched
