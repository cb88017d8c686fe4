#include "examsched/portfolio.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <thread>

#include "examsched/text.hpp"

namespace examsched {

WeightCatalog default_catalog() {
  return {
      {"survey", survey_weights(), "severity order from the student survey; magnitudes are defaults"},
      {"overlap-dominant", {1000, 5, 4, 10, 8, 50, 2}, "overlaps far above everything else"},
      {"student-only", {100, 10, 8, 30, 20, 0, 0}, "faculty terms switched off"},
      {"balanced", {40, 15, 12, 25, 20, 20, 10}, "flatter weights across all terms"},
  };
}

std::vector<int> parse_k_range(std::string_view s) {
  auto number = [&](std::string_view part) {
    part = text::trim(part);
    int v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || p != part.data() + part.size() || v < 0)
      throw Error(ErrorCode::kConfiguration, "bad k value '" + std::string(part) + "'");
    return v;
  };
  std::vector<int> out;
  if (auto dots = s.find(".."); dots != std::string_view::npos) {
    int lo = number(s.substr(0, dots)), hi = number(s.substr(dots + 2));
    if (hi < lo) throw Error(ErrorCode::kConfiguration, "empty k range");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (const auto& part : text::split(s, ',')) out.push_back(number(part));
  if (out.empty()) throw Error(ErrorCode::kConfiguration, "empty k range");
  return out;
}

std::uint64_t run_seed(std::uint64_t portfolio_seed, int weight_index, int k) {
  // splitmix64 over the three inputs
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(portfolio_seed) ^ static_cast<std::uint64_t>(weight_index)) ^ static_cast<std::uint64_t>(k));
}

PortfolioResult run_portfolio(const Instance& instance, const WeightCatalog& catalog, const PortfolioConfig& config,
                              const std::function<void(const PortfolioRun&)>& on_run_done) {
  if (catalog.empty()) throw Error(ErrorCode::kConfiguration, "weight catalog is empty");
  if (config.k_values.empty()) throw Error(ErrorCode::kConfiguration, "k range is empty");
  if (config.max_parallel < 1) throw Error(ErrorCode::kConfiguration, "max_parallel must be at least 1");
  for (const auto& w : catalog)
    if (!w.weights.non_negative()) throw Error(ErrorCode::kConfiguration, "weight set '" + w.name + "' is negative");
  validate_config(config.run);

  auto start = std::chrono::steady_clock::now();
  PortfolioResult out;
  out.catalog = catalog;
  out.k_values = config.k_values;
  out.max_parallel = config.max_parallel;
  for (std::size_t w = 0; w < catalog.size(); ++w)
    for (int k : config.k_values) {
      PortfolioRun run;
      run.weight_index = static_cast<int>(w);
      run.k_requested = k;
      run.k_used = std::min(k, instance.n_groups());
      run.seed = run_seed(config.seed, run.weight_index, k);
      out.runs.push_back(std::move(run));
    }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < out.runs.size(); i = next++) {
      auto& run = out.runs[i];
      auto t0 = std::chrono::steady_clock::now();
      const auto& weights = catalog[static_cast<std::size_t>(run.weight_index)].weights;
      try {
        TwoPhaseConfig rc = config.run;
        rc.k_fixed = run.k_used;
        rc.seed = run.seed;
        run.result = run_two_phase(instance, weights, rc);
        if (run.result.infeasible) {
          run.failed = true;
          run.error = run.result.message;
        } else {
          run.report = evaluate_schedule(instance, run.result.schedule, weights);
        }
      } catch (const std::exception& e) {
        run.failed = true;
        run.error = e.what();
      }
      run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (on_run_done) on_run_done(run);
    }
  };
  const int threads = std::min<int>(config.max_parallel, static_cast<int>(out.runs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t w = 0; w < catalog.size(); ++w) {
    PortfolioBest best;
    best.weight_index = static_cast<int>(w);
    for (std::size_t i = 0; i < out.runs.size(); ++i) {
      const auto& run = out.runs[i];
      if (run.weight_index != best.weight_index || run.failed || !run.report || !run.report->hard_feasible()) continue;
      bool better = best.run_index < 0 || run.report->weighted_objective < best.report->weighted_objective ||
                    (run.report->weighted_objective == best.report->weighted_objective && run.k_used < best.k_used);
      if (better) {
        best.run_index = static_cast<int>(i);
        best.schedule = run.result.schedule;
        best.report = run.report;
        best.k_used = run.k_used;
      }
    }
    out.best.push_back(std::move(best));
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace examsched
