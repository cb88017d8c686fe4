#include "examsched/propagation.hpp"

#include <algorithm>
#include <limits>

namespace examsched {

namespace {
constexpr double kEps = 1e-9;
}

PropagationEngine::PropagationEngine(const MilpModel& model) : n_vars_(model.n_vars()) {
  const auto n = static_cast<std::size_t>(n_vars_);
  block_of_.assign(n, -1);
  cost_.resize(n);
  for (int j = 0; j < n_vars_; ++j) cost_[static_cast<std::size_t>(j)] = model.objective(j);

  // Partition rows: sum of variables = 1.
  std::vector<bool> partition_row(static_cast<std::size_t>(model.n_rows()), false);
  for (int r = 0; r < model.n_rows(); ++r) {
    if (model.sense(r) != Sense::kEqual) continue;
    auto coefs = model.row_coefs(r);
    bool unit = std::abs(model.rhs(r) - 1.0) < kEps && !coefs.empty() &&
                std::all_of(coefs.begin(), coefs.end(), [](double c) { return std::abs(c - 1.0) < kEps; });
    if (!unit) throw Error(ErrorCode::kUnsupported, "equality row " + model.row_name(r) + " is not a choice row");
    const int b = n_blocks();
    for (int j : model.row_vars(r)) {
      if (block_of_[static_cast<std::size_t>(j)] >= 0)
        throw Error(ErrorCode::kUnsupported, "variable " + model.var_name(j) + " is in two choice rows");
      block_of_[static_cast<std::size_t>(j)] = b;
      block_vars_.push_back(j);
    }
    block_start_.push_back(static_cast<int>(block_vars_.size()));
    partition_row[static_cast<std::size_t>(r)] = true;
  }
  for (int j = 0; j < n_vars_; ++j)
    if (block_of_[static_cast<std::size_t>(j)] < 0 && cost_[static_cast<std::size_t>(j)] < 0)
      throw Error(ErrorCode::kUnsupported, "dependent variable " + model.var_name(j) + " has a negative cost");

  // Single choice-variable rows become domain restrictions.
  std::vector<bool> forbidden(n, false), forced(n, false);
  std::vector<bool> keep(static_cast<std::size_t>(model.n_rows()), false);
  for (int r = 0; r < model.n_rows(); ++r) {
    if (partition_row[static_cast<std::size_t>(r)]) continue;
    auto vars = model.row_vars(r);
    if (vars.size() == 1 && block_of_[static_cast<std::size_t>(vars[0])] >= 0) {
      double sign = model.sense(r) == Sense::kGreaterEqual ? -1.0 : 1.0;
      double a = sign * model.row_coefs(r)[0], rhs = sign * model.rhs(r);
      auto j = static_cast<std::size_t>(vars[0]);
      if (a > rhs + kEps) forbidden[j] = true;
      if (0.0 > rhs + kEps) forced[j] = true;
      continue;
    }
    keep[static_cast<std::size_t>(r)] = true;
  }
  allowed_.resize(static_cast<std::size_t>(n_blocks()));
  block_priority_.assign(static_cast<std::size_t>(n_blocks()), 0);
  block_min_cost_.assign(static_cast<std::size_t>(n_blocks()), 0.0);
  chosen_.assign(static_cast<std::size_t>(n_blocks()), -1);
  for (int b = 0; b < n_blocks(); ++b) {
    auto bu = static_cast<std::size_t>(b);
    std::vector<int> must;
    for (int j : block_vars(b)) {
      block_priority_[bu] = std::max(block_priority_[bu], model.priority(j));
      if (forced[static_cast<std::size_t>(j)]) must.push_back(j);
      if (!forbidden[static_cast<std::size_t>(j)]) allowed_[bu].push_back(j);
    }
    if (must.size() > 1) allowed_[bu].clear();
    else if (must.size() == 1)
      allowed_[bu] = std::find(allowed_[bu].begin(), allowed_[bu].end(), must[0]) != allowed_[bu].end()
                         ? std::vector<int>{must[0]}
                         : std::vector<int>{};
    if (allowed_[bu].empty()) root_infeasible_ = true;
    double lo = std::numeric_limits<double>::infinity();
    for (int j : allowed_[bu]) lo = std::min(lo, cost_[static_cast<std::size_t>(j)]);
    block_min_cost_[bu] = allowed_[bu].empty() ? 0.0 : lo;
    objective_ += block_min_cost_[bu];
  }

  // Normalized "<=" rows with at most one pushed dependent.
  state_.assign(n, 0);
  for (int j = 0; j < n_vars_; ++j)
    if (block_of_[static_cast<std::size_t>(j)] >= 0) state_[static_cast<std::size_t>(j)] = -1;
  need1_.assign(n, 0);
  need2_.assign(n, 0);
  std::vector<std::vector<Entry>> columns(n);
  for (int r = 0; r < model.n_rows(); ++r) {
    if (!keep[static_cast<std::size_t>(r)]) continue;
    const int row = static_cast<int>(rhs_.size());
    double sign = model.sense(r) == Sense::kGreaterEqual ? -1.0 : 1.0;
    int pusher = -1;
    double pusher_coef = 0.0, act = 0.0;
    auto vars = model.row_vars(r);
    auto coefs = model.row_coefs(r);
    for (std::size_t k = 0; k < vars.size(); ++k) {
      auto j = static_cast<std::size_t>(vars[k]);
      double a = sign * coefs[k];
      if (block_of_[j] < 0 && a < 0) {
        if (pusher >= 0) throw Error(ErrorCode::kUnsupported, "row " + model.row_name(r) + " pushes two dependents");
        pusher = vars[k];
        pusher_coef = -a;
        continue;
      }
      columns[j].push_back({row, a});
      act += contribution(a, state_[j]);
    }
    rhs_.push_back(sign * model.rhs(r));
    act_.push_back(act);
    pusher_.push_back(pusher);
    pusher_coef_.push_back(pusher_coef);
    implied_.push_back(0);
    row_dead_.push_back(false);
  }
  col_start_.assign(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) col_start_[j + 1] = col_start_[j] + static_cast<int>(columns[j].size());
  col_.reserve(static_cast<std::size_t>(col_start_[n]));
  for (auto& c : columns) col_.insert(col_.end(), c.begin(), c.end());
  columns.clear();

  for (int r = 0; r < static_cast<int>(rhs_.size()); ++r) refresh_row(r);
  work_ = 0;
}

std::span<const int> PropagationEngine::block_vars(int b) const {
  auto s = static_cast<std::size_t>(block_start_[static_cast<std::size_t>(b)]);
  auto e = static_cast<std::size_t>(block_start_[static_cast<std::size_t>(b) + 1]);
  return {block_vars_.data() + s, e - s};
}

void PropagationEngine::refresh_row(int r) {
  auto ru = static_cast<std::size_t>(r);
  const int y = pusher_[ru];
  if (y < 0) {
    bool d = act_[ru] > rhs_[ru] + kEps;
    if (d != row_dead_[ru]) {
      row_dead_[ru] = d;
      dead_ += d ? 1 : -1;
    }
    return;
  }
  double need = (act_[ru] - rhs_[ru]) / pusher_coef_[ru];
  std::int8_t imp = need <= kEps ? 0 : need <= 1.0 + kEps ? 1 : 2;
  std::int8_t old = implied_[ru];
  if (imp == old) return;
  auto yu = static_cast<std::size_t>(y);
  need1_[yu] += (imp >= 1) - (old >= 1);
  need2_[yu] += (imp == 2) - (old == 2);
  implied_[ru] = imp;
  int value = need2_[yu] > 0 ? 2 : need1_[yu] > 0 ? 1 : 0;
  if (value != state_[yu]) set_dependent(y, value);
}

void PropagationEngine::set_dependent(int y, int value) {
  auto yu = static_cast<std::size_t>(y);
  int old = state_[yu];
  dead_ += (value == 2) - (old == 2);
  objective_ += cost_[yu] * (value - old);
  state_[yu] = static_cast<std::int8_t>(value);
  for (int k = col_start_[yu]; k < col_start_[yu + 1]; ++k) {
    const auto& e = col_[static_cast<std::size_t>(k)];
    act_[static_cast<std::size_t>(e.row)] += e.coef * (value - old);
    refresh_row(e.row);
  }
  work_ += col_start_[yu + 1] - col_start_[yu] + 1;
}

void PropagationEngine::set_choice(int j, std::int8_t state) {
  auto ju = static_cast<std::size_t>(j);
  std::int8_t old = state_[ju];
  if (old == state) return;
  state_[ju] = state;
  for (int k = col_start_[ju]; k < col_start_[ju + 1]; ++k) {
    const auto& e = col_[static_cast<std::size_t>(k)];
    act_[static_cast<std::size_t>(e.row)] += contribution(e.coef, state) - contribution(e.coef, old);
    refresh_row(e.row);
  }
  work_ += col_start_[ju + 1] - col_start_[ju] + 1;
}

void PropagationEngine::assign(int b, int j) {
  auto bu = static_cast<std::size_t>(b);
  const int old = chosen_[bu];
  if (old == j) return;
  if (old < 0) {
    objective_ += cost_[static_cast<std::size_t>(j)] - block_min_cost_[bu];
    for (int k : block_vars(b)) set_choice(k, k == j ? 1 : 0);
  } else if (j < 0) {
    objective_ += block_min_cost_[bu] - cost_[static_cast<std::size_t>(old)];
    for (int k : block_vars(b)) set_choice(k, -1);
  } else {
    objective_ += cost_[static_cast<std::size_t>(j)] - cost_[static_cast<std::size_t>(old)];
    set_choice(old, 0);
    set_choice(j, 1);
  }
  chosen_[bu] = j;
}

std::vector<double> PropagationEngine::values() const {
  std::vector<double> v(static_cast<std::size_t>(n_vars_), 0.0);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = state_[j] > 0 ? state_[j] : 0.0;
  return v;
}

}  // namespace examsched
