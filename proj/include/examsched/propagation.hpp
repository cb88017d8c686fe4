#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "examsched/model.hpp"

namespace examsched {

// Incremental view of a binary program whose variables split into choice
// variables, partitioned by "sum = 1" rows, and dependent variables that sit
// at the least value their rows force. With non-negative dependent costs the
// objective of a partial assignment is a lower bound on every completion.
//
// Supported rows: the partition equalities, and inequalities in which at most
// one dependent variable has a coefficient that pushes it up. Anything else
// makes the constructor throw Error(kUnsupported).
class PropagationEngine {
 public:
  explicit PropagationEngine(const MilpModel& model);

  int n_blocks() const { return static_cast<int>(block_start_.size()) - 1; }
  std::span<const int> block_vars(int b) const;
  // Variables of b still allowed after single-variable rows were folded in.
  const std::vector<int>& allowed(int b) const { return allowed_[static_cast<std::size_t>(b)]; }
  int block_priority(int b) const { return block_priority_[static_cast<std::size_t>(b)]; }
  int chosen(int b) const { return chosen_[static_cast<std::size_t>(b)]; }

  // Set b to variable j (j = -1 clears the block).
  void assign(int b, int j);

  // True when some block has no allowed variable.
  bool root_infeasible() const { return root_infeasible_; }
  // Rows that no completion of the current partial assignment can satisfy,
  // plus dependents pushed above 1.
  int dead() const { return dead_; }
  double objective() const { return objective_; }
  long long work() const { return work_; }

  // Value of every model variable; unassigned blocks read as 0.
  std::vector<double> values() const;

 private:
  struct Entry {
    int row;
    double coef;
  };

  double contribution(double coef, std::int8_t state) const {
    if (state < 0) return coef < 0 ? coef : 0.0;
    return coef * state;
  }
  void set_choice(int j, std::int8_t state);
  void set_dependent(int y, int value);
  void refresh_row(int r);

  int n_vars_ = 0;
  std::vector<int> block_start_{0};
  std::vector<int> block_vars_;
  std::vector<std::vector<int>> allowed_;
  std::vector<int> block_priority_;
  std::vector<double> block_min_cost_;
  std::vector<int> chosen_;
  std::vector<int> block_of_;  // -1 for dependents

  std::vector<double> cost_;
  std::vector<std::int8_t> state_;  // choice: -1 unassigned, 0, 1; dependent: value
  std::vector<std::int32_t> need1_, need2_;  // rows forcing a dependent to >= 1 / >= 2

  std::vector<int> col_start_;
  std::vector<Entry> col_;

  std::vector<double> rhs_;
  std::vector<double> act_;  // least activity over completions, pusher excluded
  std::vector<int> pusher_;  // dependent with negative coefficient, or -1
  std::vector<double> pusher_coef_;
  std::vector<std::int8_t> implied_;
  std::vector<bool> row_dead_;

  bool root_infeasible_ = false;
  int dead_ = 0;
  double objective_ = 0.0;
  long long work_ = 0;
};

}  // namespace examsched
