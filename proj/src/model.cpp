#include "examsched/model.hpp"

#include <algorithm>
#include <cmath>

#include "examsched/documents.hpp"

namespace examsched {

// ---------------------------------------------------------------------------
// MilpModel

int MilpModel::add_variable(VarFamily family, std::array<int, 2> index, double objective, int priority) {
  var_family_.push_back(family);
  var_index_.push_back(index);
  objective_.push_back(objective);
  priority_.push_back(priority);
  return n_vars() - 1;
}

int MilpModel::add_row(RowFamily family, std::array<int, 2> index, Sense sense, double rhs,
                       std::span<const Term> terms) {
  std::size_t begin = col_.size();
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= n_vars()) throw Error(ErrorCode::kBuild, "row references an unknown variable");
    if (t.coef == 0.0) continue;
    col_.push_back(t.var);
    val_.push_back(t.coef);
  }
  // Sort the new row by column and merge repeated columns.
  std::vector<std::pair<int, double>> entries;
  entries.reserve(col_.size() - begin);
  for (std::size_t k = begin; k < col_.size(); ++k) entries.emplace_back(col_[k], val_[k]);
  std::sort(entries.begin(), entries.end());
  col_.resize(begin);
  val_.resize(begin);
  for (const auto& [c, v] : entries) {
    if (col_.size() > begin && col_.back() == c) {
      val_.back() += v;
    } else {
      col_.push_back(c);
      val_.push_back(v);
    }
  }
  row_family_.push_back(family);
  row_index_.push_back(index);
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_start_.push_back(static_cast<int>(col_.size()));
  return n_rows() - 1;
}

std::span<const int> MilpModel::row_vars(int r) const {
  auto b = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(r)]);
  auto e = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(r) + 1]);
  return {col_.data() + b, e - b};
}

std::span<const double> MilpModel::row_coefs(int r) const {
  auto b = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(r)]);
  auto e = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(r) + 1]);
  return {val_.data() + b, e - b};
}

ConstraintMatrixView MilpModel::matrix() const {
  return ConstraintMatrixView(n_rows(), n_vars(), static_cast<Eigen::Index>(col_.size()), row_start_.data(),
                              col_.data(), val_.data());
}

const char* family_prefix(VarFamily f) {
  switch (f) {
    case VarFamily::kX: return "x";
    case VarFamily::kV: return "v";
    case VarFamily::kW: return "w";
    case VarFamily::kZOverlap: return "zov";
    case VarFamily::kZB2B: return "zb2b";
    case VarFamily::kZPmToAm: return "zpm";
    case VarFamily::kZThreeIn24: return "z3";
    case VarFamily::kZFourIn48: return "z4";
    case VarFamily::kZFacOverlap: return "zfov";
    case VarFamily::kZFacB2B: return "zfb2b";
    case VarFamily::kOther: return "y";
  }
  return "y";
}

namespace {

std::string indexed(std::string prefix, std::array<int, 2> index) {
  prefix += "_" + std::to_string(index[0]);
  if (index[1] >= 0) prefix += "_" + std::to_string(index[1]);
  return prefix;
}

}  // namespace

std::string MilpModel::var_name(int j) const {
  if (auto it = custom_var_names_.find(j); it != custom_var_names_.end()) return it->second;
  return indexed(family_prefix(var_family(j)), var_index(j));
}

std::string MilpModel::row_name(int r) const {
  if (auto it = custom_row_names_.find(r); it != custom_row_names_.end()) return it->second;
  if (row_family(r) == kRowOther) return indexed("r", {r, -1});
  return indexed("c" + std::to_string(row_family(r)), row_index(r));
}

int MilpModel::count_vars(VarFamily f) const {
  return static_cast<int>(std::count(var_family_.begin(), var_family_.end(), f));
}

int MilpModel::count_rows(RowFamily f) const {
  return static_cast<int>(std::count(row_family_.begin(), row_family_.end(), f));
}

double MilpModel::objective_value(std::span<const double> values) const {
  double z = 0.0;
  for (int j = 0; j < n_vars(); ++j) z += objective(j) * values[static_cast<std::size_t>(j)];
  return z;
}

double MilpModel::max_violation(std::span<const double> values) const {
  double worst = 0.0;
  for (int j = 0; j < n_vars(); ++j) {
    double v = values[static_cast<std::size_t>(j)];
    worst = std::max({worst, -v, v - 1.0});
  }
  for (int r = 0; r < n_rows(); ++r) {
    double act = 0.0;
    auto vars = row_vars(r);
    auto coefs = row_coefs(r);
    for (std::size_t k = 0; k < vars.size(); ++k) act += coefs[k] * values[static_cast<std::size_t>(vars[k])];
    switch (sense(r)) {
      case Sense::kLessEqual: worst = std::max(worst, act - rhs(r)); break;
      case Sense::kGreaterEqual: worst = std::max(worst, rhs(r) - act); break;
      case Sense::kEqual: worst = std::max(worst, std::abs(act - rhs(r))); break;
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

struct RowKinds {
  static constexpr RowFamily kOneSlot = 1, kStudentLinkUp = 2, kStudentLinkDown = 3, kAvailability = 4,
                             kCapacity = 5, kRequired = 6, kForbidden = 7, kOverlap = 8, kB2B = 9, kPmToAm = 10,
                             kThreeIn24 = 11, kFourIn48 = 12, kFacultyLinkUp = 13, kFacultyLinkDown = 14,
                             kFacultyOverlap = 15, kFacultyB2B = 16;
};

class Builder {
 public:
  Builder(const Instance& inst, const Weights& weights, std::vector<int> groups, bool full)
      : inst_(inst), weights_(weights), groups_(std::move(groups)), full_(full), T_(inst.n_slots()) {
    group_pos_.assign(static_cast<std::size_t>(inst.n_groups()), -1);
    for (std::size_t i = 0; i < groups_.size(); ++i) group_pos_[static_cast<std::size_t>(groups_[i])] = static_cast<int>(i);
    for (int s = 0; s < inst.n_students(); ++s) {
      std::vector<int> gs;
      for (Incidence::InnerIterator it(inst.student_group, s); it; ++it)
        if (group_pos_[static_cast<std::size_t>(it.col())] >= 0) gs.push_back(static_cast<int>(it.col()));
      if (full_ || !gs.empty()) {
        students_.push_back(s);
        groups_of_student_.push_back(std::move(gs));
      }
    }
    if (full_) {
      for (int f = 0; f < inst.n_faculty(); ++f) {
        std::vector<int> gs;
        for (Incidence::InnerIterator it(inst.faculty_group, f); it; ++it) gs.push_back(static_cast<int>(it.col()));
        faculty_.push_back(f);
        groups_of_faculty_.push_back(std::move(gs));
      }
    } else {
      // Only faculty who could break the cap inside the subset.
      for (int f = 0; f < inst.n_faculty(); ++f) {
        std::vector<int> gs;
        for (Incidence::InnerIterator it(inst.faculty_group, f); it; ++it)
          if (group_pos_[static_cast<std::size_t>(it.col())] >= 0) gs.push_back(static_cast<int>(it.col()));
        if (gs.size() < 3) continue;
        capped_faculty_.push_back(f);
        groups_of_capped_faculty_.push_back(std::move(gs));
      }
    }
    for (auto [a, b] : inst.patterns.b2b_pairs) b2b_starts_.push_back(a);
    for (auto [a, b] : inst.patterns.pm_to_am_pairs) pm_starts_.push_back(a);
    required_ = inst.required;
  }

  void apply_fixes(const FixSet& fixes) {
    for (auto [g, t] : fixes.pins) {
      if (g < 0 || g >= inst_.n_groups() || t < 0 || t >= T_) throw Error(ErrorCode::kBuild, "fix out of range");
      auto pin = inst_.pinned_slot(g);
      if (pin && *pin != t)
        throw Error(ErrorCode::kBuild, "fix for " + label(g) + " contradicts its required slot");
      for (int u = 0; u < T_; ++u)
        if (u != t && required_(g, u)) throw Error(ErrorCode::kBuild, "group " + label(g) + " fixed twice");
      required_(g, t) = true;
    }
  }

  void check_pins() const {
    for (int g : groups_)
      for (int t = 0; t < T_; ++t) {
        if (!required_(g, t)) continue;
        if (inst_.forbidden(g, t))
          throw Error(ErrorCode::kBuild, "group " + label(g) + " is required and forbidden in " + inst_.grid.label(t));
        if (!inst_.available(t))
          throw Error(ErrorCode::kBuild, "group " + label(g) + " is required in unavailable " + inst_.grid.label(t));
      }
  }

  MilpModel build() {
    check_pins();
    MilpModel m;
    const auto S = static_cast<int>(students_.size());
    const auto F = static_cast<int>(faculty_.size());
    const auto P = static_cast<int>(b2b_starts_.size());
    const auto Q = static_cast<int>(pm_starts_.size());

    x0_ = m.n_vars();
    for (int g : groups_)
      for (int t = 0; t < T_; ++t) m.add_variable(VarFamily::kX, {g, t}, 0.0, inst_.group_size(g));
    v0_ = m.n_vars();
    for (int s : students_)
      for (int t = 0; t < T_; ++t) m.add_variable(VarFamily::kV, {s, t}, 0.0);
    w0_ = m.n_vars();
    for (int f : faculty_)
      for (int t = 0; t < T_; ++t) m.add_variable(VarFamily::kW, {f, t}, 0.0);
    int zov0 = m.n_vars();
    for (int s : students_)
      for (int t = 0; t < T_; ++t) m.add_variable(VarFamily::kZOverlap, {s, t}, weights_.overlap);
    int zb2b0 = m.n_vars();
    for (int s : students_)
      for (int t : b2b_starts_) m.add_variable(VarFamily::kZB2B, {s, t}, weights_.b2b);
    int zpm0 = m.n_vars();
    for (int s : students_)
      for (int t : pm_starts_) m.add_variable(VarFamily::kZPmToAm, {s, t}, weights_.pm_to_am);
    int z30 = m.n_vars(), z40 = 0, zfov0 = 0, zfb2b0 = 0;
    if (full_) {
      for (int s : students_) m.add_variable(VarFamily::kZThreeIn24, {s, -1}, weights_.three_in_24);
      z40 = m.n_vars();
      for (int s : students_) m.add_variable(VarFamily::kZFourIn48, {s, -1}, weights_.four_in_48);
      zfov0 = m.n_vars();
      for (int f : faculty_) m.add_variable(VarFamily::kZFacOverlap, {f, -1}, weights_.faculty_overlap);
      zfb2b0 = m.n_vars();
      for (int f : faculty_) m.add_variable(VarFamily::kZFacB2B, {f, -1}, weights_.faculty_b2b);
    }

    std::vector<Term> terms;
    auto x = [&](int g, int t) { return x0_ + group_pos_[static_cast<std::size_t>(g)] * T_ + t; };
    auto v = [&](int sp, int t) { return v0_ + sp * T_ + t; };
    auto w = [&](int fp, int t) { return w0_ + fp * T_ + t; };
    const double M2 = inst_.max_groups_per_student;
    const double M3 = inst_.max_groups_per_faculty;

    // c1: one slot per group
    for (int g : groups_) {
      terms.clear();
      for (int t = 0; t < T_; ++t) terms.push_back({x(g, t), 1.0});
      m.add_row(RowKinds::kOneSlot, {g, -1}, Sense::kEqual, 1.0, terms);
    }
    // c2, c3: student presence links
    for (int sp = 0; sp < S; ++sp)
      for (int t = 0; t < T_; ++t) {
        terms.assign({{v(sp, t), M2}});
        for (int g : groups_of_student_[static_cast<std::size_t>(sp)]) terms.push_back({x(g, t), -1.0});
        m.add_row(RowKinds::kStudentLinkUp, {students_[static_cast<std::size_t>(sp)], t}, Sense::kGreaterEqual, 0.0, terms);
      }
    for (int sp = 0; sp < S; ++sp)
      for (int t = 0; t < T_; ++t) {
        terms.assign({{v(sp, t), 1.0}});
        for (int g : groups_of_student_[static_cast<std::size_t>(sp)]) terms.push_back({x(g, t), -1.0});
        m.add_row(RowKinds::kStudentLinkDown, {students_[static_cast<std::size_t>(sp)], t}, Sense::kLessEqual, 0.0, terms);
      }
    // c4: availability
    for (int g : groups_)
      for (int t = 0; t < T_; ++t) {
        terms.assign({{x(g, t), 1.0}});
        m.add_row(RowKinds::kAvailability, {g, t}, Sense::kLessEqual, inst_.available(t) ? 1.0 : 0.0, terms);
      }
    // c5: capacity
    for (int t = 0; t < T_; ++t) {
      terms.clear();
      for (int g : groups_) terms.push_back({x(g, t), static_cast<double>(inst_.group_size(g))});
      m.add_row(RowKinds::kCapacity, {t, -1}, Sense::kLessEqual, static_cast<double>(inst_.capacity), terms);
    }
    // c6: required assignments
    for (int g : groups_)
      for (int t = 0; t < T_; ++t) {
        terms.assign({{x(g, t), 1.0}});
        m.add_row(RowKinds::kRequired, {g, t}, Sense::kGreaterEqual, required_(g, t) ? 1.0 : 0.0, terms);
      }
    // c7: forbidden assignments, x <= 1 - q
    for (int g : groups_)
      for (int t = 0; t < T_; ++t) {
        terms.assign({{x(g, t), 1.0}});
        m.add_row(RowKinds::kForbidden, {g, t}, Sense::kLessEqual, inst_.forbidden(g, t) ? 0.0 : 1.0, terms);
      }
    // c8: student overlap
    for (int sp = 0; sp < S; ++sp)
      for (int t = 0; t < T_; ++t) {
        terms.clear();
        for (int g : groups_of_student_[static_cast<std::size_t>(sp)]) terms.push_back({x(g, t), 1.0});
        terms.push_back({zov0 + sp * T_ + t, -1.0});
        m.add_row(RowKinds::kOverlap, {students_[static_cast<std::size_t>(sp)], t}, Sense::kLessEqual, 1.0, terms);
      }
    // c9, c10: back-to-back and night-to-morning pairs
    for (int sp = 0; sp < S; ++sp)
      for (int k = 0; k < P; ++k) {
        auto [a, b] = inst_.patterns.b2b_pairs[static_cast<std::size_t>(k)];
        terms.assign({{v(sp, a), 1.0}, {v(sp, b), 1.0}, {zb2b0 + sp * P + k, -1.0}});
        m.add_row(RowKinds::kB2B, {students_[static_cast<std::size_t>(sp)], a}, Sense::kLessEqual, 1.0, terms);
      }
    for (int sp = 0; sp < S; ++sp)
      for (int k = 0; k < Q; ++k) {
        auto [a, b] = inst_.patterns.pm_to_am_pairs[static_cast<std::size_t>(k)];
        terms.assign({{v(sp, a), 1.0}, {v(sp, b), 1.0}, {zpm0 + sp * Q + k, -1.0}});
        m.add_row(RowKinds::kPmToAm, {students_[static_cast<std::size_t>(sp)], a}, Sense::kLessEqual, 1.0, terms);
      }
    if (!full_) {
      // c15 without its penalty: at most two exams per faculty member and slot,
      // so the fixed groups never make the full program infeasible.
      for (std::size_t i = 0; i < capped_faculty_.size(); ++i)
        for (int t = 0; t < T_; ++t) {
          terms.clear();
          for (int g : groups_of_capped_faculty_[i]) terms.push_back({x(g, t), 1.0});
          m.add_row(RowKinds::kFacultyOverlap, {capped_faculty_[i], t}, Sense::kLessEqual, 2.0, terms);
        }
      return finish(m);
    }

    // c11, c12: windows. Rows are identically satisfied for students with
    // fewer groups than the window size, so they are not generated.
    const auto& w3 = inst_.patterns.windows_3in24;
    const auto& w4 = inst_.patterns.windows_4in48;
    for (int sp = 0; sp < S; ++sp) {
      if (groups_of_student_[static_cast<std::size_t>(sp)].size() < 3) continue;
      for (std::size_t k = 0; k < w3.size(); ++k) {
        terms.clear();
        for (int t : w3[k]) terms.push_back({v(sp, t), 1.0});
        terms.push_back({z30 + sp, -1.0});
        m.add_row(RowKinds::kThreeIn24, {students_[static_cast<std::size_t>(sp)], static_cast<int>(k)},
                  Sense::kLessEqual, 2.0, terms);
      }
    }
    for (int sp = 0; sp < S; ++sp) {
      if (groups_of_student_[static_cast<std::size_t>(sp)].size() < 4) continue;
      for (std::size_t k = 0; k < w4.size(); ++k) {
        terms.clear();
        for (int t : w4[k]) terms.push_back({v(sp, t), 1.0});
        terms.push_back({z40 + sp, -1.0});
        m.add_row(RowKinds::kFourIn48, {students_[static_cast<std::size_t>(sp)], static_cast<int>(k)},
                  Sense::kLessEqual, 3.0, terms);
      }
    }
    // c13, c14: faculty presence links
    for (int fp = 0; fp < F; ++fp)
      for (int t = 0; t < T_; ++t) {
        terms.assign({{w(fp, t), M3}});
        for (int g : groups_of_faculty_[static_cast<std::size_t>(fp)]) terms.push_back({x(g, t), -1.0});
        m.add_row(RowKinds::kFacultyLinkUp, {faculty_[static_cast<std::size_t>(fp)], t}, Sense::kGreaterEqual, 0.0, terms);
      }
    for (int fp = 0; fp < F; ++fp)
      for (int t = 0; t < T_; ++t) {
        terms.assign({{w(fp, t), 1.0}});
        for (int g : groups_of_faculty_[static_cast<std::size_t>(fp)]) terms.push_back({x(g, t), -1.0});
        m.add_row(RowKinds::kFacultyLinkDown, {faculty_[static_cast<std::size_t>(fp)], t}, Sense::kLessEqual, 0.0, terms);
      }
    // c15: faculty overlap
    for (int fp = 0; fp < F; ++fp)
      for (int t = 0; t < T_; ++t) {
        terms.clear();
        for (int g : groups_of_faculty_[static_cast<std::size_t>(fp)]) terms.push_back({x(g, t), 1.0});
        terms.push_back({zfov0 + fp, -1.0});
        m.add_row(RowKinds::kFacultyOverlap, {faculty_[static_cast<std::size_t>(fp)], t}, Sense::kLessEqual, 1.0, terms);
      }
    // c16: faculty back-to-back
    for (int fp = 0; fp < F; ++fp)
      for (int k = 0; k < P; ++k) {
        auto [a, b] = inst_.patterns.b2b_pairs[static_cast<std::size_t>(k)];
        terms.assign({{w(fp, a), 1.0}, {w(fp, b), 1.0}, {zfb2b0 + fp, -1.0}});
        m.add_row(RowKinds::kFacultyB2B, {faculty_[static_cast<std::size_t>(fp)], a}, Sense::kLessEqual, 1.0, terms);
      }
    return finish(m);
  }

 private:
  MilpModel finish(MilpModel& m) {
    m.metadata.instance_digest = instance_digest(inst_);
    m.metadata.weights = weights_;
    m.metadata.phase = full_ ? "full" : "phase1";
    m.metadata.notes = {
        "forbidden assignments enforced as x <= 1 - q",
        "back-to-back and night-to-morning z variables exist only at pair starts",
    };
    if (full_) m.metadata.notes.push_back("window rows only for students with at least as many groups as the window size");
    else {
      m.metadata.notes.push_back("students without a phase-1 group are omitted");
      m.metadata.notes.push_back("faculty overlap cap kept as x-only rows without penalty");
    }
    return std::move(m);
  }

  std::string label(int g) const { return inst_.groups[static_cast<std::size_t>(g)].label; }

  const Instance& inst_;
  const Weights& weights_;
  std::vector<int> groups_;
  bool full_;
  int T_;
  std::vector<int> group_pos_;
  std::vector<int> students_;
  std::vector<std::vector<int>> groups_of_student_;
  std::vector<int> faculty_;
  std::vector<std::vector<int>> groups_of_faculty_;
  std::vector<int> capped_faculty_;
  std::vector<std::vector<int>> groups_of_capped_faculty_;
  std::vector<int> b2b_starts_;
  std::vector<int> pm_starts_;
  GroupSlotFlags required_;
  int x0_ = 0, v0_ = 0, w0_ = 0;
};

}  // namespace

MilpModel build_full_model(const Instance& instance, const Weights& weights, const FixSet* fixes) {
  std::vector<int> all(static_cast<std::size_t>(instance.n_groups()));
  for (int g = 0; g < instance.n_groups(); ++g) all[static_cast<std::size_t>(g)] = g;
  Builder b(instance, weights, std::move(all), true);
  if (fixes) b.apply_fixes(*fixes);
  return b.build();
}

MilpModel build_phase1_model(const Instance& instance, const Weights& weights, const std::vector<int>& groups) {
  std::vector<int> subset = groups;
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (int g : subset)
    if (g < 0 || g >= instance.n_groups()) throw Error(ErrorCode::kBuild, "phase-1 group out of range");
  for (int g = 0; g < instance.n_groups(); ++g)
    if (instance.pinned_slot(g) && !std::binary_search(subset.begin(), subset.end(), g))
      throw Error(ErrorCode::kBuild, "pinned group " + instance.groups[static_cast<std::size_t>(g)].label +
                                         " must be part of phase 1");
  Builder b(instance, weights, std::move(subset), false);
  return b.build();
}

std::vector<double> induced_assignment(const MilpModel& model, const Schedule& schedule) {
  std::vector<double> values(static_cast<std::size_t>(model.n_vars()), 0.0);
  std::vector<bool> is_x(static_cast<std::size_t>(model.n_vars()), false);
  for (int j = 0; j < model.n_vars(); ++j) {
    if (model.var_family(j) != VarFamily::kX) continue;
    is_x[static_cast<std::size_t>(j)] = true;
    auto [g, t] = model.var_index(j);
    if (g < schedule.size() && schedule[g] == t) values[static_cast<std::size_t>(j)] = 1.0;
  }
  // Raise every non-x variable to the least value its rows allow, until
  // nothing moves. The dependency chain x -> v, w -> z is at most two deep.
  for (bool changed = true; changed;) {
    changed = false;
    for (int r = 0; r < model.n_rows(); ++r) {
      auto vars = model.row_vars(r);
      auto coefs = model.row_coefs(r);
      double act = 0.0;
      for (std::size_t k = 0; k < vars.size(); ++k) act += coefs[k] * values[static_cast<std::size_t>(vars[k])];
      double sign = model.sense(r) == Sense::kGreaterEqual ? -1.0 : 1.0;
      if (model.sense(r) == Sense::kEqual) continue;
      double excess = sign * act - sign * model.rhs(r);
      if (excess <= 1e-9) continue;
      for (std::size_t k = 0; k < vars.size(); ++k) {
        auto j = static_cast<std::size_t>(vars[k]);
        double a = sign * coefs[k];
        if (is_x[j] || a >= 0) continue;
        values[j] += std::ceil(excess / -a - 1e-9);
        changed = true;
        break;
      }
    }
  }
  return values;
}

Schedule schedule_from_values(const MilpModel& model, std::span<const double> values, int n_groups) {
  Schedule s = Schedule::unassigned(n_groups);
  for (int j = 0; j < model.n_vars(); ++j) {
    if (model.var_family(j) != VarFamily::kX || values[static_cast<std::size_t>(j)] < 0.5) continue;
    auto [g, t] = model.var_index(j);
    if (g >= 0 && g < n_groups) s[g] = t;
  }
  return s;
}

}  // namespace examsched
