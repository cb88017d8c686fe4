#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "examsched/evaluate.hpp"
#include "examsched/instance.hpp"

namespace examsched {

// Variable families of the exam program. All variables are binary.
enum class VarFamily : std::uint8_t {
  kX,            // group g in slot t
  kV,            // student s sits an exam in slot t
  kW,            // faculty f gives an exam in slot t
  kZOverlap,     // (s, t)
  kZB2B,         // (s, t0) for back-to-back pair starts
  kZPmToAm,      // (s, t0) for night slots with a next-morning slot
  kZThreeIn24,   // (s)
  kZFourIn48,    // (s)
  kZFacOverlap,  // (f)
  kZFacB2B,      // (f)
  kOther,        // imported variables outside the naming scheme
};

inline constexpr int kVarFamilyCount = 11;

// Row families c1..c16 of the exam program; 0 for imported rows outside the
// naming scheme.
using RowFamily = std::uint8_t;
inline constexpr RowFamily kRowOther = 0;
inline constexpr int kRowFamilyCount = 16;

enum class Sense : std::uint8_t { kLessEqual, kGreaterEqual, kEqual };

using ConstraintMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ConstraintMatrixView = Eigen::Map<const ConstraintMatrix>;

struct Term {
  int var;
  double coef;
};

struct ModelMetadata {
  std::string instance_digest;
  Weights weights;
  std::string phase;  // "full" or "phase1"
  std::vector<std::string> notes;
};

// Solver-agnostic binary program in canonical order: variables sorted by
// (family, index tuple), rows by (family, index tuple). Names are derived
// from family and indices, so nothing per-row is stored as text.
class MilpModel {
 public:
  int add_variable(VarFamily family, std::array<int, 2> index, double objective, int priority = 0);
  int add_row(RowFamily family, std::array<int, 2> index, Sense sense, double rhs, std::span<const Term> terms);

  int n_vars() const { return static_cast<int>(var_family_.size()); }
  int n_rows() const { return static_cast<int>(row_family_.size()); }
  long long n_nonzeros() const { return static_cast<long long>(col_.size()); }

  VarFamily var_family(int j) const { return var_family_[static_cast<std::size_t>(j)]; }
  std::array<int, 2> var_index(int j) const { return var_index_[static_cast<std::size_t>(j)]; }
  double objective(int j) const { return objective_[static_cast<std::size_t>(j)]; }
  int priority(int j) const { return priority_[static_cast<std::size_t>(j)]; }
  void set_priority(int j, int p) { priority_[static_cast<std::size_t>(j)] = p; }

  RowFamily row_family(int r) const { return row_family_[static_cast<std::size_t>(r)]; }
  std::array<int, 2> row_index(int r) const { return row_index_[static_cast<std::size_t>(r)]; }
  Sense sense(int r) const { return sense_[static_cast<std::size_t>(r)]; }
  double rhs(int r) const { return rhs_[static_cast<std::size_t>(r)]; }
  std::span<const int> row_vars(int r) const;
  std::span<const double> row_coefs(int r) const;

  ConstraintMatrixView matrix() const;

  std::string var_name(int j) const;
  std::string row_name(int r) const;

  int count_vars(VarFamily f) const;
  int count_rows(RowFamily f) const;

  // Variables that have explicit names outside the scheme (imports).
  void set_var_name(int j, std::string name) { custom_var_names_[j] = std::move(name); }
  void set_row_name(int r, std::string name) { custom_row_names_[r] = std::move(name); }

  // Objective value at a full variable assignment.
  double objective_value(std::span<const double> values) const;
  // Max violation over all rows at a full assignment.
  double max_violation(std::span<const double> values) const;

  ModelMetadata metadata;

 private:
  std::vector<VarFamily> var_family_;
  std::vector<std::array<int, 2>> var_index_;
  std::vector<double> objective_;
  std::vector<int> priority_;

  std::vector<RowFamily> row_family_;
  std::vector<std::array<int, 2>> row_index_;
  std::vector<Sense> sense_;
  std::vector<double> rhs_;
  std::vector<int> row_start_{0};
  std::vector<int> col_;
  std::vector<double> val_;

  std::map<int, std::string> custom_var_names_;
  std::map<int, std::string> custom_row_names_;
};

const char* family_prefix(VarFamily f);

// Pins applied on top of the instance's own requirements.
struct FixSet {
  std::vector<std::pair<int, int>> pins;  // (group, slot)
};

// Every group of the instance, all sixteen row families and the full
// objective. Blocks are enforced as x <= 1 - q. Throws Error(kBuild) when a
// pin conflicts with a block or an unavailable slot.
MilpModel build_full_model(const Instance& instance, const Weights& weights, const FixSet* fixes = nullptr);

// Restricted program over a group subset: row families c1..c10 plus the
// faculty cap of c15 without its penalty (at most two exams per faculty
// member and slot), objective limited to overlap, back-to-back and
// night-to-morning terms. Students outside the subset are left out. Throws Error(kBuild) when a pinned group
// is missing from the subset.
MilpModel build_phase1_model(const Instance& instance, const Weights& weights, const std::vector<int>& groups);

// Assignment of every model variable induced by a (possibly partial)
// schedule: x from the schedule, v/w from the linking rows, z at the least
// value the rows allow. z values above 1 are returned as they are, so an
// over-cap schedule shows up as a bound violation.
std::vector<double> induced_assignment(const MilpModel& model, const Schedule& schedule);

// Schedule read from the x variables of a solution (groups the model does not
// cover stay -1).
Schedule schedule_from_values(const MilpModel& model, std::span<const double> values, int n_groups);

enum class ExportFormat { kLp, kMps };

// Throws Error(kUnsupported) for unknown tags.
ExportFormat parse_export_format(std::string_view tag);
std::string export_model(const MilpModel& model, ExportFormat format);

// Generic free-format MPS reader (ROWS/COLUMNS/RHS/BOUNDS with BV/UP/LO/FX).
// Families are recovered from canonical names when they follow the scheme.
struct ImportedModel {
  MilpModel model;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
};

ImportedModel read_mps(std::string_view content);

}  // namespace examsched
