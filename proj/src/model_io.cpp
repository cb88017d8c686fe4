#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "examsched/model.hpp"
#include "examsched/text.hpp"

namespace examsched {
namespace {

std::string number(double v) {
  if (std::abs(v) < 1e15 && v == std::floor(v)) return std::to_string(static_cast<long long>(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string export_lp(const MilpModel& m) {
  std::ostringstream out;
  out << "\\ phase " << m.metadata.phase << ", instance " << m.metadata.instance_digest << "\n";
  for (const auto& note : m.metadata.notes) out << "\\ " << note << "\n";
  out << "Minimize\n obj:";
  int written = 0;
  for (int j = 0; j < m.n_vars(); ++j) {
    double c = m.objective(j);
    if (c == 0.0) continue;
    out << (c < 0 ? " - " : (written ? " + " : " ")) << number(std::abs(c)) << " " << m.var_name(j);
    if (++written % 8 == 0) out << "\n";
  }
  if (written == 0 && m.n_vars() > 0) out << " 0 " << m.var_name(0);
  out << "\nSubject To\n";
  for (int r = 0; r < m.n_rows(); ++r) {
    out << " " << m.row_name(r) << ":";
    auto vars = m.row_vars(r);
    auto coefs = m.row_coefs(r);
    if (vars.empty() && m.n_vars() > 0) out << " 0 " << m.var_name(0);
    for (std::size_t k = 0; k < vars.size(); ++k) {
      double c = coefs[k];
      out << (c < 0 ? " - " : (k ? " + " : " "));
      if (std::abs(c) != 1.0) out << number(std::abs(c)) << " ";
      out << m.var_name(vars[k]);
      if ((k + 1) % 8 == 0 && k + 1 < vars.size()) out << "\n  ";
    }
    switch (m.sense(r)) {
      case Sense::kLessEqual: out << " <= "; break;
      case Sense::kGreaterEqual: out << " >= "; break;
      case Sense::kEqual: out << " = "; break;
    }
    out << number(m.rhs(r)) << "\n";
  }
  out << "Binaries\n";
  for (int j = 0; j < m.n_vars(); ++j) out << " " << m.var_name(j) << "\n";
  out << "End\n";
  return out.str();
}

// Name fields padded to fixed MPS columns; longer names push the next field
// right, which free-format readers accept.
void field(std::string& line, std::size_t column, std::string_view text) {
  if (line.size() + 1 >= column) line += ' ';
  else line.resize(column - 1, ' ');
  line += text;
}

std::string export_mps(const MilpModel& m) {
  std::string out;
  out += "NAME          EXAMSCHED\n";
  out += "ROWS\n N  obj\n";
  for (int r = 0; r < m.n_rows(); ++r) {
    const char* type = m.sense(r) == Sense::kLessEqual ? " L  " : m.sense(r) == Sense::kGreaterEqual ? " G  " : " E  ";
    out += type;
    out += m.row_name(r);
    out += '\n';
  }
  out += "COLUMNS\n";
  const Eigen::SparseMatrix<double, Eigen::ColMajor> csc = m.matrix();
  std::vector<std::string> row_names(static_cast<std::size_t>(m.n_rows()));
  for (int r = 0; r < m.n_rows(); ++r) row_names[static_cast<std::size_t>(r)] = m.row_name(r);
  // Two entries per line, the usual fixed-layout pairing.
  std::vector<std::pair<std::string_view, double>> entries;
  for (int j = 0; j < m.n_vars(); ++j) {
    const std::string name = m.var_name(j);
    entries.clear();
    if (m.objective(j) != 0.0) entries.emplace_back("obj", m.objective(j));
    for (Eigen::SparseMatrix<double, Eigen::ColMajor>::InnerIterator it(csc, j); it; ++it)
      entries.emplace_back(row_names[static_cast<std::size_t>(it.row())], it.value());
    if (entries.empty()) entries.emplace_back("obj", 0.0);
    for (std::size_t e = 0; e < entries.size(); e += 2) {
      std::string line;
      field(line, 5, name);
      field(line, 15, entries[e].first);
      field(line, 25, number(entries[e].second));
      if (e + 1 < entries.size()) {
        field(line, 40, entries[e + 1].first);
        field(line, 50, number(entries[e + 1].second));
      }
      out += line;
      out += '\n';
    }
  }
  out += "RHS\n";
  for (int r = 0; r < m.n_rows(); ++r) {
    if (m.rhs(r) == 0.0) continue;
    std::string line;
    field(line, 5, "RHS");
    field(line, 15, row_names[static_cast<std::size_t>(r)]);
    field(line, 25, number(m.rhs(r)));
    out += line;
    out += '\n';
  }
  out += "BOUNDS\n";
  for (int j = 0; j < m.n_vars(); ++j) {
    std::string line = " BV";
    field(line, 5, "BND");
    field(line, 15, m.var_name(j));
    out += line;
    out += '\n';
  }
  out += "ENDATA\n";
  return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::kParse, "bad number '" + std::string(s) + "' in MPS");
  return v;
}

// "x_12_3" -> (kX, {12, 3}); "c9_4_2" -> row family 9.
bool parse_indices(std::string_view rest, std::array<int, 2>& index) {
  index = {-1, -1};
  int count = 0;
  while (!rest.empty()) {
    if (rest[0] != '_' || count == 2) return false;
    rest.remove_prefix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || v < 0) return false;
    index[static_cast<std::size_t>(count++)] = v;
    rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
  }
  return count >= 1;
}

bool parse_var_name(std::string_view name, VarFamily& family, std::array<int, 2>& index) {
  static const std::array<VarFamily, 10> families = {
      VarFamily::kX,         VarFamily::kV,          VarFamily::kW,           VarFamily::kZOverlap,
      VarFamily::kZB2B,      VarFamily::kZPmToAm,    VarFamily::kZThreeIn24,  VarFamily::kZFourIn48,
      VarFamily::kZFacOverlap, VarFamily::kZFacB2B};
  auto us = name.find('_');
  if (us == std::string_view::npos) return false;
  for (auto f : families)
    if (name.substr(0, us) == family_prefix(f) && parse_indices(name.substr(us), index)) {
      family = f;
      return true;
    }
  return false;
}

bool parse_row_name(std::string_view name, RowFamily& family, std::array<int, 2>& index) {
  auto us = name.find('_');
  if (name.size() < 2 || name[0] != 'c' || us == std::string_view::npos) return false;
  int f = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + us, f);
  if (ec != std::errc() || ptr != name.data() + us || f < 1 || f > kRowFamilyCount) return false;
  if (!parse_indices(name.substr(us), index)) return false;
  family = static_cast<RowFamily>(f);
  return true;
}

}  // namespace

ExportFormat parse_export_format(std::string_view tag) {
  std::string t(tag);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "lp" || t == "lp-text") return ExportFormat::kLp;
  if (t == "mps" || t == "mps-text") return ExportFormat::kMps;
  throw Error(ErrorCode::kUnsupported, "unsupported model format '" + std::string(tag) + "'");
}

std::string export_model(const MilpModel& model, ExportFormat format) {
  return format == ExportFormat::kLp ? export_lp(model) : export_mps(model);
}

ImportedModel read_mps(std::string_view content) {
  enum class Section { kNone, kRows, kColumns, kRhs, kBounds, kDone } section = Section::kNone;
  struct RowDecl {
    std::string name;
    Sense sense;
  };
  std::vector<RowDecl> rows;
  std::unordered_map<std::string, int> row_id;
  std::string objective_row;
  std::vector<std::string> cols;
  std::unordered_map<std::string, int> col_id;
  std::vector<double> obj;
  std::vector<bool> integer;
  std::vector<double> lower, upper;
  struct Entry {
    int row, col;
    double val;
  };
  std::vector<Entry> entries;
  std::vector<double> rhs;
  bool in_marker = false;

  auto col_of = [&](std::string_view name) {
    auto it = col_id.find(std::string(name));
    if (it == col_id.end()) throw Error(ErrorCode::kParse, "unknown column '" + std::string(name) + "' in MPS");
    return it->second;
  };
  auto add_coef = [&](int col, std::string_view row, double v) {
    if (row == objective_row) {
      obj[static_cast<std::size_t>(col)] += v;
      return;
    }
    auto it = row_id.find(std::string(row));
    if (it == row_id.end()) throw Error(ErrorCode::kParse, "unknown row '" + std::string(row) + "' in MPS");
    entries.push_back({it->second, col, v});
  };

  std::size_t pos = 0;
  int line_no = 0;
  while (pos < content.size() && section != Section::kDone) {
    auto nl = content.find('\n', pos);
    std::string_view line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() : nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '*') continue;
    auto tok = tokens(line);
    if (tok.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      if (tok[0] == "NAME") continue;
      if (tok[0] == "ROWS") section = Section::kRows;
      else if (tok[0] == "COLUMNS") section = Section::kColumns;
      else if (tok[0] == "RHS") section = Section::kRhs;
      else if (tok[0] == "BOUNDS") section = Section::kBounds;
      else if (tok[0] == "ENDATA") section = Section::kDone;
      else throw Error(ErrorCode::kUnsupported, "MPS section '" + std::string(tok[0]) + "' not supported");
      continue;
    }
    auto bad = [&] { return Error(ErrorCode::kParse, "malformed MPS line " + std::to_string(line_no)); };
    switch (section) {
      case Section::kRows: {
        if (tok.size() != 2) throw bad();
        if (tok[0] == "N") {
          if (objective_row.empty()) objective_row = std::string(tok[1]);
          continue;
        }
        Sense s = tok[0] == "L" ? Sense::kLessEqual : tok[0] == "G" ? Sense::kGreaterEqual : Sense::kEqual;
        if (tok[0] != "L" && tok[0] != "G" && tok[0] != "E") throw bad();
        row_id.emplace(std::string(tok[1]), static_cast<int>(rows.size()));
        rows.push_back({std::string(tok[1]), s});
        break;
      }
      case Section::kColumns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          in_marker = tok[2] == "'INTORG'";
          continue;
        }
        if (tok.size() != 3 && tok.size() != 5) throw bad();
        std::string name(tok[0]);
        auto [it, fresh] = col_id.emplace(name, static_cast<int>(cols.size()));
        if (fresh) {
          cols.push_back(name);
          obj.push_back(0.0);
          integer.push_back(in_marker);
          lower.push_back(0.0);
          upper.push_back(in_marker ? 1.0 : std::numeric_limits<double>::infinity());
        }
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) add_coef(it->second, tok[k], parse_number(tok[k + 1]));
        break;
      }
      case Section::kRhs: {
        if (tok.size() != 3 && tok.size() != 5) throw bad();
        rhs.resize(rows.size(), 0.0);
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          if (tok[k] == objective_row) continue;
          auto it = row_id.find(std::string(tok[k]));
          if (it == row_id.end()) throw bad();
          rhs[static_cast<std::size_t>(it->second)] = parse_number(tok[k + 1]);
        }
        break;
      }
      case Section::kBounds: {
        if (tok.size() < 3) throw bad();
        int c = col_of(tok[2]);
        auto cu = static_cast<std::size_t>(c);
        double v = tok.size() > 3 ? parse_number(tok[3]) : 0.0;
        if (tok[0] == "BV") {
          integer[cu] = true;
          lower[cu] = 0.0;
          upper[cu] = 1.0;
        } else if (tok[0] == "UP") {
          upper[cu] = v;
        } else if (tok[0] == "LO") {
          lower[cu] = v;
        } else if (tok[0] == "FX") {
          lower[cu] = upper[cu] = v;
        } else {
          throw Error(ErrorCode::kUnsupported, "MPS bound type '" + std::string(tok[0]) + "' not supported");
        }
        break;
      }
      default:
        throw bad();
    }
  }
  rhs.resize(rows.size(), 0.0);

  ImportedModel im;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    VarFamily f = VarFamily::kOther;
    std::array<int, 2> index{static_cast<int>(j), -1};
    bool canonical = parse_var_name(cols[j], f, index);
    if (!canonical) {
      f = VarFamily::kOther;
      index = {static_cast<int>(j), -1};
    }
    int id = im.model.add_variable(f, index, obj[j]);
    if (im.model.var_name(id) != cols[j]) im.model.set_var_name(id, cols[j]);
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
  std::vector<Term> terms;
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    terms.clear();
    for (; k < entries.size() && entries[k].row == static_cast<int>(r); ++k) terms.push_back({entries[k].col, entries[k].val});
    RowFamily f = kRowOther;
    std::array<int, 2> index{static_cast<int>(r), -1};
    if (!parse_row_name(rows[r].name, f, index)) {
      f = kRowOther;
      index = {static_cast<int>(r), -1};
    }
    int id = im.model.add_row(f, index, rows[r].sense, rhs[r], terms);
    if (im.model.row_name(id) != rows[r].name) im.model.set_row_name(id, rows[r].name);
  }
  im.lower = std::move(lower);
  im.upper = std::move(upper);
  im.integer = std::move(integer);
  return im;
}

}  // namespace examsched
