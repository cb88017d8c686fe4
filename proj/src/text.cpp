#include "examsched/text.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "examsched/error.hpp"

namespace examsched {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfiguration: return "CONFIGURATION_ERROR";
    case ErrorCode::kParse: return "PARSE_ERROR";
    case ErrorCode::kUnknownReference: return "UNKNOWN_REFERENCE";
    case ErrorCode::kValidation: return "VALIDATION_FAILED";
    case ErrorCode::kBuild: return "MODEL_BUILD_ERROR";
    case ErrorCode::kEvaluation: return "EVALUATION_ERROR";
    case ErrorCode::kSearchBudget: return "SEARCH_BUDGET_EXCEEDED";
    case ErrorCode::kBackendUnavailable: return "BACKEND_UNAVAILABLE";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kRejectedMove: return "MOVE_REJECTED";
    case ErrorCode::kUnsupported: return "UNSUPPORTED";
  }
  return "UNKNOWN";
}

namespace text {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    std::size_t end = s.find(sep, begin);
    out.emplace_back(trim(s.substr(begin, end == std::string_view::npos ? s.npos : end - begin)));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

std::vector<std::string> split_record(std::string_view line, char sep) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == sep) {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::kParse, "unterminated quote in record: " + std::string(line));
  fields.emplace_back(trim(current));
  return fields;
}

std::vector<std::vector<std::string>> read_records(std::string_view content, char sep) {
  std::vector<std::vector<std::string>> records;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    records.push_back(split_record(t, sep));
  }
  return records;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path);
  out << content;
}

int parse_clock(std::string_view s) {
  s = trim(s);
  auto colon = s.find(':');
  if (colon == s.npos || colon == 0 || colon + 3 != s.size())
    throw Error(ErrorCode::kParse, "bad clock time '" + std::string(s) + "'");
  int h = 0, m = 0;
  for (char c : s.substr(0, colon)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorCode::kParse, "bad clock time '" + std::string(s) + "'");
    h = h * 10 + (c - '0');
  }
  for (char c : s.substr(colon + 1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorCode::kParse, "bad clock time '" + std::string(s) + "'");
    m = m * 10 + (c - '0');
  }
  if (h > 24 || m > 59 || (h == 24 && m != 0))
    throw Error(ErrorCode::kParse, "bad clock time '" + std::string(s) + "'");
  return h * 60 + m;
}

std::string format_clock(int minutes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

std::string digest(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace text
}  // namespace examsched
