#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace examsched::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Splits one delimited-text record, honoring double-quoted fields.
std::vector<std::string> split_record(std::string_view line, char sep = ',');

// Reads every non-empty, non-comment record of a delimited-text document.
std::vector<std::vector<std::string>> read_records(std::string_view content,
                                                   char sep = ',');

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// "HH:MM" -> minutes after midnight. Throws Error(kParse).
int parse_clock(std::string_view s);
std::string format_clock(int minutes);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string digest(std::string_view data);

}  // namespace examsched::text
