#pragma once

#include <stdexcept>
#include <string>

namespace examsched {

// Machine-readable failure categories. The string form is what the CLI and
// service put in their error documents.
enum class ErrorCode {
  kConfiguration,
  kParse,
  kUnknownReference,
  kValidation,
  kBuild,
  kEvaluation,
  kSearchBudget,
  kBackendUnavailable,
  kNotFound,
  kRejectedMove,
  kUnsupported,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace examsched
