#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nbcf {

enum class ErrorCode {
  kIo,
  kFormat,
  kEmptyVocabulary,
  kZeroLengthDocument,
  kInvalidSpec,
  kEmptyClass,
  kEmptyCorpus,
  kVocabMismatch,
  kSchemaVersion,
  kDomain,
  kSplitInfeasible,
  kConfigMismatch,
  kUsage,
};

// Stable identifier printed by the CLI, e.g. "EmptyClass".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nbcf
