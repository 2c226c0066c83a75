#include "nbcf/error.hpp"

namespace nbcf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kZeroLengthDocument: return "ZeroLengthDocument";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kVocabMismatch: return "VocabMismatch";
    case ErrorCode::kSchemaVersion: return "SchemaVersionError";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kSplitInfeasible: return "SplitInfeasible";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kUsage: return "UsageError";
  }
  return "UnknownError";
}

}  // namespace nbcf
