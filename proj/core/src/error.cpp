#include "trackrec/error.hpp"

namespace trackrec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNoEligibleUsers: return "NoEligibleUsers";
    case ErrorCode::kEmptyVocab: return "EmptyVocab";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyInstances: return "EmptyInstances";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUnwritableModelDir: return "UnwritableModelDir";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
    case ErrorCode::kModelFileCorrupt: return "ModelFileCorrupt";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
      return ErrorCategory::kUsage;
    case ErrorCode::kUnwritableModelDir:
    case ErrorCode::kManifestMismatch:
    case ErrorCode::kModelFileCorrupt:
      return ErrorCategory::kModelIo;
    default:
      return ErrorCategory::kData;
  }
}

}  // namespace trackrec
