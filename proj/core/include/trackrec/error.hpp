#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trackrec {

enum class ErrorCode {
  kMissingColumn,
  kEmptyDataset,
  kIoError,
  kNoEligibleUsers,
  kEmptyVocab,
  kIndexOutOfRange,
  kEmptyInput,
  kEmptyInstances,
  kInvalidConfig,
  kUnwritableModelDir,
  kManifestMismatch,
  kModelFileCorrupt,
};

std::string_view to_string(ErrorCode code);

// Coarse classification used by the CLI to pick an exit status.
enum class ErrorCategory { kUsage, kData, kModelIo };

ErrorCategory category_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace trackrec
