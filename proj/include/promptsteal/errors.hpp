#pragma once

#include <stdexcept>
#include <string>

namespace promptsteal {

// Every failure the library raises carries one of these codes so callers
// (and the CLI exit-code mapping) can react without string matching.
enum class ErrorCode {
    InvalidArgument,
    IoFailure,
    ConfigInvalid,
    // gateway
    PromptTooLong,
    BackendUnavailable,
    ScriptMiss,
    // embedding / metrics
    EmptyText,
    EmbeddingBackendUnavailable,
    DimensionMismatch,
    ZeroVector,
    LengthMismatch,
    // dataset building
    UnparseableRoleResponse,
    KOutOfRange,
    InsufficientPool,
    // classifier training
    DegenerateLabels,
    EmptyTrainingSet,
    // reconstruction
    ContextParseFailure,
    // defense
    WrongPolicyKind,
    // pipeline
    MissingRunData,
    StageOrderViolation,
    SizeExceedsAvailable,
};

// CLI exit-code categories: 2 validation, 3 backend, 4 stage order.
enum class ErrorCategory { Validation, Backend, StageOrder };

ErrorCategory error_category(ErrorCode code);
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, bool transient = false)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          transient_(transient) {}

    ErrorCode code() const { return code_; }
    ErrorCategory category() const { return error_category(code_); }
    // Transient errors (network hiccups) are eligible for gateway retries.
    bool transient() const { return transient_; }

private:
    ErrorCode code_;
    bool transient_;
};

}  // namespace promptsteal
