#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fts {

enum class ErrorCode {
  InvalidRange,
  NegativeCount,
  OutOfDomain,
  InsufficientObservations,
  DegenerateDesign,
  EmptyOutput,
  EmptyInput,
  KOutOfRange,
  RankDeficientDesign,
  InvalidParams,
  NonConvergence,
  Degenerate,
  StaleState,
  AlignmentMismatch,
  MalformedRow,
  UnknownHorizon,
  EmptySelection,
  InvalidConfig,
  Io,
  ArtifactMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidRange: return "invalid-range";
    case ErrorCode::NegativeCount: return "negative-count";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::InsufficientObservations: return "insufficient-observations";
    case ErrorCode::DegenerateDesign: return "degenerate-design";
    case ErrorCode::EmptyOutput: return "empty-output";
    case ErrorCode::EmptyInput: return "empty-input";
    case ErrorCode::KOutOfRange: return "k-out-of-range";
    case ErrorCode::RankDeficientDesign: return "rank-deficient-design";
    case ErrorCode::InvalidParams: return "invalid-params";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::StaleState: return "stale-state";
    case ErrorCode::AlignmentMismatch: return "alignment-mismatch";
    case ErrorCode::MalformedRow: return "malformed-row";
    case ErrorCode::UnknownHorizon: return "unknown-horizon";
    case ErrorCode::EmptySelection: return "empty-selection";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::Io: return "io";
    case ErrorCode::ArtifactMismatch: return "artifact-mismatch";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fts
