#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctree {

enum class ErrorCode {
  io,
  parse,
  empty_input,
  duplicate_column,
  unknown_column,
  non_finite,
  invalid_argument,
  degenerate_variance,
  duplicate_assignment,
  unknown_feature,
  no_candidate,
  sampling_exhausted,
  process_failure,
  schema_mismatch,
  unlabeled_dataset,
  length_mismatch,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "Io";
    case ErrorCode::parse: return "Parse";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::duplicate_column: return "DuplicateColumn";
    case ErrorCode::unknown_column: return "UnknownColumn";
    case ErrorCode::non_finite: return "NonFinite";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::degenerate_variance: return "DegenerateVariance";
    case ErrorCode::duplicate_assignment: return "DuplicateAssignment";
    case ErrorCode::unknown_feature: return "UnknownFeature";
    case ErrorCode::no_candidate: return "NoCandidate";
    case ErrorCode::sampling_exhausted: return "SamplingExhausted";
    case ErrorCode::process_failure: return "ProcessFailure";
    case ErrorCode::schema_mismatch: return "SchemaMismatch";
    case ErrorCode::unlabeled_dataset: return "UnlabeledDataset";
    case ErrorCode::length_mismatch: return "LengthMismatch";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The message is
/// prefixed with the error name so command-line output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the sampler when too many consecutive proposals were rejected.
/// Carries the rows that were accepted before giving up (row-major).
class SamplingExhausted : public Error {
 public:
  SamplingExhausted(std::size_t drawn, std::size_t requested, std::vector<double> partial_values)
      : Error(ErrorCode::sampling_exhausted,
              "drew " + std::to_string(drawn) + " of " + std::to_string(requested) + " rows"),
        drawn_(drawn),
        requested_(requested),
        partial_(std::move(partial_values)) {}

  std::size_t drawn() const noexcept { return drawn_; }
  std::size_t requested() const noexcept { return requested_; }
  const std::vector<double>& partial_values() const noexcept { return partial_; }

 private:
  std::size_t drawn_;
  std::size_t requested_;
  std::vector<double> partial_;
};

// Process exit codes, one per error family.
//   0 success, 2 usage/config, 3 input data, 4 concepts,
//   5 black-box oracle, 6 training, 1 anything else.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return 2;
    case ErrorCode::io:
    case ErrorCode::parse:
    case ErrorCode::empty_input:
    case ErrorCode::duplicate_column:
    case ErrorCode::unknown_column:
    case ErrorCode::non_finite:
    case ErrorCode::length_mismatch:
      return 3;
    case ErrorCode::degenerate_variance:
    case ErrorCode::duplicate_assignment:
    case ErrorCode::unknown_feature:
      return 4;
    case ErrorCode::process_failure:
    case ErrorCode::schema_mismatch:
    case ErrorCode::unlabeled_dataset:
      return 5;
    case ErrorCode::no_candidate:
    case ErrorCode::sampling_exhausted:
      return 6;
  }
  return 1;
}

}  // namespace ctree
