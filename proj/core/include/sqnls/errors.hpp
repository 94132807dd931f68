#pragma once

#include <stdexcept>
#include <string>

namespace sqnls {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A pivot fell below the scaled positive-definiteness threshold.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

/// A column norm collapsed during QR factorization.
struct RankDeficient : Error {
  using Error::Error;
};

/// Removing a rank-1 term would destroy positive definiteness.
/// Callers are expected to refactorize from scratch.
struct DowndateFailure : Error {
  using Error::Error;
};

/// A triangular factor carries a non-positive diagonal entry.
struct SingularFactor : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct DimensionTooLarge : Error {
  using Error::Error;
};

struct EmptyBatch : Error {
  using Error::Error;
};

struct BatchTooLarge : Error {
  using Error::Error;
};

struct EmptyTrace : Error {
  using Error::Error;
};

/// An iterate picked up a NaN or infinity; the run is aborted.
struct NonFiniteIterate : Error {
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number.
struct ParseError : Error {
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

struct NonMonotoneIndices : ParseError {
  using ParseError::ParseError;
};

struct DownloadFailed : Error {
  using Error::Error;
};

struct UnknownDataset : Error {
  using Error::Error;
};

}  // namespace sqnls
