#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ruslan {

enum class ErrorCode {
  InvalidArgument,
  // textnorm
  OutOfRange,
  InvalidDate,
  // phonemics
  NotNormalized,
  EmptyCorpus,
  // audio-io
  UnsupportedFormat,
  CorruptFile,
  OutOfRangeSample,
  IoFailure,
  EmptyAfterTrim,
  DegenerateSignal,
  // features / vocoder
  SignalTooShort,
  InvalidConfig,
  InvalidBandRange,
  ShapeMismatch,
  NegativeLoss,
  NegativeMagnitude,
  ZeroTarget,
  // corpus
  MalformedLine,
  DuplicateId,
  MissingAudio,
  UnknownSymbol,
  IndexOutOfRange,
  // neuralprims
  NonFiniteInput,
  EmptyMemory,
  UnknownOp,
  // mos-service
  PoolInvalid,
  UnknownSample,
  ScoreOutOfRange,
  Unauthorized,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a stable, machine-readable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ruslan
