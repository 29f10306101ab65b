#include "ruslan/error.hpp"

namespace ruslan {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidDate: return "InvalidDate";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::OutOfRangeSample: return "OutOfRangeSample";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::EmptyAfterTrim: return "EmptyAfterTrim";
    case ErrorCode::DegenerateSignal: return "DegenerateSignal";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidBandRange: return "InvalidBandRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NegativeLoss: return "NegativeLoss";
    case ErrorCode::NegativeMagnitude: return "NegativeMagnitude";
    case ErrorCode::ZeroTarget: return "ZeroTarget";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingAudio: return "MissingAudio";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::EmptyMemory: return "EmptyMemory";
    case ErrorCode::UnknownOp: return "UnknownOp";
    case ErrorCode::PoolInvalid: return "PoolInvalid";
    case ErrorCode::UnknownSample: return "UnknownSample";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::Unauthorized: return "Unauthorized";
  }
  return "Unknown";
}

}  // namespace ruslan
