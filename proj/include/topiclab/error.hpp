#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topiclab {

enum class ErrorCode {
  PayloadTooLarge,
  UnknownTopic,
  Malformed,
  MalformedRecord,
  Io,
  EmptyVocabulary,
  EmptyCorpus,
  Dimension,
  NegativeInput,
  Index,
  VocabularyMismatch,
  MissingPrediction,
  InvalidArgument,
  Network,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for every recoverable failure in the library.
/// The code identifies the contract violation; what() carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace topiclab
