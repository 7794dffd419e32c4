#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stockbabble {

enum class ErrorCode {
  // market data
  UnknownTicker,
  ProviderUnavailable,
  EmptySeries,
  MalformedFixture,
  // analysis
  InsufficientData,
  MismatchedIndicator,
  // language
  EmptyUtterance,
  MalformedCorpus,
  UnknownTerm,
  // portfolio
  UnknownUser,
  UnknownPosition,
  InvalidQuantity,
  // service
  UsernameTaken,
  WeakPassword,
  BadCredentials,
  InvalidToken,
  TokenExpired,
  BadRequest,
  StoreFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported as an Error. The code
// is stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stockbabble
