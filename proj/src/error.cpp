#include "stockbabble/error.hpp"

namespace stockbabble {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownTicker: return "UnknownTicker";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::MalformedFixture: return "MalformedFixture";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::MismatchedIndicator: return "MismatchedIndicator";
    case ErrorCode::EmptyUtterance: return "EmptyUtterance";
    case ErrorCode::MalformedCorpus: return "MalformedCorpus";
    case ErrorCode::UnknownTerm: return "UnknownTerm";
    case ErrorCode::UnknownUser: return "UnknownUser";
    case ErrorCode::UnknownPosition: return "UnknownPosition";
    case ErrorCode::InvalidQuantity: return "InvalidQuantity";
    case ErrorCode::UsernameTaken: return "UsernameTaken";
    case ErrorCode::WeakPassword: return "WeakPassword";
    case ErrorCode::BadCredentials: return "BadCredentials";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::TokenExpired: return "TokenExpired";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::StoreFailure: return "StoreFailure";
  }
  return "Unknown";
}

}  // namespace stockbabble
