#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "stockbabble/time.hpp"

namespace stockbabble {

// Cryptographically random bytes, hex encoded (2 chars per byte).
std::string random_hex(std::size_t bytes);

inline constexpr int kDefaultPasswordIterations = 100'000;

// PBKDF2-HMAC-SHA256 with a random 16-byte salt:
// "pbkdf2-sha256$<iterations>$<salt hex>$<hash hex>".
std::string hash_password(std::string_view password,
                          int iterations = kDefaultPasswordIterations);
// Constant-time comparison; false for malformed hashes.
bool verify_password(std::string_view password, std::string_view encoded_hash);

struct AuthToken {
  std::string token;  // 128 random bits, hex
  std::string user_id;
  Instant expires_at;
};

// In-memory bearer tokens. Thread-safe.
class TokenRegistry {
 public:
  explicit TokenRegistry(Clock clock = system_now,
                         std::chrono::seconds ttl = std::chrono::hours{24});

  AuthToken issue(std::string_view user_id);
  // Returns the user id. Throws Error(InvalidToken) for unknown tokens and
  // Error(TokenExpired) once expires_at has passed.
  std::string verify(std::string_view token);

 private:
  Clock clock_;
  std::chrono::seconds ttl_;
  std::mutex mutex_;
  std::map<std::string, AuthToken, std::less<>> tokens_;
};

}  // namespace stockbabble
