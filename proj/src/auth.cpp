#include "stockbabble/auth.hpp"

#include <fmt/format.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <charconv>
#include <stdexcept>
#include <vector>

#include "stockbabble/error.hpp"

namespace stockbabble {
namespace {

constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kHashBytes = 32;

std::string to_hex(const unsigned char* data, std::size_t size) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 0x0f];
  }
  return out;
}

bool from_hex(std::string_view hex, std::vector<unsigned char>& out) {
  if (hex.size() % 2 != 0) return false;
  out.clear();
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, value, 16);
    if (ec != std::errc{} || ptr != hex.data() + i + 2) return false;
    out.push_back(static_cast<unsigned char>(value));
  }
  return true;
}

std::vector<unsigned char> derive(std::string_view password, const std::vector<unsigned char>& salt,
                                  int iterations) {
  std::vector<unsigned char> out(kHashBytes);
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), iterations, EVP_sha256(),
                        static_cast<int>(out.size()), out.data()) != 1) {
    throw std::runtime_error("PBKDF2 failed");
  }
  return out;
}

}  // namespace

std::string random_hex(std::size_t bytes) {
  std::vector<unsigned char> buffer(bytes);
  if (RAND_bytes(buffer.data(), static_cast<int>(buffer.size())) != 1) {
    throw std::runtime_error("random source failure");
  }
  return to_hex(buffer.data(), buffer.size());
}

std::string hash_password(std::string_view password, int iterations) {
  std::vector<unsigned char> salt(kSaltBytes);
  if (RAND_bytes(salt.data(), static_cast<int>(salt.size())) != 1) {
    throw std::runtime_error("random source failure");
  }
  const auto hash = derive(password, salt, iterations);
  return fmt::format("pbkdf2-sha256${}${}${}", iterations, to_hex(salt.data(), salt.size()),
                     to_hex(hash.data(), hash.size()));
}

bool verify_password(std::string_view password, std::string_view encoded) {
  constexpr std::string_view kScheme = "pbkdf2-sha256$";
  if (encoded.substr(0, kScheme.size()) != kScheme) return false;
  encoded.remove_prefix(kScheme.size());
  const auto first = encoded.find('$');
  const auto second = encoded.find('$', first == std::string_view::npos ? first : first + 1);
  if (first == std::string_view::npos || second == std::string_view::npos) return false;
  int iterations = 0;
  const auto iter_text = encoded.substr(0, first);
  const auto [ptr, ec] =
      std::from_chars(iter_text.data(), iter_text.data() + iter_text.size(), iterations);
  if (ec != std::errc{} || ptr != iter_text.data() + iter_text.size() || iterations < 1) {
    return false;
  }
  std::vector<unsigned char> salt, expected;
  if (!from_hex(encoded.substr(first + 1, second - first - 1), salt) ||
      !from_hex(encoded.substr(second + 1), expected) || expected.size() != kHashBytes) {
    return false;
  }
  const auto actual = derive(password, salt, iterations);
  return CRYPTO_memcmp(actual.data(), expected.data(), kHashBytes) == 0;
}

TokenRegistry::TokenRegistry(Clock clock, std::chrono::seconds ttl)
    : clock_(std::move(clock)), ttl_(ttl) {}

AuthToken TokenRegistry::issue(std::string_view user_id) {
  AuthToken token{random_hex(16), std::string(user_id), clock_() + ttl_};
  std::lock_guard lock(mutex_);
  tokens_[token.token] = token;
  return token;
}

std::string TokenRegistry::verify(std::string_view token) {
  std::lock_guard lock(mutex_);
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) throw Error(ErrorCode::InvalidToken, "missing or unknown token");
  if (clock_() >= it->second.expires_at) {
    throw Error(ErrorCode::TokenExpired, "token expired; log in again");
  }
  return it->second.user_id;
}

}  // namespace stockbabble
