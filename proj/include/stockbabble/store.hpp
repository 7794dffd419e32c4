#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "stockbabble/portfolio.hpp"
#include "stockbabble/time.hpp"

namespace stockbabble {

struct UserRecord {
  std::string user_id;
  std::string username;
  std::string password_hash;  // never the plaintext
  Instant created_at;

  bool operator==(const UserRecord&) const = default;
};

// Single-file JSON store for users and portfolios. Every mutation rewrites the
// file through a temporary sibling and rename(), so readers of the file only
// ever see a complete document. An empty path keeps everything in memory.
class Store final : public PortfolioRepository {
 public:
  // Loads `path` when it exists. Throws Error(StoreFailure) on unreadable or
  // corrupt files.
  explicit Store(std::filesystem::path path, Clock clock = system_now);

  // Creates the user and an empty portfolio. Throws Error(UsernameTaken).
  UserRecord create_user(const std::string& username, const std::string& password_hash);
  std::optional<UserRecord> find_user_by_name(std::string_view username) const;
  std::optional<UserRecord> find_user(std::string_view user_id) const;
  std::size_t user_count() const;

  Portfolio load_portfolio(std::string_view user_id) const override;
  Portfolio update_portfolio(std::string_view user_id,
                             const std::function<void(Portfolio&)>& mutate) override;

  // The exact bytes written to disk.
  std::string serialize() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::string serialize_locked() const;
  void persist_locked() const;

  std::filesystem::path path_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, UserRecord, std::less<>> users_;  // by user id
  std::map<std::string, std::string, std::less<>> ids_by_name_;
  std::map<std::string, Portfolio, std::less<>> portfolios_;
};

}  // namespace stockbabble
