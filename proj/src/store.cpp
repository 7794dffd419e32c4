#include "stockbabble/store.hpp"

#include <fcntl.h>
#include <fmt/format.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "stockbabble/auth.hpp"
#include "stockbabble/error.hpp"
#include "stockbabble/serialization.hpp"

namespace stockbabble {
namespace {

constexpr int kStoreVersion = 1;

[[noreturn]] void store_failure(const std::string& message) {
  throw Error(ErrorCode::StoreFailure, message);
}

void write_all(int fd, const std::string& data, const std::string& where) {
  std::size_t written = 0;
  while (written < data.size()) {
    const auto n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      store_failure(fmt::format("{}: write failed: {}", where, std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
}

}  // namespace

Store::Store(std::filesystem::path path, Clock clock)
    : path_(std::move(path)), clock_(std::move(clock)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) store_failure(fmt::format("{}: cannot open store", path_.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    const auto doc = Json::parse(buffer.str());
    if (doc.at("version").get<int>() != kStoreVersion) {
      store_failure(fmt::format("{}: unsupported store version", path_.string()));
    }
    for (const auto& u : doc.at("users")) {
      UserRecord user;
      user.user_id = u.at("userId").get<std::string>();
      user.username = u.at("username").get<std::string>();
      user.password_hash = u.at("passwordHash").get<std::string>();
      const auto created = parse_rfc3339(u.at("createdAt").get<std::string>());
      if (!created) store_failure(fmt::format("{}: bad createdAt", path_.string()));
      user.created_at = *created;
      ids_by_name_.emplace(user.username, user.user_id);
      users_.emplace(user.user_id, std::move(user));
    }
    for (const auto& [user_id, p] : doc.at("portfolios").items()) {
      portfolios_.emplace(user_id, portfolio_from_json(p));
    }
  } catch (const nlohmann::json::exception& e) {
    store_failure(fmt::format("{}: corrupt store: {}", path_.string(), e.what()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::StoreFailure) throw;
    store_failure(fmt::format("{}: corrupt store: {}", path_.string(), e.what()));
  }
}

UserRecord Store::create_user(const std::string& username, const std::string& password_hash) {
  std::lock_guard lock(mutex_);
  if (ids_by_name_.count(username)) {
    throw Error(ErrorCode::UsernameTaken, fmt::format("username '{}' is taken", username));
  }
  UserRecord user;
  do {
    user.user_id = "u_" + random_hex(8);
  } while (users_.count(user.user_id));
  user.username = username;
  user.password_hash = password_hash;
  user.created_at = clock_();

  users_.emplace(user.user_id, user);
  ids_by_name_.emplace(username, user.user_id);
  portfolios_.emplace(user.user_id, Portfolio{user.user_id, {}, user.created_at});
  try {
    persist_locked();
  } catch (...) {
    users_.erase(user.user_id);
    ids_by_name_.erase(username);
    portfolios_.erase(user.user_id);
    throw;
  }
  return user;
}

std::optional<UserRecord> Store::find_user_by_name(std::string_view username) const {
  std::lock_guard lock(mutex_);
  const auto it = ids_by_name_.find(username);
  if (it == ids_by_name_.end()) return std::nullopt;
  return users_.at(it->second);
}

std::optional<UserRecord> Store::find_user(std::string_view user_id) const {
  std::lock_guard lock(mutex_);
  const auto it = users_.find(user_id);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::size_t Store::user_count() const {
  std::lock_guard lock(mutex_);
  return users_.size();
}

Portfolio Store::load_portfolio(std::string_view user_id) const {
  std::lock_guard lock(mutex_);
  const auto it = portfolios_.find(user_id);
  if (it == portfolios_.end()) {
    throw Error(ErrorCode::UnknownUser, fmt::format("unknown user {}", user_id));
  }
  return it->second;
}

Portfolio Store::update_portfolio(std::string_view user_id,
                                  const std::function<void(Portfolio&)>& mutate) {
  std::lock_guard lock(mutex_);
  const auto it = portfolios_.find(user_id);
  if (it == portfolios_.end()) {
    throw Error(ErrorCode::UnknownUser, fmt::format("unknown user {}", user_id));
  }
  auto updated = it->second;
  mutate(updated);
  auto previous = std::exchange(it->second, updated);
  try {
    persist_locked();
  } catch (...) {
    it->second = std::move(previous);
    throw;
  }
  return updated;
}

std::string Store::serialize() const {
  std::lock_guard lock(mutex_);
  return serialize_locked();
}

std::string Store::serialize_locked() const {
  Json users = Json::array();
  for (const auto& [id, u] : users_) {
    users.push_back({{"userId", u.user_id},
                     {"username", u.username},
                     {"passwordHash", u.password_hash},
                     {"createdAt", format_rfc3339(u.created_at)}});
  }
  Json portfolios = Json::object();
  for (const auto& [id, p] : portfolios_) portfolios[id] = to_json(p);
  const Json doc{{"version", kStoreVersion}, {"users", std::move(users)},
                 {"portfolios", std::move(portfolios)}};
  return doc.dump(2) + "\n";
}

void Store::persist_locked() const {
  if (path_.empty()) return;
  const auto data = serialize_locked();
  const auto tmp = path_.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) store_failure(fmt::format("{}: cannot create: {}", tmp, std::strerror(errno)));
  try {
    write_all(fd, data, tmp);
    if (::fsync(fd) != 0) store_failure(fmt::format("{}: fsync failed: {}", tmp, std::strerror(errno)));
  } catch (...) {
    ::close(fd);
    ::unlink(tmp.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path_.c_str()) != 0) {
    ::unlink(tmp.c_str());
    store_failure(fmt::format("{}: rename failed: {}", path_.string(), std::strerror(errno)));
  }
}

}  // namespace stockbabble
