#include <doctest.h>

#include <fstream>
#include <set>
#include <thread>

#include "paths.hpp"
#include "shipped.hpp"
#include "stockbabble/auth.hpp"
#include "stockbabble/error.hpp"
#include "stockbabble/store.hpp"

using namespace stockbabble;

namespace {

const Instant t0 = *parse_rfc3339("2024-03-15T10:00:00Z");

}  // namespace

TEST_CASE("store survives a restart byte for byte") {
  testpaths::TempDir dir("store");
  const auto path = dir.path / "store.json";
  std::string written;
  {
    Store store(path, [] { return t0; });
    const auto a = store.create_user("isabelle", hash_password("correct horse", 1000));
    store.create_user("bob", hash_password("battery staple", 1000));
    store.update_portfolio(a.user_id, [](Portfolio& p) {
      apply_add(p, "AAPL", 10, 179.91, t0);
      apply_add(p, "MSFT", 3, 318.0 / 7.0, t0);
    });
    written = store.serialize();
    CHECK(shipped::read_file(path) == written);
  }
  Store reopened(path, [] { return t0; });
  CHECK(reopened.serialize() == written);
  CHECK(reopened.user_count() == 2);
  const auto isabelle = reopened.find_user_by_name("isabelle");
  REQUIRE(isabelle);
  CHECK(reopened.load_portfolio(isabelle->user_id).positions.at("MSFT").cost_basis ==
        3 * (318.0 / 7.0));
  // A write with no changes reproduces the same bytes.
  reopened.update_portfolio(isabelle->user_id, [](Portfolio&) {});
  CHECK(shipped::read_file(path) == written);
  // No temporary files left behind.
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path)) ++files;
  CHECK(files == 1);
}

TEST_CASE("usernames are unique") {
  Store store("");
  store.create_user("isabelle", "h");
  try {
    store.create_user("isabelle", "h2");
    FAIL("expected UsernameTaken");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UsernameTaken);
  }
  CHECK(store.user_count() == 1);
}

TEST_CASE("failed mutations store nothing") {
  Store store("", [] { return t0; });
  const auto u = store.create_user("u", "h");
  store.update_portfolio(u.user_id, [](Portfolio& p) { apply_add(p, "A", 1, 10, t0); });
  const auto before = store.serialize();
  CHECK_THROWS_AS(store.update_portfolio(u.user_id,
                                         [](Portfolio& p) {
                                           apply_add(p, "B", 1, 10, t0);
                                           apply_remove(p, "C", 1, t0);
                                         }),
                  Error);
  CHECK(store.serialize() == before);
  CHECK_THROWS_AS(store.load_portfolio("u_nobody"), Error);
}

TEST_CASE("corrupt store files are rejected") {
  testpaths::TempDir dir("store");
  const auto path = dir.path / "store.json";
  std::ofstream(path) << "{\"version\": 1, \"users\": [";
  try {
    Store store(path);
    FAIL("expected StoreFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StoreFailure);
  }
}

TEST_CASE("concurrent updates for one user are serialized") {
  Store store("", [] { return t0; });
  const auto u = store.create_user("u", "h");
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      for (int j = 0; j < 25; ++j) {
        store.update_portfolio(u.user_id, [](Portfolio& p) { apply_add(p, "A", 1, 10, t0); });
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(store.load_portfolio(u.user_id).positions.at("A").shares == 200);
}

TEST_CASE("password hashing") {
  const auto h = hash_password("correct horse battery", 1000);
  CHECK(h.rfind("pbkdf2-sha256$1000$", 0) == 0);
  CHECK(h.find("correct") == std::string::npos);
  CHECK(verify_password("correct horse battery", h));
  CHECK_FALSE(verify_password("correct horse batterz", h));
  CHECK_FALSE(verify_password("x", "garbage"));
  CHECK_FALSE(verify_password("x", "pbkdf2-sha256$abc$00$00"));
  // Salted: same password, different hash.
  CHECK(hash_password("same", 1000) != hash_password("same", 1000));
}

TEST_CASE("tokens") {
  Instant now = t0;
  TokenRegistry registry([&] { return now; });
  const auto token = registry.issue("u_1");
  CHECK(token.token.size() == 32);
  CHECK(token.expires_at == t0 + std::chrono::hours{24});
  CHECK(registry.verify(token.token) == "u_1");
  CHECK_THROWS_AS(registry.verify("deadbeef"), Error);
  now += std::chrono::hours{24} - std::chrono::seconds{1};
  CHECK(registry.verify(token.token) == "u_1");
  now += std::chrono::seconds{1};
  for (int i = 0; i < 2; ++i) {
    try {
      registry.verify(token.token);
      FAIL("expected TokenExpired");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TokenExpired);
    }
  }
  std::set<std::string> seen;
  for (int i = 0; i < 1000; ++i) CHECK(seen.insert(registry.issue("u").token).second);
  CHECK(random_hex(8).size() == 16);
}
