#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <thread>

#include "paths.hpp"
#include "provider_contract.hpp"
#include "stockbabble/live_provider.hpp"
#include "stockbabble/serialization.hpp"

using namespace stockbabble;

namespace {

// Serves the basic fixtures in the live provider's wire format.
class MockDataServer {
 public:
  explicit MockDataServer(std::string key) : key_(std::move(key)) {
    data_ = FixtureProvider::load(testpaths::fixtures("basic"));
    auto guarded = [this](auto body) {
      return [this, body](const httplib::Request& req, httplib::Response& res) {
        ++hits_;
        if (fail_.load()) {
          res.status = 503;
          return;
        }
        if (req.get_header_value("X-Api-Key") != key_) {
          res.status = 401;
          return;
        }
        try {
          res.set_content(body(req).dump(), "application/json");
        } catch (const Error& e) {
          res.status = e.code() == ErrorCode::UnknownTicker ? 404 : 400;
        }
      };
    };
    server_.Get(R"(/api/v1/candles/(\w+))", guarded([this](const httplib::Request& req) {
      const auto s = data_->get_candles(req.matches[1].str(), std::stoi(req.get_param_value("days")));
      Json candles = Json::array();
      for (const auto& c : s.candles) candles.push_back(to_json(c));
      return Json{{"ticker", s.ticker}, {"candles", candles}};
    }));
    server_.Get(R"(/api/v1/quote/(\w+))", guarded([this](const httplib::Request& req) {
      return to_json(data_->get_quote(req.matches[1].str()));
    }));
    server_.Get(R"(/api/v1/profile/(\w+))", guarded([this](const httplib::Request& req) {
      auto json = to_json(data_->get_profile(req.matches[1].str()));
      // Real feeds leave out what they do not know.
      if (!json["dividendReported"].get<bool>()) json.erase("annualDividend");
      json.erase("dividendReported");
      return json;
    }));
    server_.Get(R"(/api/v1/news/(\w+))", guarded([this](const httplib::Request& req) {
      // Deliberately unsorted and unlimited; the client must fix both.
      auto items = data_->get_news(req.matches[1].str(), 100);
      std::reverse(items.begin(), items.end());
      Json out = Json::array();
      for (const auto& n : items) out.push_back(to_json(n));
      return out;
    }));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockDataServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/api"; }
  int hits() const { return hits_.load(); }
  void set_failing(bool failing) { fail_ = failing; }

 private:
  std::string key_;
  std::shared_ptr<FixtureProvider> data_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> hits_{0};
  std::atomic<bool> fail_{false};
};

ErrorCode code_of(const std::function<void()>& fn) { return contract::code_of(fn); }

}  // namespace

TEST_CASE("live provider satisfies the provider contract") {
  MockDataServer server("secret");
  LiveProvider provider({server.url(), "secret"});
  contract::check_provider(provider);
}

TEST_CASE("missing configuration names the variable to set") {
  LiveProvider no_key({"http://127.0.0.1:9", ""});
  try {
    no_key.get_quote("ACME");
    FAIL("expected ProviderUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProviderUnavailable);
    CHECK(std::string(e.what()).find("STOCKBABBLE_DATA_KEY") != std::string::npos);
  }
  LiveProvider no_url({"", "k"});
  CHECK(code_of([&] { no_url.get_quote("ACME"); }) == ErrorCode::ProviderUnavailable);
  CHECK(no_key.requests_sent() == 0);
}

TEST_CASE("rejected key and server errors are ProviderUnavailable") {
  MockDataServer server("secret");
  LiveProvider wrong({server.url(), "nope"});
  CHECK(code_of([&] { wrong.get_quote("ACME"); }) == ErrorCode::ProviderUnavailable);
  server.set_failing(true);
  LiveProvider right({server.url(), "secret"});
  CHECK(code_of([&] { right.get_quote("ACME"); }) == ErrorCode::ProviderUnavailable);
}

TEST_CASE("unreachable host is ProviderUnavailable") {
  // Grab a free port, then close it.
  int port = 0;
  {
    httplib::Server s;
    port = s.bind_to_any_port("127.0.0.1");
  }
  LiveProviderConfig config{"http://127.0.0.1:" + std::to_string(port), "k"};
  config.timeout = std::chrono::seconds{2};
  LiveProvider provider(config);
  CHECK(code_of([&] { provider.get_quote("ACME"); }) == ErrorCode::ProviderUnavailable);
}

TEST_CASE("responses are cached for fifteen minutes") {
  MockDataServer server("secret");
  Instant now = *parse_rfc3339("2024-03-15T10:00:00Z");
  LiveProvider provider({server.url(), "secret"}, [&] { return now; });
  provider.get_quote("ACME");
  provider.get_quote("ACME");
  CHECK(server.hits() == 1);
  CHECK(provider.requests_sent() == 1);
  now += std::chrono::minutes{14};
  provider.get_quote("ACME");
  CHECK(server.hits() == 1);
  now += std::chrono::minutes{1};
  provider.get_quote("ACME");
  CHECK(server.hits() == 2);
  provider.get_news("ACME", 3);
  CHECK(server.hits() == 3);
}

TEST_CASE("config from environment") {
  ::setenv("STOCKBABBLE_DATA_URL", "https://data.example.com/api", 1);
  ::setenv("STOCKBABBLE_DATA_KEY", "abc", 1);
  const auto config = LiveProviderConfig::from_env();
  CHECK(config.base_url == "https://data.example.com/api");
  CHECK(config.api_key == "abc");
  CHECK(config.cache_ttl == std::chrono::minutes{15});
  ::unsetenv("STOCKBABBLE_DATA_URL");
  ::unsetenv("STOCKBABBLE_DATA_KEY");
}
