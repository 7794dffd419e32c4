#include "stockbabble/live_provider.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <cstdlib>
#include <nlohmann/json.hpp>

#include "stockbabble/error.hpp"
#include "stockbabble/serialization.hpp"

namespace stockbabble {
namespace {

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

[[noreturn]] void unavailable(const std::string& message) {
  throw Error(ErrorCode::ProviderUnavailable, message);
}

nlohmann::json parse_body(const std::string& body, std::string_view what) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    unavailable(fmt::format("data provider returned malformed {} payload: {}", what, e.what()));
  }
}

}  // namespace

LiveProviderConfig LiveProviderConfig::from_env() {
  LiveProviderConfig config;
  config.base_url = env_or_empty("STOCKBABBLE_DATA_URL");
  config.api_key = env_or_empty("STOCKBABBLE_DATA_KEY");
  return config;
}

LiveProvider::LiveProvider(LiveProviderConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  // Split "scheme://host:port/prefix" so the prefix can be prepended to paths.
  const auto scheme_end = config_.base_url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = config_.base_url.find('/', host_start);
  scheme_host_port_ = config_.base_url.substr(0, path_start);
  if (path_start != std::string::npos) {
    path_prefix_ = config_.base_url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

std::size_t LiveProvider::requests_sent() const {
  std::lock_guard lock(mutex_);
  return requests_sent_;
}

std::string LiveProvider::fetch(const std::string& path, std::string_view ticker) const {
  if (config_.base_url.empty()) {
    unavailable("live data provider is not configured: set STOCKBABBLE_DATA_URL");
  }
  if (config_.api_key.empty()) {
    unavailable("live data provider has no API key: set STOCKBABBLE_DATA_KEY");
  }
  const auto now = clock_();
  {
    std::lock_guard lock(mutex_);
    const auto it = cache_.find(path);
    if (it != cache_.end() && now - it->second.fetched < config_.cache_ttl) return it->second.body;
  }

  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) unavailable(fmt::format("invalid data provider URL '{}'", config_.base_url));
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  const httplib::Headers headers{{"X-Api-Key", config_.api_key}, {"Accept", "application/json"}};
  const auto result = client.Get(path_prefix_ + path, headers);
  {
    std::lock_guard lock(mutex_);
    ++requests_sent_;
  }
  if (!result) {
    unavailable(fmt::format("data provider unreachable: {}", httplib::to_string(result.error())));
  }
  if (result->status == 404) {
    throw Error(ErrorCode::UnknownTicker, fmt::format("unknown ticker {}", ticker));
  }
  if (result->status == 401 || result->status == 403) {
    unavailable("data provider rejected the API key: check STOCKBABBLE_DATA_KEY");
  }
  if (result->status != 200) {
    unavailable(fmt::format("data provider answered HTTP {}", result->status));
  }

  std::lock_guard lock(mutex_);
  cache_[path] = CacheEntry{now, result->body};
  return result->body;
}

CandleSeries LiveProvider::get_candles(std::string_view ticker, int lookback) const {
  if (lookback < 1) throw Error(ErrorCode::BadRequest, "lookback must be at least 1 day");
  const auto body = fetch(fmt::format("/v1/candles/{}?days={}", ticker, lookback), ticker);
  const auto json = parse_body(body, "candles");
  CandleSeries series;
  series.ticker = std::string(ticker);
  try {
    for (const auto& item : json.at("candles")) series.candles.push_back(candle_from_json(item));
  } catch (const nlohmann::json::exception& e) {
    unavailable(fmt::format("data provider returned malformed candles: {}", e.what()));
  } catch (const Error& e) {
    unavailable(fmt::format("data provider returned malformed candles: {}", e.what()));
  }
  std::sort(series.candles.begin(), series.candles.end(),
            [](const Candle& a, const Candle& b) { return a.date < b.date; });
  for (std::size_t i = 0; i < series.candles.size(); ++i) {
    if (!is_well_formed(series.candles[i]) ||
        (i > 0 && series.candles[i].date == series.candles[i - 1].date)) {
      unavailable("data provider returned inconsistent candles");
    }
  }
  if (series.candles.empty()) {
    throw Error(ErrorCode::EmptySeries, fmt::format("no candles for {}", ticker));
  }
  if (series.candles.size() > static_cast<std::size_t>(lookback)) {
    series.candles.erase(series.candles.begin(),
                         series.candles.end() - static_cast<long>(lookback));
  }
  return series;
}

Quote LiveProvider::get_quote(std::string_view ticker) const {
  const auto json = parse_body(fetch(fmt::format("/v1/quote/{}", ticker), ticker), "quote");
  try {
    auto quote = quote_from_json(json);
    if (!(quote.price > 0)) unavailable("data provider returned a non-positive price");
    return quote;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ProviderUnavailable) throw;
    unavailable(fmt::format("data provider returned a malformed quote: {}", e.what()));
  }
}

CompanyProfile LiveProvider::get_profile(std::string_view ticker) const {
  const auto json = parse_body(fetch(fmt::format("/v1/profile/{}", ticker), ticker), "profile");
  try {
    return profile_from_json(json);
  } catch (const Error& e) {
    unavailable(fmt::format("data provider returned a malformed profile: {}", e.what()));
  }
}

std::vector<NewsItem> LiveProvider::get_news(std::string_view ticker, int limit) const {
  if (limit < 1) throw Error(ErrorCode::BadRequest, "news limit must be at least 1");
  const auto json =
      parse_body(fetch(fmt::format("/v1/news/{}?limit={}", ticker, limit), ticker), "news");
  std::vector<NewsItem> items;
  try {
    if (!json.is_array()) unavailable("data provider returned news that is not an array");
    for (const auto& item : json) items.push_back(news_from_json(item));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ProviderUnavailable) throw;
    unavailable(fmt::format("data provider returned malformed news: {}", e.what()));
  }
  sort_news(items);
  if (items.size() > static_cast<std::size_t>(limit)) items.resize(static_cast<std::size_t>(limit));
  return items;
}

}  // namespace stockbabble
