#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "stockbabble/market_data.hpp"

namespace stockbabble {

struct LiveProviderConfig {
  std::string base_url;  // e.g. "https://data.example.com/api"
  std::string api_key;
  std::chrono::seconds cache_ttl{15 * 60};
  std::chrono::seconds timeout{10};

  // Reads STOCKBABBLE_DATA_URL and STOCKBABBLE_DATA_KEY. Missing values stay
  // empty; the provider reports them on first use.
  static LiveProviderConfig from_env();
};

// HTTP JSON provider. Endpoints, relative to base_url, all taking the key in
// an `X-Api-Key` header:
//   GET /v1/candles/{ticker}?days=N   {"ticker", "candles": [{date, open, ...}]}
//   GET /v1/quote/{ticker}            {"ticker", "price", "asOf"}
//   GET /v1/profile/{ticker}          profile object
//   GET /v1/news/{ticker}?limit=N     array of news objects
// 404 maps to UnknownTicker; transport failures, 401/403 and 5xx map to
// ProviderUnavailable. Responses are cached per request path for cache_ttl.
class LiveProvider final : public MarketDataProvider {
 public:
  explicit LiveProvider(LiveProviderConfig config, Clock clock = system_now);

  CandleSeries get_candles(std::string_view ticker, int lookback) const override;
  Quote get_quote(std::string_view ticker) const override;
  CompanyProfile get_profile(std::string_view ticker) const override;
  std::vector<NewsItem> get_news(std::string_view ticker, int limit) const override;

  // Number of HTTP requests actually sent (cache misses).
  std::size_t requests_sent() const;

 private:
  struct CacheEntry {
    Instant fetched;
    std::string body;
  };

  std::string fetch(const std::string& path, std::string_view ticker) const;

  LiveProviderConfig config_;
  Clock clock_;
  std::string scheme_host_port_;
  std::string path_prefix_;

  mutable std::mutex mutex_;
  mutable std::map<std::string, CacheEntry> cache_;
  mutable std::size_t requests_sent_ = 0;
};

}  // namespace stockbabble
