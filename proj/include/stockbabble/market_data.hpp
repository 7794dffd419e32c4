#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stockbabble/time.hpp"

namespace stockbabble {

// One daily bar. `date` is the bar's open day in UTC.
struct Candle {
  Date date;
  double open = 0;
  double high = 0;
  double low = 0;
  double close = 0;
  std::int64_t volume = 0;

  bool operator==(const Candle&) const = default;
};

// low <= min(open, close), high >= max(open, close), volume >= 0.
bool is_well_formed(const Candle& candle) noexcept;

enum class Interval { Daily };

struct CandleSeries {
  std::string ticker;
  Interval interval = Interval::Daily;
  std::vector<Candle> candles;  // strictly increasing dates

  std::vector<double> closes() const;
  std::vector<double> highs() const;
  std::vector<double> lows() const;

  bool operator==(const CandleSeries&) const = default;
};

struct Quote {
  std::string ticker;
  double price = 0;
  Instant as_of;

  bool operator==(const Quote&) const = default;
};

struct CompanyProfile {
  std::string ticker;
  std::string name;
  std::string ceo;
  std::string headquarters;
  std::string sector;
  std::string description;
  double annual_dividend = 0;
  bool dividend_reported = true;  // false when the source omitted the figure
  double market_cap = 0;

  bool operator==(const CompanyProfile&) const = default;
};

struct NewsItem {
  std::string ticker;
  std::string headline;
  std::string source;
  std::string url;
  Instant published_at;
  std::string summary;

  bool operator==(const NewsItem&) const = default;
};

// Source of prices, profiles and headlines. Implementations are read-only
// after construction and may be shared across threads.
//
// All methods throw Error with UnknownTicker when the symbol is not served and
// ProviderUnavailable when the backing service cannot be reached.
class MarketDataProvider {
 public:
  virtual ~MarketDataProvider() = default;

  // At most `lookback` newest daily candles, ascending. Throws EmptySeries
  // when the ticker is known but has no bars.
  virtual CandleSeries get_candles(std::string_view ticker, int lookback) const = 0;
  virtual Quote get_quote(std::string_view ticker) const = 0;
  virtual CompanyProfile get_profile(std::string_view ticker) const = 0;
  // At most `limit` items, newest first; equal timestamps ordered by headline.
  virtual std::vector<NewsItem> get_news(std::string_view ticker, int limit) const = 0;

  // Profiles this provider can enumerate up front. Remote providers may
  // return nothing.
  virtual std::vector<CompanyProfile> known_profiles() const { return {}; }
};

// Newest-first, ties by headline ascending. Shared by every provider.
void sort_news(std::vector<NewsItem>& items);

// Offline provider answering from a fixture directory:
//   candles/<TICKER>.csv   date,open,high,low,close,volume
//   profiles.json          array of profile objects
//   news.json              array of news objects, publishedAt in RFC 3339
class FixtureProvider final : public MarketDataProvider {
 public:
  // Throws Error(MalformedFixture) with file and line context.
  static std::shared_ptr<FixtureProvider> load(const std::filesystem::path& directory);

  CandleSeries get_candles(std::string_view ticker, int lookback) const override;
  Quote get_quote(std::string_view ticker) const override;
  CompanyProfile get_profile(std::string_view ticker) const override;
  std::vector<NewsItem> get_news(std::string_view ticker, int limit) const override;
  std::vector<CompanyProfile> known_profiles() const override;

  std::vector<std::string> tickers() const;

 private:
  FixtureProvider() = default;

  bool known(std::string_view ticker) const;

  std::map<std::string, std::vector<Candle>, std::less<>> candles_;
  std::map<std::string, CompanyProfile, std::less<>> profiles_;
  std::map<std::string, std::vector<NewsItem>, std::less<>> news_;
};

std::shared_ptr<MarketDataProvider> load_fixtures(const std::filesystem::path& directory);

// Parses one candles CSV body. `source` names the file in error messages.
std::vector<Candle> parse_candles_csv(std::string_view text, std::string_view source);

}  // namespace stockbabble
