#include "stockbabble/market_data.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "stockbabble/error.hpp"
#include "stockbabble/serialization.hpp"

namespace stockbabble {
namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::MalformedFixture, message);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

nlohmann::json parse_json_file(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line number for the message.
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n');
    malformed(fmt::format("{}:{}: invalid JSON: {}", path.string(), line, e.what()));
  }
}

}  // namespace

bool is_well_formed(const Candle& c) noexcept {
  return c.low <= std::min(c.open, c.close) && c.high >= std::max(c.open, c.close) &&
         c.volume >= 0;
}

std::vector<double> CandleSeries::closes() const {
  std::vector<double> out;
  out.reserve(candles.size());
  for (const auto& c : candles) out.push_back(c.close);
  return out;
}

std::vector<double> CandleSeries::highs() const {
  std::vector<double> out;
  out.reserve(candles.size());
  for (const auto& c : candles) out.push_back(c.high);
  return out;
}

std::vector<double> CandleSeries::lows() const {
  std::vector<double> out;
  out.reserve(candles.size());
  for (const auto& c : candles) out.push_back(c.low);
  return out;
}

void sort_news(std::vector<NewsItem>& items) {
  std::stable_sort(items.begin(), items.end(), [](const NewsItem& a, const NewsItem& b) {
    if (a.published_at != b.published_at) return a.published_at > b.published_at;
    return a.headline < b.headline;
  });
}

std::vector<Candle> parse_candles_csv(std::string_view text, std::string_view source) {
  std::vector<Candle> candles;
  std::map<Date, std::size_t> first_line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto line = trim(text.substr(pos, eol == std::string_view::npos ? eol : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (!header_seen) {
      if (line != "date,open,high,low,close,volume") {
        malformed(fmt::format("{}:{}: expected header 'date,open,high,low,close,volume'", source,
                              line_no));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 6) {
      malformed(fmt::format("{}:{}: expected 6 fields, found {}", source, line_no, fields.size()));
    }
    Candle c;
    const auto date = parse_date(fields[0]);
    if (!date) malformed(fmt::format("{}:{}: bad date '{}'", source, line_no, fields[0]));
    c.date = *date;
    if (!parse_number(fields[1], c.open) || !parse_number(fields[2], c.high) ||
        !parse_number(fields[3], c.low) || !parse_number(fields[4], c.close) ||
        !parse_number(fields[5], c.volume)) {
      malformed(fmt::format("{}:{}: non-numeric price or volume", source, line_no));
    }
    if (!(c.open > 0 && c.high > 0 && c.low > 0 && c.close > 0)) {
      malformed(fmt::format("{}:{}: prices must be positive", source, line_no));
    }
    if (c.high < c.low) {
      malformed(fmt::format("{}:{}: high {} < low {}", source, line_no, c.high, c.low));
    }
    if (!is_well_formed(c)) {
      malformed(fmt::format("{}:{}: open/close outside the high-low range or negative volume",
                            source, line_no));
    }
    if (const auto [it, fresh] = first_line.emplace(c.date, line_no); !fresh) {
      malformed(fmt::format("{}:{}: duplicate date {} (first seen on line {})", source, line_no,
                            fields[0], it->second));
    }
    candles.push_back(c);
  }
  if (!header_seen) malformed(fmt::format("{}: empty file", source));
  std::sort(candles.begin(), candles.end(),
            [](const Candle& a, const Candle& b) { return a.date < b.date; });
  return candles;
}

std::shared_ptr<FixtureProvider> FixtureProvider::load(const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    malformed(fmt::format("{}: not a directory", directory.string()));
  }
  std::shared_ptr<FixtureProvider> provider(new FixtureProvider());

  const auto candle_dir = directory / "candles";
  if (fs::is_directory(candle_dir)) {
    for (const auto& entry : fs::directory_iterator(candle_dir)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
      const auto ticker = entry.path().stem().string();
      provider->candles_[ticker] =
          parse_candles_csv(read_file(entry.path()), entry.path().string());
    }
  }
  if (provider->candles_.empty()) {
    malformed(fmt::format("{}: no tickers found", directory.string()));
  }

  const auto profiles_path = directory / "profiles.json";
  if (!fs::exists(profiles_path)) malformed(fmt::format("{}: missing", profiles_path.string()));
  const auto profiles = parse_json_file(profiles_path);
  if (!profiles.is_array()) malformed(fmt::format("{}: expected an array", profiles_path.string()));
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    try {
      auto profile = profile_from_json(profiles[i]);
      if (provider->profiles_.count(profile.ticker)) {
        malformed(fmt::format("{}[{}]: duplicate ticker {}", profiles_path.string(), i,
                              profile.ticker));
      }
      provider->profiles_.emplace(profile.ticker, std::move(profile));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MalformedFixture) throw;
      malformed(fmt::format("{}[{}]: {}", profiles_path.string(), i, e.what()));
    }
  }

  const auto news_path = directory / "news.json";
  if (!fs::exists(news_path)) malformed(fmt::format("{}: missing", news_path.string()));
  const auto news = parse_json_file(news_path);
  if (!news.is_array()) malformed(fmt::format("{}: expected an array", news_path.string()));
  for (std::size_t i = 0; i < news.size(); ++i) {
    NewsItem item;
    try {
      item = news_from_json(news[i]);
    } catch (const Error& e) {
      malformed(fmt::format("{}[{}]: {}", news_path.string(), i, e.what()));
    }
    if (!provider->known(item.ticker)) {
      malformed(fmt::format("{}[{}]: news for unknown ticker {}", news_path.string(), i,
                            item.ticker));
    }
    provider->news_[item.ticker].push_back(std::move(item));
  }
  for (auto& [ticker, items] : provider->news_) sort_news(items);
  return provider;
}

bool FixtureProvider::known(std::string_view ticker) const {
  return candles_.count(ticker) > 0 || profiles_.count(ticker) > 0;
}

CandleSeries FixtureProvider::get_candles(std::string_view ticker, int lookback) const {
  if (lookback < 1) throw Error(ErrorCode::BadRequest, "lookback must be at least 1 day");
  if (!known(ticker)) {
    throw Error(ErrorCode::UnknownTicker, fmt::format("unknown ticker {}", ticker));
  }
  const auto it = candles_.find(ticker);
  if (it == candles_.end() || it->second.empty()) {
    throw Error(ErrorCode::EmptySeries, fmt::format("no candles for {}", ticker));
  }
  const auto& all = it->second;
  const auto count = std::min<std::size_t>(all.size(), static_cast<std::size_t>(lookback));
  CandleSeries series;
  series.ticker = std::string(ticker);
  series.candles.assign(all.end() - static_cast<long>(count), all.end());
  return series;
}

Quote FixtureProvider::get_quote(std::string_view ticker) const {
  const auto series = get_candles(ticker, 1);
  const auto& last = series.candles.back();
  return Quote{series.ticker, last.close, Instant{last.date}};
}

CompanyProfile FixtureProvider::get_profile(std::string_view ticker) const {
  const auto it = profiles_.find(ticker);
  if (it == profiles_.end()) {
    throw Error(ErrorCode::UnknownTicker, fmt::format("no profile for ticker {}", ticker));
  }
  return it->second;
}

std::vector<NewsItem> FixtureProvider::get_news(std::string_view ticker, int limit) const {
  if (limit < 1) throw Error(ErrorCode::BadRequest, "news limit must be at least 1");
  if (!known(ticker)) {
    throw Error(ErrorCode::UnknownTicker, fmt::format("unknown ticker {}", ticker));
  }
  const auto it = news_.find(ticker);
  if (it == news_.end()) return {};
  const auto count = std::min<std::size_t>(it->second.size(), static_cast<std::size_t>(limit));
  return {it->second.begin(), it->second.begin() + static_cast<long>(count)};
}

std::vector<CompanyProfile> FixtureProvider::known_profiles() const {
  std::vector<CompanyProfile> out;
  for (const auto& [ticker, profile] : profiles_) out.push_back(profile);
  return out;
}

std::vector<std::string> FixtureProvider::tickers() const {
  std::vector<std::string> out;
  for (const auto& [ticker, candles] : candles_) out.push_back(ticker);
  for (const auto& [ticker, profile] : profiles_) {
    if (!candles_.count(ticker)) out.push_back(ticker);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<MarketDataProvider> load_fixtures(const std::filesystem::path& directory) {
  return FixtureProvider::load(directory);
}

}  // namespace stockbabble
