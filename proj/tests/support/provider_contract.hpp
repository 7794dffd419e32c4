#pragma once

// Behaviour every MarketDataProvider must show when backed by the data in
// tests/fixtures/basic. Run against the fixture provider and, through a local
// mock server, the live provider.

#include <doctest.h>

#include "stockbabble/error.hpp"
#include "stockbabble/market_data.hpp"

namespace contract {

using namespace stockbabble;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::BadRequest;
}

inline Instant at(const char* text) { return *parse_rfc3339(text); }

inline void check_provider(const MarketDataProvider& p) {
  SUBCASE("candles: newest N, ascending, well formed") {
    const auto s = p.get_candles("ACME", 5);
    CHECK(s.ticker == "ACME");
    REQUIRE(s.candles.size() == 5);
    CHECK(format_date(s.candles.front().date) == "2024-03-08");
    CHECK(format_date(s.candles.back().date) == "2024-03-14");
    for (std::size_t i = 0; i < s.candles.size(); ++i) {
      CHECK(is_well_formed(s.candles[i]));
      if (i > 0) CHECK(s.candles[i - 1].date < s.candles[i].date);
    }
    CHECK(s.candles.back().close == 11.10);
    CHECK(s.candles.back().volume == 2100);
  }
  SUBCASE("candles: lookback longer than history returns everything") {
    CHECK(p.get_candles("ACME", 1000).candles.size() == 10);
    CHECK(p.get_candles("LONG", 250).candles.size() == 250);
  }
  SUBCASE("unknown ticker") {
    CHECK(code_of([&] { p.get_candles("NOPE", 5); }) == ErrorCode::UnknownTicker);
    CHECK(code_of([&] { p.get_quote("NOPE"); }) == ErrorCode::UnknownTicker);
    CHECK(code_of([&] { p.get_profile("NOPE"); }) == ErrorCode::UnknownTicker);
    CHECK(code_of([&] { p.get_news("NOPE", 3); }) == ErrorCode::UnknownTicker);
  }
  SUBCASE("bad arguments") {
    CHECK(code_of([&] { p.get_candles("ACME", 0); }) == ErrorCode::BadRequest);
    CHECK(code_of([&] { p.get_news("ACME", 0); }) == ErrorCode::BadRequest);
  }
  SUBCASE("quote is the latest close") {
    const auto q = p.get_quote("ACME");
    CHECK(q.ticker == "ACME");
    CHECK(q.price == 11.10);
    CHECK(q.as_of == at("2024-03-14T00:00:00Z"));
  }
  SUBCASE("profiles keep an omitted dividend distinct from zero") {
    const auto acme = p.get_profile("ACME");
    CHECK(acme.name == "Acme Corp");
    CHECK(acme.ceo == "Wile E. Coyote");
    CHECK_FALSE(acme.dividend_reported);
    const auto long_ = p.get_profile("LONG");
    CHECK(long_.dividend_reported);
    CHECK(long_.annual_dividend == 1.25);
  }
  SUBCASE("news newest first, ties by headline, limited") {
    const auto items = p.get_news("ACME", 5);
    REQUIRE(items.size() == 5);
    CHECK(items[0].headline == "Acme hires new engineers");
    CHECK(items[1].headline == "Beta test of anvils begins");
    CHECK(items[2].headline == "Analysts upgrade Acme");
    CHECK(items[3].headline == "Quarterly results beat estimates");
    CHECK(items[3].published_at == at("2024-03-12T14:30:00Z"));
    CHECK(items[4].headline == "Acme ships rocket skates");
    CHECK(p.get_news("ACME", 50).size() == 7);
  }
  SUBCASE("a ticker without news gets an empty list") {
    CHECK(p.get_news("LONG", 5).empty());
  }
}

}  // namespace contract
