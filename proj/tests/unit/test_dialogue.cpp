#include <doctest.h>

#include <set>

#include "shipped.hpp"
#include "stockbabble/error.hpp"
#include "stockbabble/recommender.hpp"

using namespace stockbabble;
using namespace stockbabble::dialogue;
using nlu::Intent;

namespace {

const Instant t0 = *parse_rfc3339("2026-10-01T12:00:00Z");

std::vector<std::string> kinds(const ChatResponse& r) {
  std::vector<std::string> out;
  for (const auto& c : r.components) out.emplace_back(c.kind());
  return out;
}

template <typename T>
const T& only(const ChatResponse& r) {
  REQUIRE(r.components.size() == 1);
  const auto* p = std::get_if<T>(&r.components[0].payload);
  REQUIRE(p);
  return *p;
}

struct Fixture {
  App app = shipped::app([] { return t0; });
  Session session;
  Fixture() {
    session.session_id = "s1";
    session.user_id = app.store->create_user("isabelle", "h").user_id;
  }
  ChatResponse say(std::string_view text) { return app.engine->handle(session, text); }
};

// Provider that always fails, to check the error path.
class DownProvider final : public MarketDataProvider {
 public:
  CandleSeries get_candles(std::string_view, int) const override { fail(); }
  Quote get_quote(std::string_view) const override { fail(); }
  CompanyProfile get_profile(std::string_view) const override { fail(); }
  std::vector<NewsItem> get_news(std::string_view, int) const override { fail(); }

 private:
  [[noreturn]] static void fail() { throw Error(ErrorCode::ProviderUnavailable, "feed is down"); }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "price question gives a chart and the two follow-ups") {
  const auto r = say("What is the stock price of Apple");
  CHECK(r.suggestions == std::vector<std::string>{"Show the company profile for Apple",
                                                  "Give me a recommendation for Apple"});
  const auto& chart = only<Chart>(r);
  CHECK(chart.series.ticker == "AAPL");
  CHECK(chart.series.candles.size() == kChartLookback);
  CHECK(chart.available_overlays.size() == 6);
  CHECK(chart.default_visible_overlays == std::vector<indicators::IndicatorId>{indicators::IndicatorId::SMA20});
  REQUIRE(chart.overlays.size() == 6);
  CHECK(chart.overlays[0].values.size() == kChartLookback - 19);
  CHECK(r.minimize_previous);
  CHECK(r.messages.front().find("AAPL") != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "suggestion contract holds for every company") {
  for (const auto& profile : app.provider->known_profiles()) {
    const auto name = *app.corpus->company_name(profile.ticker);
    const auto r = say("what is the price of " + name);
    CAPTURE(name);
    CHECK(r.suggestions == std::vector<std::string>{"Show the company profile for " + name,
                                                    "Give me a recommendation for " + name});
  }
}

TEST_CASE_FIXTURE(Fixture, "component ids are unique within a session") {
  std::set<std::string> ids;
  for (int i = 0; i < 10; ++i) {
    for (const auto* text : {"price of tesla", "news for amd", "what is an etf"}) {
      for (const auto& c : say(text).components) CHECK(ids.insert(c.component_id).second);
    }
  }
  CHECK(ids.size() == 30);
  CHECK(ids.count("s1-c1") == 1);
  CHECK(session.history.size() == 30);
}

TEST_CASE_FIXTURE(Fixture, "recommendation matches the recommender on the same data") {
  const auto r = say("Give me a recommendation for Tesla");
  const auto& gauge = only<RecommendationGauge>(r);
  const auto direct = recommend("TSLA", app.provider->get_candles("TSLA", kAnalysisLookback));
  CHECK(gauge.recommendation == direct);
  CHECK(gauge.explanation == explain(direct));
  CHECK(r.messages.front().find(std::string(display_name(direct.label))) != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "profiles answer the specific question") {
  CHECK(say("Who is the CEO of Facebook").messages.front() ==
        "The CEO of Facebook is Mark Zuckerberg.");
  CHECK(say("does AMD pay a dividend").messages.front() == "AMD does not report a dividend.");
  CHECK(say("does Amazon pay a dividend").messages.front() == "Amazon does not pay a dividend.");
  CHECK(kinds(say("tell me about microsoft")) == std::vector<std::string>{"profileCard"});
}

TEST_CASE_FIXTURE(Fixture, "terms") {
  const auto r = say("What is a bull market");
  const auto& card = only<TermCard>(r);
  CHECK(card.entry.key == "bull_market");
  REQUIRE_FALSE(card.related.empty());
  CHECK(card.related[0].key == "bear_market");
  CHECK(r.suggestions.size() >= 2);
  for (const auto& s : r.suggestions) CHECK(s != "What is a bull market");
}

TEST_CASE_FIXTURE(Fixture, "news") {
  const auto r = say("Show me the latest news for Apple");
  const auto& news = only<NewsTimeline>(r);
  CHECK(news.ticker == "AAPL");
  CHECK(news.items.size() <= static_cast<std::size_t>(kNewsLimit));
  for (std::size_t i = 1; i < news.items.size(); ++i) {
    CHECK(news.items[i - 1].published_at >= news.items[i].published_at);
  }
}

TEST_CASE_FIXTURE(Fixture, "portfolio conversation") {
  CHECK(say("Show my portfolio").messages.front().find("empty") != std::string::npos);
  const auto added = say("Add 10 shares of Apple to my portfolio");
  const auto& table = only<PortfolioTable>(added);
  REQUIRE(table.valuation.positions.size() == 1);
  CHECK(table.valuation.positions[0].shares == 10);
  const double price = app.provider->get_quote("AAPL").price;
  CHECK(table.valuation.positions[0].cost_basis == doctest::Approx(10 * price));

  CHECK(say("add apple to my portfolio").messages.front().find("How many shares") == 0);
  say("Buy 5 shares of Tesla");
  CHECK(app.portfolio->portfolio(session.user_id).positions.size() == 2);
  say("Sell 3 shares of Apple");
  CHECK(app.portfolio->portfolio(session.user_id).positions.at("AAPL").shares == 7);
  say("remove tesla from my portfolio");
  CHECK(app.portfolio->portfolio(session.user_id).positions.count("TSLA") == 0);
  CHECK(say("sell 100 shares of apple").components.empty());
  CHECK(say("remove nvidia from my portfolio").messages.front() ==
        "You don't hold any Nvidia shares.");
}

TEST_CASE_FIXTURE(Fixture, "anonymous sessions cannot use a portfolio") {
  Session anon;
  anon.session_id = "anon";
  const auto r = app.engine->handle(anon, "Show my portfolio");
  CHECK(r.components.empty());
  CHECK(r.messages.front() == "You need to be signed in to use a portfolio.");
}

TEST_CASE_FIXTURE(Fixture, "greetings, help and fallback") {
  const auto hi = say("hello");
  CHECK(hi.components.empty());
  CHECK_FALSE(hi.minimize_previous);
  CHECK(hi.suggestions.size() == 3);
  CHECK(kinds(say("help")) == std::vector<std::string>{"text"});
  const auto lost = say("purple monkey dishwasher");
  CHECK(session.history.back().intent == Intent::Fallback);
  CHECK(lost.suggestions == std::vector<std::string>{"What can you do?", "Help"});
  CHECK_THROWS_AS(say("   "), Error);
}

TEST_CASE_FIXTURE(Fixture, "follow-ups borrow the last company") {
  say("Who is the CEO of Apple");
  const auto r = say("what is an etf");
  CHECK(session.last_company == "AAPL");
  CHECK(r.suggestions.size() >= 2);
  const auto rec = say("what is rsi");
  CHECK(kinds(rec) == std::vector<std::string>{"termCard"});
}

TEST_CASE("short history turns into an explanation, not a crash") {
  AppConfig config;
  config.data_dir = testpaths::data();
  config.fixtures_dir = testpaths::fixtures("basic");
  const auto app = build_app(config);
  Session s;
  s.session_id = "x";
  const auto r = app.engine->handle(s, "Give me a recommendation for ACME");
  CHECK(r.components.empty());
  CHECK(r.messages.front().find("enough price history") != std::string::npos);
  CHECK(r.messages.front().find("SMA20") != std::string::npos);
  // Ten bars still chart; the overlays are just empty.
  const auto chart = app.engine->handle(s, "what is the price of acme");
  REQUIRE(chart.components.size() == 1);
  const auto& c = std::get<Chart>(chart.components[0].payload);
  CHECK(c.series.candles.size() == 10);
  for (const auto& o : c.overlays) CHECK(o.values.empty());
  const auto news = app.engine->handle(s, "news for long");
  CHECK(news.components.empty());
}

TEST_CASE("provider outages become apologies") {
  auto base = shipped::app();
  auto down = std::make_shared<DownProvider>();
  Engine engine(down, base.corpus, base.glossary,
                std::make_shared<PortfolioBook>(base.store, down));
  Session s;
  s.session_id = "d";
  const auto r = engine.handle(s, "What is the stock price of Apple");
  CHECK(r.components.empty());
  CHECK_FALSE(r.minimize_previous);
  CHECK(r.messages.size() == 1);
  CHECK(r.messages.front().find("feed is down") != std::string::npos);
  CHECK(r.suggestions.size() == 2);
}

TEST_CASE("scripts") {
  const auto lines = read_script("# comment\nhello\n\n  \nWhat is a stock\n");
  CHECK(lines == std::vector<std::string>{"hello", "What is a stock"});
  auto app = shipped::app();
  Session s;
  s.session_id = "script";
  const auto transcript = app.engine->run_script(s, {"hello", "What is a stock", " "});
  REQUIRE(transcript.size() == 3);
  CHECK(transcript[1].intent == Intent::TradingTerm);
  CHECK(transcript[1].component_kinds == std::vector<std::string>{"termCard"});
  CHECK(transcript[2].intent == Intent::Fallback);
  const auto text = format_transcript({transcript[0]});
  CHECK(text.rfind("> hello\n  intent: Greeting\n  components: -\n  suggestions: ", 0) == 0);
}
