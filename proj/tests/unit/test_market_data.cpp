#include <doctest.h>

#include <fstream>

#include "paths.hpp"
#include "provider_contract.hpp"
#include "stockbabble/error.hpp"
#include "stockbabble/market_data.hpp"

using namespace stockbabble;
namespace fs = std::filesystem;

namespace {

void write(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream(path) << text;
}

// Copies the basic fixture set so a test can break one file.
void copy_basic(const fs::path& to) {
  fs::copy(testpaths::fixtures("basic"), to, fs::copy_options::recursive);
}

std::string load_error(const fs::path& dir) {
  try {
    FixtureProvider::load(dir);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedFixture);
    return e.what();
  }
  FAIL("expected MalformedFixture");
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("fixture provider satisfies the provider contract") {
  const auto provider = FixtureProvider::load(testpaths::fixtures("basic"));
  contract::check_provider(*provider);
  CHECK(provider->tickers() == std::vector<std::string>{"ACME", "LONG"});
  CHECK(provider->known_profiles().size() == 2);
}

TEST_CASE("shipped fixtures load and cover the corpus companies") {
  const auto provider = FixtureProvider::load(testpaths::data("fixtures"));
  for (const auto* t : {"AAPL", "AMZN", "GOOGL", "AMD", "FB", "MSFT", "TSLA", "NVDA"}) {
    CAPTURE(t);
    CHECK(provider->get_candles(t, 250).candles.size() == 250);
    CHECK_FALSE(provider->get_news(t, 5).empty());
    CHECK(provider->get_profile(t).ticker == t);
  }
}

TEST_CASE("csv parsing") {
  const auto rows = parse_candles_csv(
      "date,open,high,low,close,volume\n2024-01-02,1,2,0.5,1.5,10\n2024-01-03,1.5,2,1,1.8,12\n",
      "x.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].close == 1.8);
  CHECK_THROWS_AS(parse_candles_csv("date,close\n2024-01-02,1\n", "x.csv"), Error);
  CHECK_THROWS_AS(parse_candles_csv("date,open,high,low,close,volume\n2024-01-02,1,2,0.5\n", "x"),
                  Error);
}

TEST_CASE("malformed fixtures point at the bad file and line") {
  SUBCASE("high below low") {
    testpaths::TempDir dir("fx");
    copy_basic(dir.path / "d");
    write(dir.path / "d/candles/ACME.csv",
          "date,open,high,low,close,volume\n2024-03-01,10,10.5,9.8,10.2,1000\n"
          "2024-03-04,10.2,9.0,10.0,10.4,1200\n");
    const auto msg = load_error(dir.path / "d");
    CHECK(contains(msg, "ACME.csv:3"));
  }
  SUBCASE("duplicate date") {
    testpaths::TempDir dir("fx");
    copy_basic(dir.path / "d");
    write(dir.path / "d/candles/ACME.csv",
          "date,open,high,low,close,volume\n2024-03-01,10,10.5,9.8,10.2,1000\n"
          "2024-03-01,10.2,10.6,10.0,10.4,1200\n");
    CHECK(contains(load_error(dir.path / "d"), "ACME.csv:3"));
  }
  SUBCASE("non-numeric price") {
    testpaths::TempDir dir("fx");
    copy_basic(dir.path / "d");
    write(dir.path / "d/candles/ACME.csv",
          "date,open,high,low,close,volume\n2024-03-01,10,ten,9.8,10.2,1000\n");
    CHECK(contains(load_error(dir.path / "d"), "ACME.csv:2"));
  }
  SUBCASE("broken json names its line") {
    testpaths::TempDir dir("fx");
    copy_basic(dir.path / "d");
    write(dir.path / "d/news.json", "[\n  {\"ticker\": \"ACME\",\n  oops\n]\n");
    CHECK(contains(load_error(dir.path / "d"), "news.json:3"));
  }
  SUBCASE("news for an unknown ticker") {
    testpaths::TempDir dir("fx");
    copy_basic(dir.path / "d");
    write(dir.path / "d/news.json",
          R"([{"ticker":"ZZZ","headline":"h","publishedAt":"2024-01-01T00:00:00Z"}])");
    CHECK(contains(load_error(dir.path / "d"), "ZZZ"));
  }
  SUBCASE("missing profiles") {
    testpaths::TempDir dir("fx");
    copy_basic(dir.path / "d");
    fs::remove(dir.path / "d/profiles.json");
    CHECK(contains(load_error(dir.path / "d"), "profiles.json"));
  }
  SUBCASE("empty directory") {
    testpaths::TempDir dir("fx");
    fs::create_directories(dir.path / "d/candles");
    CHECK(contains(load_error(dir.path / "d"), "no tickers"));
  }
}

TEST_CASE("news sort is stable on equal keys") {
  const auto t = *parse_rfc3339("2024-01-01T00:00:00Z");
  std::vector<NewsItem> items{{"A", "b", "s1", "", t, ""}, {"A", "a", "", "", t, ""},
                              {"A", "b", "s2", "", t, ""}};
  sort_news(items);
  CHECK(items[0].headline == "a");
  CHECK(items[1].source == "s1");
  CHECK(items[2].source == "s2");
}
