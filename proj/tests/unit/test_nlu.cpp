#include <doctest.h>

#include <random>
#include <set>

#include "shipped.hpp"
#include "stockbabble/error.hpp"
#include "stockbabble/nlu.hpp"

using namespace stockbabble;
using namespace stockbabble::nlu;

namespace {

const App& the_app() {
  static const App app = shipped::app();
  return app;
}
const Corpus& corpus() { return *the_app().corpus; }

IntentMatch classify_text(std::string_view text) { return classify(normalize(text), corpus()); }

// Fills slots with fixed surfaces that resolve through the shipped dictionary.
std::string instantiate(const std::string& tmpl) {
  std::string out = tmpl;
  const std::vector<std::pair<std::string, std::string>> fills{
      {"{company}", "apple"}, {"{term}", "dividend"}, {"{quantity}", "10"}};
  for (const auto& [slot, text] : fills) {
    for (auto pos = out.find(slot); pos != std::string::npos; pos = out.find(slot)) {
      out.replace(pos, slot.size(), text);
    }
  }
  return out;
}

// Exhaustive reference for entity spans: list every dictionary span, then
// repeatedly take the one with the smallest start (longest on ties) that
// does not overlap what was already taken.
std::vector<TokenSpan> span_oracle(const std::vector<std::string>& tokens, const Corpus& c) {
  std::vector<TokenSpan> all;
  for (std::size_t b = 0; b < tokens.size(); ++b) {
    for (std::size_t e = b + 1; e <= tokens.size(); ++e) {
      std::vector<std::string> key(tokens.begin() + b, tokens.begin() + e);
      if (c.dictionary().count(key)) all.push_back({b, e});
    }
  }
  std::vector<TokenSpan> chosen;
  while (true) {
    const TokenSpan* best = nullptr;
    for (const auto& s : all) {
      bool clash = false;
      for (const auto& t : chosen) clash = clash || s.overlaps(t) || s.begin < t.end;
      if (clash) continue;
      if (!best || s.begin < best->begin || (s.begin == best->begin && s.end > best->end)) best = &s;
    }
    if (!best) break;
    chosen.push_back(*best);
  }
  return chosen;
}

}  // namespace

TEST_CASE("normalization") {
  CHECK(normalize("What's the price of Amazon today?").normalized ==
        "whats the price of amazon today");
  CHECK(normalize("What\xE2\x80\x99s up").normalized == "whats up");
  CHECK(normalize("  P/E   ratio!! ").tokens == std::vector<std::string>{"p", "e", "ratio"});
  CHECK(normalize("caf\xC3\xA9 au lait").tokens.front() == "caf\xC3\xA9");
  CHECK_THROWS_AS(normalize(""), Error);
  try {
    normalize(" ?! ");
    FAIL("expected EmptyUtterance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyUtterance);
  }
}

TEST_CASE("token set f1") {
  CHECK(token_set_f1({"a", "b"}, {"a", "b"}) == 1.0);
  CHECK(token_set_f1({"a", "b", "b"}, {"b", "a"}) == 1.0);
  CHECK(token_set_f1({"a"}, {"b"}) == 0.0);
  CHECK(token_set_f1({"a", "b", "c", "d"}, {"a", "b"}) == doctest::Approx(2.0 / 3.0));
  CHECK(token_set_f1({}, {"a"}) == 0.0);
}

TEST_CASE("shipped corpus is valid") {
  CHECK_NOTHROW(corpus().validate());
  for (const auto intent : kClassifiableIntents) {
    CAPTURE(to_string(intent));
    CHECK(corpus().templates(intent).size() >= 3);
  }
}

TEST_CASE("every template classifies to its own intent at full confidence") {
  int total = 0;
  for (const auto& [intent, templates] : corpus().all_templates()) {
    for (const auto& t : templates) {
      const auto text = instantiate(t.text);
      CAPTURE(text);
      const auto m = classify_text(text);
      CHECK(m.intent == intent);
      CHECK(m.confidence == 1.0);
      ++total;
    }
  }
  CHECK(total >= 30);
}

TEST_CASE("named examples") {
  const auto price = classify_text("What's the price of Amazon today?");
  CHECK(price.intent == Intent::StockInformation);
  REQUIRE(price.first(EntityKind::Company));
  CHECK(price.first(EntityKind::Company)->resolved == "AMZN");

  const auto ceo = classify_text("Who is the CEO of Facebook");
  CHECK(ceo.intent == Intent::CompanyProfile);
  CHECK(ceo.first(EntityKind::Company)->resolved == "FB");

  const auto term = classify_text("what stocks are");
  CHECK(term.intent == Intent::TradingTerm);
  CHECK(term.first(EntityKind::Term)->resolved == "stock");
}

TEST_CASE("held-out paraphrases") {
  const auto items = shipped::paraphrases();
  REQUIRE(items.size() >= 50);
  int correct = 0;
  for (const auto& item : items) {
    const auto m = classify_text(item.text);
    if (to_string(m.intent) == item.intent) {
      ++correct;
    } else {
      MESSAGE(item.text << " -> " << to_string(m.intent) << " (expected " << item.intent << ")");
    }
  }
  const double accuracy = static_cast<double>(correct) / static_cast<double>(items.size());
  MESSAGE("paraphrase accuracy " << correct << "/" << items.size());
  CHECK(accuracy >= 0.80);
}

TEST_CASE("entities") {
  SUBCASE("quantities only next to share words") {
    const auto m = classify_text("Add 10 shares of Apple to my portfolio");
    CHECK(m.intent == Intent::PortfolioAdd);
    REQUIRE(m.first(EntityKind::ShareQuantity));
    CHECK(m.first(EntityKind::ShareQuantity)->quantity() == 10);
    CHECK(m.first(EntityKind::Company)->resolved == "AAPL");
    CHECK_FALSE(classify_text("apple in 10 days").first(EntityKind::ShareQuantity));
  }
  SUBCASE("longest alias wins") {
    const auto m = classify_text("what is a bull market");
    REQUIRE(m.entities.size() == 1);
    CHECK(m.entities[0].resolved == "bull_market");
    CHECK(m.entities[0].surface == "bull market");
  }
  SUBCASE("tickers and possessives") {
    CHECK(classify_text("msft price").first(EntityKind::Company)->resolved == "MSFT");
    CHECK(classify_text("who is google's ceo").first(EntityKind::Company)->resolved == "GOOGL");
  }
  SUBCASE("multiple companies keep their order") {
    const auto m = classify_text("compare apple and tesla");
    REQUIRE(m.entities.size() == 2);
    CHECK(m.entities[0].resolved == "AAPL");
    CHECK(m.entities[1].resolved == "TSLA");
  }
}

TEST_CASE("low scores fall back but keep entities") {
  const auto m = classify_text("purple monkey dishwasher apple");
  CHECK(m.intent == Intent::Fallback);
  CHECK(m.confidence < corpus().threshold());
  REQUIRE(m.first(EntityKind::Company));
  CHECK(m.first(EntityKind::Company)->resolved == "AAPL");
}

TEST_CASE("ties go to declaration order") {
  Corpus c;
  c.add_template(Intent::News, "alpha beta");
  c.add_template(Intent::StockInformation, "alpha gamma");
  const auto m = classify(normalize("alpha"), c);
  CHECK(m.intent == Intent::StockInformation);
}

TEST_CASE("extraction matches the span-enumeration reference") {
  const std::vector<std::string> vocab{
      "bull", "market", "bear", "stock", "exchange", "apple", "inc", "advanced", "micro",
      "devices", "amazon", "com", "limit", "order", "of", "the", "what", "is", "p", "e", "ratio",
      "moving", "average", "market", "cap", "short", "selling", "index", "fund"};
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) text += vocab[pick(rng)] + " ";
    const auto u = normalize(text);
    CAPTURE(text);
    std::vector<TokenSpan> got;
    for (const auto& e : extract_entities(u, corpus())) got.push_back(e.span);
    CHECK(got == span_oracle(u.tokens, corpus()));
  }
}

TEST_CASE("corpus loading errors") {
  CHECK_THROWS_AS(Corpus::parse("{not json"), Error);
  CHECK_THROWS_AS(Corpus::parse(R"({"intents": {"Nope": ["a", "b", "c"]}, "companies": []})"),
                  Error);
  const auto few = Corpus::parse(R"({"intents": {"Greeting": ["hi"]}, "companies": []})");
  CHECK_THROWS_AS(few.validate(), Error);
  Corpus clash;
  CHECK(clash.add_alias(EntityKind::Company, "Apple", "AAPL", "Apple"));
  CHECK(clash.add_alias(EntityKind::Company, "apple", "AAPL", "Apple"));
  CHECK_FALSE(clash.add_alias(EntityKind::Term, "APPLE", "fruit", "Fruit"));
}

TEST_CASE("suggestions") {
  const auto price = classify_text("What is the stock price of Apple");
  CHECK(suggestions(Intent::StockInformation, price.entities) ==
        std::vector<std::string>{"Show the company profile for Apple",
                                 "Give me a recommendation for Apple"});
  // Every suggestion we hand out should itself be understood.
  std::set<std::string> prompts;
  for (const auto intent : kClassifiableIntents) {
    for (const auto& s : suggestions(intent, price.entities)) prompts.insert(s);
    for (const auto& s : suggestions(intent, {})) prompts.insert(s);
  }
  for (const auto& p : prompts) {
    CAPTURE(p);
    CHECK(classify_text(p).intent != Intent::Fallback);
  }
  CHECK(suggestions(Intent::Fallback, {}) == std::vector<std::string>{"What can you do?", "Help"});
}
