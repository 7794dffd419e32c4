#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stockbabble/indicators.hpp"
#include "stockbabble/knowledge.hpp"
#include "stockbabble/market_data.hpp"
#include "stockbabble/nlu.hpp"
#include "stockbabble/portfolio.hpp"
#include "stockbabble/recommender.hpp"

namespace stockbabble::dialogue {

// Price chart with precomputed indicator overlays. The client only toggles
// visibility; it never computes indicator values.
struct Chart {
  CandleSeries series;
  std::vector<indicators::IndicatorOutput> overlays;  // one per available id
  std::vector<indicators::IndicatorId> available_overlays;
  std::vector<indicators::IndicatorId> default_visible_overlays;  // subset, at most two
};

struct NewsTimeline {
  std::string ticker;
  std::vector<NewsItem> items;  // newest first
};

struct ProfileCard {
  CompanyProfile profile;
};

struct RecommendationGauge {
  Recommendation recommendation;
  std::vector<std::string> explanation;  // six indicator lines and a tally line
};

struct PortfolioTable {
  Valuation valuation;
};

struct TermCard {
  TermEntry entry;
  std::vector<TermEntry> related;
};

struct TextBlock {
  std::string title;
  std::vector<std::string> lines;
};

using ComponentPayload = std::variant<Chart, NewsTimeline, ProfileCard, RecommendationGauge,
                                      PortfolioTable, TermCard, TextBlock>;

struct UiComponent {
  std::string component_id;  // unique within a session
  ComponentPayload payload;

  // Wire discriminator: chart | newsTimeline | profileCard |
  // recommendationGauge | portfolioTable | termCard | text
  std::string_view kind() const noexcept;
};

struct ChatResponse {
  std::vector<std::string> messages;
  std::vector<UiComponent> components;
  std::vector<std::string> suggestions;
  bool minimize_previous = false;  // set whenever components is non-empty
};

struct HistoryEntry {
  std::string utterance;
  nlu::Intent intent = nlu::Intent::Fallback;
  double confidence = 0;
  std::vector<std::string> component_kinds;
  std::vector<std::string> component_ids;
};

struct Session {
  std::string session_id;
  std::string user_id;  // empty for anonymous sessions; portfolio intents need one
  std::vector<HistoryEntry> history;  // append-only
  std::optional<std::string> last_company;  // ticker
  std::uint64_t components_issued = 0;
};

struct TranscriptEntry {
  std::string utterance;
  nlu::Intent intent = nlu::Intent::Fallback;
  std::vector<std::string> component_kinds;
  std::vector<std::string> suggestions;
  std::vector<std::string> messages;
};

inline constexpr int kChartLookback = 180;
inline constexpr int kAnalysisLookback = 250;
inline constexpr int kNewsLimit = 5;

// Routes utterances through classification to one handler each. Holds only
// read-only resources plus the portfolio book, so one engine can serve many
// sessions concurrently as long as each session is used by one caller at a time.
class Engine {
 public:
  Engine(std::shared_ptr<const MarketDataProvider> provider, std::shared_ptr<const nlu::Corpus> corpus,
         std::shared_ptr<const Glossary> glossary, std::shared_ptr<PortfolioBook> portfolio);

  // Throws Error(EmptyUtterance) for blank input; every other failure is
  // turned into an apologetic message.
  ChatResponse handle(Session& session, std::string_view raw_text) const;

  std::vector<TranscriptEntry> run_script(Session& session,
                                          const std::vector<std::string>& script) const;

  const nlu::Corpus& corpus() const noexcept { return *corpus_; }

 private:
  struct Turn;

  void handle_stock_information(Turn& turn) const;
  void handle_company_profile(Turn& turn) const;
  void handle_news(Turn& turn) const;
  void handle_recommendation(Turn& turn) const;
  void handle_trading_term(Turn& turn) const;
  void handle_portfolio_add(Turn& turn) const;
  void handle_portfolio_remove(Turn& turn) const;
  void handle_portfolio_show(Turn& turn) const;

  std::string company_display(std::string_view ticker) const;
  void emit(Turn& turn, ComponentPayload payload) const;

  std::shared_ptr<const MarketDataProvider> provider_;
  std::shared_ptr<const nlu::Corpus> corpus_;
  std::shared_ptr<const Glossary> glossary_;
  std::shared_ptr<PortfolioBook> portfolio_;
};

// Seeds the corpus dictionaries with glossary aliases and provider profiles.
void seed_dictionaries(nlu::Corpus& corpus, const Glossary& glossary,
                       const std::vector<CompanyProfile>& profiles);

// Plain-text transcript: utterance, intent, component kinds and suggestions
// per turn. Stable across runs for fixed fixtures and corpus.
std::string format_transcript(const std::vector<TranscriptEntry>& transcript);

// Reads a script file: one utterance per line, blank lines and '#' comments
// skipped.
std::vector<std::string> read_script(std::string_view text);

}  // namespace stockbabble::dialogue
