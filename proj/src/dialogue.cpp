#include "stockbabble/dialogue.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "dialogue_messages.hpp"
#include "stockbabble/error.hpp"

namespace stockbabble::dialogue {

using indicators::IndicatorId;
using nlu::EntityKind;
using nlu::Intent;

namespace {

std::string money(double amount) { return fmt::format("${:.2f}", amount); }

std::string compact_money(double amount) {
  const double magnitude = std::fabs(amount);
  if (magnitude >= 1e12) return fmt::format("${:.2f} trillion", amount / 1e12);
  if (magnitude >= 1e9) return fmt::format("${:.2f} billion", amount / 1e9);
  if (magnitude >= 1e6) return fmt::format("${:.2f} million", amount / 1e6);
  return money(amount);
}

bool has_any(const std::vector<std::string>& tokens, std::initializer_list<std::string_view> words) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
    return std::find(words.begin(), words.end(), t) != words.end();
  });
}

bool has_prefix(const std::vector<std::string>& tokens, std::string_view prefix) {
  return std::any_of(tokens.begin(), tokens.end(),
                     [&](const std::string& t) { return t.rfind(prefix, 0) == 0; });
}

}  // namespace

std::string_view UiComponent::kind() const noexcept {
  struct Visitor {
    std::string_view operator()(const Chart&) const { return "chart"; }
    std::string_view operator()(const NewsTimeline&) const { return "newsTimeline"; }
    std::string_view operator()(const ProfileCard&) const { return "profileCard"; }
    std::string_view operator()(const RecommendationGauge&) const { return "recommendationGauge"; }
    std::string_view operator()(const PortfolioTable&) const { return "portfolioTable"; }
    std::string_view operator()(const TermCard&) const { return "termCard"; }
    std::string_view operator()(const TextBlock&) const { return "text"; }
  };
  return std::visit(Visitor{}, payload);
}

struct Engine::Turn {
  Session& session;
  nlu::Utterance utterance;
  nlu::IntentMatch match;
  ChatResponse response;

  const nlu::EntityMatch* company() const { return match.first(EntityKind::Company); }
};

Engine::Engine(std::shared_ptr<const MarketDataProvider> provider,
               std::shared_ptr<const nlu::Corpus> corpus, std::shared_ptr<const Glossary> glossary,
               std::shared_ptr<PortfolioBook> portfolio)
    : provider_(std::move(provider)),
      corpus_(std::move(corpus)),
      glossary_(std::move(glossary)),
      portfolio_(std::move(portfolio)) {}

std::string Engine::company_display(std::string_view ticker) const {
  if (auto name = corpus_->company_name(ticker)) return *name;
  return std::string(ticker);
}

void Engine::emit(Turn& turn, ComponentPayload payload) const {
  ++turn.session.components_issued;
  const auto id = fmt::format("{}-c{}", turn.session.session_id, turn.session.components_issued);
  turn.response.components.push_back(UiComponent{id, std::move(payload)});
}

ChatResponse Engine::handle(Session& session, std::string_view raw_text) const {
  Turn turn{session, nlu::normalize(raw_text), {}, {}};
  turn.match = nlu::classify(turn.utterance, *corpus_);

  try {
    switch (turn.match.intent) {
      case Intent::StockInformation: handle_stock_information(turn); break;
      case Intent::CompanyProfile: handle_company_profile(turn); break;
      case Intent::News: handle_news(turn); break;
      case Intent::Recommendation: handle_recommendation(turn); break;
      case Intent::TradingTerm: handle_trading_term(turn); break;
      case Intent::PortfolioAdd: handle_portfolio_add(turn); break;
      case Intent::PortfolioRemove: handle_portfolio_remove(turn); break;
      case Intent::PortfolioShow: handle_portfolio_show(turn); break;
      case Intent::Greeting:
        turn.response.messages.emplace_back(messages::kGreeting);
        break;
      case Intent::Help:
        turn.response.messages.emplace_back(messages::kHelp);
        emit(turn, TextBlock{"Things you can ask",
                             {"What is the stock price of Apple",
                              "Who is the CEO of Amazon",
                              "Show me the latest news for Tesla",
                              "Give me a recommendation for AMD",
                              "What is a dividend",
                              "Add 10 shares of Apple to my portfolio",
                              "Show my portfolio"}});
        break;
      case Intent::Fallback:
        turn.response.messages.emplace_back(messages::kFallback);
        break;
    }
  } catch (const Error& e) {
    // Drop anything half-built; the reply is the apology alone.
    turn.response.components.clear();
    turn.response.messages.clear();
    switch (e.code()) {
      case ErrorCode::UnknownTicker:
      case ErrorCode::EmptySeries:
        turn.response.messages.emplace_back(messages::kUnknownCompany);
        break;
      case ErrorCode::ProviderUnavailable:
        turn.response.messages.push_back(messages::provider_unavailable(e.what()));
        break;
      case ErrorCode::InsufficientData: {
        const auto* company = turn.company();
        turn.response.messages.push_back(messages::not_enough_history(
            company ? company->display : "that company", e.what()));
        break;
      }
      case ErrorCode::UnknownTerm:
        turn.response.messages.emplace_back(messages::kUnknownTermGeneric);
        break;
      case ErrorCode::UnknownUser:
        turn.response.messages.emplace_back(messages::kSignInForPortfolio);
        break;
      default:
        turn.response.messages.push_back(messages::something_went_wrong(e.what()));
        break;
    }
  }

  // Suggestions may borrow the last company mentioned when this turn named none.
  auto suggestion_entities = turn.match.entities;
  if (!turn.company() && session.last_company) {
    suggestion_entities.push_back(nlu::EntityMatch{EntityKind::Company, *session.last_company,
                                                   *session.last_company,
                                                   company_display(*session.last_company),
                                                   {0, 0}});
  }
  turn.response.suggestions = nlu::suggestions(turn.match.intent, suggestion_entities);
  turn.response.minimize_previous = !turn.response.components.empty();
  if (const auto* company = turn.company()) session.last_company = company->resolved;

  HistoryEntry entry;
  entry.utterance = turn.utterance.raw;
  entry.intent = turn.match.intent;
  entry.confidence = turn.match.confidence;
  for (const auto& c : turn.response.components) {
    entry.component_kinds.emplace_back(c.kind());
    entry.component_ids.push_back(c.component_id);
  }
  session.history.push_back(std::move(entry));
  return std::move(turn.response);
}

void Engine::handle_stock_information(Turn& turn) const {
  const auto* company = turn.company();
  if (!company) {
    turn.response.messages.emplace_back(messages::kWhichCompany);
    return;
  }
  const auto series = provider_->get_candles(company->resolved, kChartLookback);
  const auto quote = provider_->get_quote(company->resolved);
  auto message = fmt::format("{} ({}) last traded at {} as of {}.", company->display,
                             company->resolved, money(quote.price),
                             format_date(std::chrono::floor<std::chrono::days>(quote.as_of)));
  if (series.candles.size() >= 2) {
    const double previous = series.candles[series.candles.size() - 2].close;
    const double change = (series.candles.back().close - previous) / previous * 100.0;
    message += fmt::format(" That is {} {:.2f}% on the previous close.",
                           change >= 0 ? "up" : "down", std::fabs(change));
  }
  turn.response.messages.push_back(std::move(message));

  Chart chart;
  chart.series = series;
  chart.default_visible_overlays = {IndicatorId::SMA20};
  for (const auto id : indicators::kAllIndicators) {
    chart.available_overlays.push_back(id);
    if (series.candles.size() >= indicators::minimum_length(id)) {
      chart.overlays.push_back(indicators::compute(id, series));
    } else {
      chart.overlays.push_back(indicators::IndicatorOutput{id, {}, {}, {}, {}});
    }
  }
  emit(turn, std::move(chart));
}

void Engine::handle_company_profile(Turn& turn) const {
  const auto* company = turn.company();
  if (!company) {
    turn.response.messages.emplace_back(messages::kWhichCompany);
    return;
  }
  const auto profile = provider_->get_profile(company->resolved);
  const auto& tokens = turn.utterance.tokens;
  const auto& name = company->display;
  if (has_any(tokens, {"ceo", "boss", "runs", "chief", "leads"})) {
    turn.response.messages.push_back(fmt::format("The CEO of {} is {}.", name, profile.ceo));
  } else if (has_prefix(tokens, "headquarter") || has_any(tokens, {"where", "based", "office"})) {
    turn.response.messages.push_back(
        fmt::format("{} is headquartered in {}.", name, profile.headquarters));
  } else if (has_prefix(tokens, "dividend")) {
    if (!profile.dividend_reported) {
      turn.response.messages.push_back(fmt::format("{} does not report a dividend.", name));
    } else if (profile.annual_dividend == 0) {
      turn.response.messages.push_back(fmt::format("{} does not pay a dividend.", name));
    } else {
      turn.response.messages.push_back(fmt::format("{} pays an annual dividend of {} per share.",
                                                   name, money(profile.annual_dividend)));
    }
  } else if (has_any(tokens, {"sector", "industry"})) {
    turn.response.messages.push_back(
        fmt::format("{} operates in the {} sector.", name, profile.sector));
  } else if (has_any(tokens, {"worth", "cap", "capitalisation", "capitalization", "valuation"})) {
    turn.response.messages.push_back(fmt::format("{} has a market capitalisation of {}.", name,
                                                 compact_money(profile.market_cap)));
  } else {
    turn.response.messages.push_back(fmt::format("Here is the company profile for {}.", name));
  }
  emit(turn, ProfileCard{profile});
}

void Engine::handle_news(Turn& turn) const {
  const auto* company = turn.company();
  if (!company) {
    turn.response.messages.emplace_back(messages::kWhichCompany);
    return;
  }
  auto items = provider_->get_news(company->resolved, kNewsLimit);
  if (items.empty()) {
    turn.response.messages.push_back(messages::no_news(company->display));
    return;
  }
  turn.response.messages.push_back(fmt::format("Here are the latest {} headlines for {}.",
                                               items.size(), company->display));
  emit(turn, NewsTimeline{company->resolved, std::move(items)});
}

void Engine::handle_recommendation(Turn& turn) const {
  const auto* company = turn.company();
  if (!company) {
    turn.response.messages.emplace_back(messages::kWhichCompany);
    return;
  }
  const auto series = provider_->get_candles(company->resolved, kAnalysisLookback);
  auto rec = recommend(company->resolved, series);
  int buys = 0, sells = 0, neutrals = 0;
  for (const auto& s : rec.signals) {
    if (s.signal == Signal::Buy) ++buys;
    else if (s.signal == Signal::Sell) ++sells;
    else ++neutrals;
  }
  turn.response.messages.push_back(fmt::format(
      "My overall recommendation for {} is {} ({} buy, {} sell, {} neutral across six "
      "indicators). Open the breakdown to see how each indicator voted.",
      company->display, display_name(rec.label), buys, sells, neutrals));
  auto lines = explain(rec);
  emit(turn, RecommendationGauge{std::move(rec), std::move(lines)});
}

void Engine::handle_trading_term(Turn& turn) const {
  const auto* term = turn.match.first(EntityKind::Term);
  if (!term) {
    turn.response.messages.emplace_back(messages::kUnknownTermGeneric);
    return;
  }
  const TermEntry* entry = nullptr;
  try {
    entry = &glossary_->lookup_term(term->resolved);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownTerm) throw;
    turn.response.messages.push_back(messages::unknown_term(term->surface));
    return;
  }
  turn.response.messages.push_back(fmt::format("{}: {}", entry->title, entry->definition));
  emit(turn, TermCard{*entry, glossary_->related_terms(entry->key)});
}

void Engine::handle_portfolio_add(Turn& turn) const {
  if (turn.session.user_id.empty()) {
    turn.response.messages.emplace_back(messages::kSignInForPortfolio);
    return;
  }
  const auto* company = turn.company();
  if (!company) {
    turn.response.messages.emplace_back(messages::kWhichCompany);
    return;
  }
  const auto* quantity = turn.match.first(EntityKind::ShareQuantity);
  if (!quantity) {
    turn.response.messages.push_back(messages::how_many_shares(company->display));
    return;
  }
  const auto shares = quantity->quantity();
  const auto portfolio = portfolio_->add_position(turn.session.user_id, company->resolved, shares);
  const auto valuation = portfolio_->value_portfolio(turn.session.user_id);
  const auto& position = portfolio.positions.at(company->resolved);
  const auto price = provider_->get_quote(company->resolved).price;
  turn.response.messages.push_back(fmt::format(
      "Added {} {} of {} at {} each. You now hold {} {} with a cost basis of {}.", shares,
      shares == 1 ? "share" : "shares", company->display, money(price), position.shares,
      position.shares == 1 ? "share" : "shares", money(position.cost_basis)));
  emit(turn, PortfolioTable{valuation});
}

void Engine::handle_portfolio_remove(Turn& turn) const {
  if (turn.session.user_id.empty()) {
    turn.response.messages.emplace_back(messages::kSignInForPortfolio);
    return;
  }
  const auto* company = turn.company();
  if (!company) {
    turn.response.messages.emplace_back(messages::kWhichCompany);
    return;
  }
  const auto current = portfolio_->portfolio(turn.session.user_id);
  const auto held = current.positions.find(company->resolved);
  if (held == current.positions.end()) {
    turn.response.messages.push_back(
        fmt::format("You don't hold any {} shares.", company->display));
    return;
  }
  // No quantity means the whole position.
  const auto* quantity = turn.match.first(EntityKind::ShareQuantity);
  const auto shares = quantity ? quantity->quantity() : held->second.shares;
  if (shares > held->second.shares) {
    turn.response.messages.push_back(fmt::format("You only hold {} shares of {}.",
                                                 held->second.shares, company->display));
    return;
  }
  const auto portfolio =
      portfolio_->remove_position(turn.session.user_id, company->resolved, shares);
  const auto left = portfolio.positions.find(company->resolved);
  turn.response.messages.push_back(
      left == portfolio.positions.end()
          ? fmt::format("Removed all {} shares of {} from your portfolio.", shares,
                        company->display)
          : fmt::format("Removed {} shares of {}. You still hold {}.", shares, company->display,
                        left->second.shares));
  emit(turn, PortfolioTable{portfolio_->value_portfolio(turn.session.user_id)});
}

void Engine::handle_portfolio_show(Turn& turn) const {
  if (turn.session.user_id.empty()) {
    turn.response.messages.emplace_back(messages::kSignInForPortfolio);
    return;
  }
  auto valuation = portfolio_->value_portfolio(turn.session.user_id);
  if (valuation.positions.empty()) {
    turn.response.messages.emplace_back(messages::kEmptyPortfolio);
  } else {
    const auto count = valuation.positions.size();
    turn.response.messages.push_back(fmt::format(
        "Your {} {} worth {} against a cost of {}: {} {} ({:+.2f}%).", count,
        count == 1 ? "position is" : "positions are", money(valuation.total_value),
        money(valuation.total_cost), valuation.total_pnl_abs >= 0 ? "a gain of" : "a loss of",
        money(std::fabs(valuation.total_pnl_abs)), valuation.total_pnl_pct * 100.0));
  }
  emit(turn, PortfolioTable{std::move(valuation)});
}

std::vector<TranscriptEntry> Engine::run_script(Session& session,
                                                const std::vector<std::string>& script) const {
  std::vector<TranscriptEntry> transcript;
  for (const auto& line : script) {
    TranscriptEntry entry;
    entry.utterance = line;
    try {
      auto response = handle(session, line);
      entry.intent = session.history.back().intent;
      for (const auto& c : response.components) entry.component_kinds.emplace_back(c.kind());
      entry.suggestions = std::move(response.suggestions);
      entry.messages = std::move(response.messages);
    } catch (const Error& e) {
      // Blank lines are the only thing handle() refuses; record them as fallbacks.
      entry.intent = Intent::Fallback;
      entry.messages.emplace_back(e.what());
    }
    transcript.push_back(std::move(entry));
  }
  return transcript;
}

void seed_dictionaries(nlu::Corpus& corpus, const Glossary& glossary,
                       const std::vector<CompanyProfile>& profiles) {
  for (const auto& entry : glossary.entries()) {
    corpus.add_alias(EntityKind::Term, entry.key, entry.key, entry.title);
    corpus.add_alias(EntityKind::Term, entry.title, entry.key, entry.title);
    for (const auto& alias : entry.aliases) {
      corpus.add_alias(EntityKind::Term, alias, entry.key, entry.title);
    }
  }
  for (const auto& profile : profiles) {
    const auto display = corpus.company_name(profile.ticker).value_or(profile.name);
    corpus.add_alias(EntityKind::Company, profile.ticker, profile.ticker, display);
    corpus.add_alias(EntityKind::Company, profile.name, profile.ticker, display);
  }
}

std::string format_transcript(const std::vector<TranscriptEntry>& transcript) {
  std::string out;
  for (const auto& entry : transcript) {
    out += fmt::format("> {}\n", entry.utterance);
    out += fmt::format("  intent: {}\n", nlu::to_string(entry.intent));
    out += fmt::format("  components: {}\n",
                       entry.component_kinds.empty() ? "-" : fmt::format("{}", fmt::join(entry.component_kinds, ", ")));
    out += fmt::format("  suggestions: {}\n",
                       entry.suggestions.empty() ? "-" : fmt::format("{}", fmt::join(entry.suggestions, " | ")));
  }
  return out;
}

std::vector<std::string> read_script(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    lines.emplace_back(line);
  }
  return lines;
}

}  // namespace stockbabble::dialogue
