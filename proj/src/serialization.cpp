#include "stockbabble/serialization.hpp"

#include <fmt/format.h>

#include "stockbabble/error.hpp"

namespace stockbabble {
namespace {

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorCode::BadRequest, message); }

template <typename Fn>
auto decoding(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    bad(fmt::format("malformed {}: {}", what, e.what()));
  }
}

Instant instant_field(const Json& json, const char* key) {
  const auto text = json.at(key).get<std::string>();
  const auto parsed = parse_rfc3339(text);
  if (!parsed) bad(fmt::format("field '{}' is not an RFC 3339 timestamp: '{}'", key, text));
  return *parsed;
}

std::string required_string(const Json& json, const char* key) {
  auto value = json.at(key).get<std::string>();
  if (value.empty()) bad(fmt::format("field '{}' must not be empty", key));
  return value;
}

Json chart_json(const dialogue::Chart& chart) {
  Json candles = Json::array();
  for (const auto& c : chart.series.candles) candles.push_back(to_json(c));
  Json available = Json::array();
  for (const auto id : chart.available_overlays) available.push_back(indicators::to_string(id));
  Json visible = Json::array();
  for (const auto id : chart.default_visible_overlays) visible.push_back(indicators::to_string(id));
  Json overlays = Json::array();
  for (const auto& o : chart.overlays) overlays.push_back(to_json(o));
  return {{"ticker", chart.series.ticker},
          {"interval", "daily"},
          {"candles", std::move(candles)},
          {"availableOverlays", std::move(available)},
          {"defaultVisibleOverlays", std::move(visible)},
          {"overlays", std::move(overlays)}};
}

}  // namespace

Json to_json(const Candle& c) {
  return {{"date", format_date(c.date)}, {"open", c.open},   {"high", c.high},
          {"low", c.low},                {"close", c.close}, {"volume", c.volume}};
}

Candle candle_from_json(const Json& json) {
  return decoding("candle", [&] {
    Candle c;
    const auto text = json.at("date").get<std::string>();
    const auto date = parse_date(text);
    if (!date) bad(fmt::format("bad candle date '{}'", text));
    c.date = *date;
    c.open = json.at("open").get<double>();
    c.high = json.at("high").get<double>();
    c.low = json.at("low").get<double>();
    c.close = json.at("close").get<double>();
    c.volume = json.at("volume").get<std::int64_t>();
    return c;
  });
}

Json to_json(const Quote& q) {
  return {{"ticker", q.ticker}, {"price", q.price}, {"asOf", format_rfc3339(q.as_of)}};
}

Quote quote_from_json(const Json& json) {
  return decoding("quote", [&] {
    return Quote{required_string(json, "ticker"), json.at("price").get<double>(),
                 instant_field(json, "asOf")};
  });
}

Json to_json(const CompanyProfile& p) {
  return {{"ticker", p.ticker},
          {"name", p.name},
          {"ceo", p.ceo},
          {"headquarters", p.headquarters},
          {"sector", p.sector},
          {"description", p.description},
          {"annualDividend", p.annual_dividend},
          {"dividendReported", p.dividend_reported},
          {"marketCap", p.market_cap}};
}

CompanyProfile profile_from_json(const Json& json) {
  return decoding("profile", [&] {
    CompanyProfile p;
    p.ticker = required_string(json, "ticker");
    p.name = required_string(json, "name");
    p.ceo = json.value("ceo", "");
    p.headquarters = json.value("headquarters", "");
    p.sector = json.value("sector", "");
    p.description = json.value("description", "");
    if (json.contains("annualDividend") && !json.at("annualDividend").is_null()) {
      p.annual_dividend = json.at("annualDividend").get<double>();
      p.dividend_reported = true;
    } else {
      p.annual_dividend = 0;
      p.dividend_reported = false;
    }
    if (p.annual_dividend < 0) bad("annualDividend must not be negative");
    p.market_cap = json.value("marketCap", 0.0);
    return p;
  });
}

Json to_json(const NewsItem& n) {
  return {{"ticker", n.ticker},   {"headline", n.headline},
          {"source", n.source},   {"url", n.url},
          {"summary", n.summary}, {"publishedAt", format_rfc3339(n.published_at)}};
}

NewsItem news_from_json(const Json& json) {
  return decoding("news item", [&] {
    NewsItem n;
    n.ticker = required_string(json, "ticker");
    n.headline = required_string(json, "headline");
    n.source = json.value("source", "");
    n.url = json.value("url", "");
    n.summary = json.value("summary", "");
    n.published_at = instant_field(json, "publishedAt");
    return n;
  });
}

Json to_json(const indicators::IndicatorOutput& output) {
  Json points = Json::array();
  for (std::size_t i = 0; i < output.values.size(); ++i) {
    Json point{{"date", format_date(output.dates[i])}, {"value", output.values[i]}};
    if (!output.signal.empty()) point["signal"] = output.signal[i];
    if (!output.histogram.empty()) point["histogram"] = output.histogram[i];
    points.push_back(std::move(point));
  }
  return {{"id", indicators::to_string(output.id)}, {"points", std::move(points)}};
}

Json to_json(const Recommendation& rec) {
  Json signals = Json::array();
  for (const auto& s : rec.signals) {
    signals.push_back({{"id", indicators::to_string(s.id)},
                       {"signal", to_string(s.signal)},
                       {"evidence", s.evidence}});
  }
  return {{"ticker", rec.ticker},
          {"asOf", format_rfc3339(rec.as_of)},
          {"signals", std::move(signals)},
          {"score", rec.score},
          {"label", to_string(rec.label)},
          {"labelText", display_name(rec.label)}};
}

Json to_json(const TermEntry& e) {
  return {{"key", e.key},         {"title", e.title},     {"definition", e.definition},
          {"aliases", e.aliases}, {"related", e.related}, {"tags", e.tags}};
}

Json to_json(const Valuation& v) {
  Json rows = Json::array();
  for (const auto& p : v.positions) {
    rows.push_back({{"ticker", p.ticker},
                    {"shares", p.shares},
                    {"costBasis", p.cost_basis},
                    {"price", p.price},
                    {"marketValue", p.market_value},
                    {"pnlAbs", p.pnl_abs},
                    {"pnlPct", p.pnl_pct}});
  }
  return {{"asOf", format_rfc3339(v.as_of)},     {"positions", std::move(rows)},
          {"totalCost", v.total_cost},           {"totalValue", v.total_value},
          {"totalPnlAbs", v.total_pnl_abs},      {"totalPnlPct", v.total_pnl_pct}};
}

Json to_json(const Portfolio& portfolio) {
  Json positions = Json::array();
  for (const auto& [ticker, p] : portfolio.positions) {
    positions.push_back({{"ticker", p.ticker},
                         {"shares", p.shares},
                         {"costBasis", p.cost_basis},
                         {"openedAt", format_rfc3339(p.opened_at)}});
  }
  return {{"userId", portfolio.user_id},
          {"updatedAt", format_rfc3339(portfolio.updated_at)},
          {"positions", std::move(positions)}};
}

Portfolio portfolio_from_json(const Json& json) {
  return decoding("portfolio", [&] {
    Portfolio portfolio;
    portfolio.user_id = required_string(json, "userId");
    portfolio.updated_at = instant_field(json, "updatedAt");
    for (const auto& item : json.at("positions")) {
      Position p;
      p.ticker = required_string(item, "ticker");
      p.shares = item.at("shares").get<std::int64_t>();
      p.cost_basis = item.at("costBasis").get<double>();
      p.opened_at = instant_field(item, "openedAt");
      if (p.shares <= 0 || !(p.cost_basis > 0)) {
        bad(fmt::format("position {} must have positive shares and cost", p.ticker));
      }
      portfolio.positions.emplace(p.ticker, std::move(p));
    }
    return portfolio;
  });
}

Json to_json(const dialogue::UiComponent& component) {
  struct Visitor {
    Json operator()(const dialogue::Chart& c) const { return chart_json(c); }
    Json operator()(const dialogue::NewsTimeline& n) const {
      Json items = Json::array();
      for (const auto& item : n.items) items.push_back(to_json(item));
      return {{"ticker", n.ticker}, {"items", std::move(items)}};
    }
    Json operator()(const dialogue::ProfileCard& p) const { return {{"profile", to_json(p.profile)}}; }
    Json operator()(const dialogue::RecommendationGauge& g) const {
      return {{"recommendation", to_json(g.recommendation)}, {"explanation", g.explanation}};
    }
    Json operator()(const dialogue::PortfolioTable& t) const {
      return {{"valuation", to_json(t.valuation)}};
    }
    Json operator()(const dialogue::TermCard& t) const {
      Json related = Json::array();
      for (const auto& r : t.related) related.push_back(to_json(r));
      return {{"entry", to_json(t.entry)}, {"related", std::move(related)}};
    }
    Json operator()(const dialogue::TextBlock& t) const {
      return {{"title", t.title}, {"lines", t.lines}};
    }
  };
  Json json = std::visit(Visitor{}, component.payload);
  json["kind"] = component.kind();
  json["componentId"] = component.component_id;
  return json;
}

Json to_json(const dialogue::ChatResponse& response) {
  Json components = Json::array();
  for (const auto& c : response.components) components.push_back(to_json(c));
  return {{"messages", response.messages},
          {"components", std::move(components)},
          {"suggestions", response.suggestions},
          {"minimizePrevious", response.minimize_previous}};
}

}  // namespace stockbabble
