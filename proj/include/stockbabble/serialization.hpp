#pragma once

// JSON wire forms. Field names are camelCase; instants are RFC 3339 strings,
// candle dates are "YYYY-MM-DD". Decoders throw Error(BadRequest).

#include <nlohmann/json.hpp>

#include "stockbabble/dialogue.hpp"
#include "stockbabble/knowledge.hpp"
#include "stockbabble/market_data.hpp"
#include "stockbabble/portfolio.hpp"
#include "stockbabble/recommender.hpp"

namespace stockbabble {

using Json = nlohmann::json;

Json to_json(const Candle& candle);
Candle candle_from_json(const Json& json);

Json to_json(const Quote& quote);
Quote quote_from_json(const Json& json);

// A missing annualDividend decodes as 0 with dividend_reported = false.
Json to_json(const CompanyProfile& profile);
CompanyProfile profile_from_json(const Json& json);

Json to_json(const NewsItem& item);
NewsItem news_from_json(const Json& json);

Json to_json(const indicators::IndicatorOutput& output);
Json to_json(const Recommendation& rec);
Json to_json(const TermEntry& entry);
Json to_json(const Valuation& valuation);

Json to_json(const Portfolio& portfolio);
Portfolio portfolio_from_json(const Json& json);

Json to_json(const dialogue::UiComponent& component);
Json to_json(const dialogue::ChatResponse& response);

}  // namespace stockbabble
