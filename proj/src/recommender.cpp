#include "stockbabble/recommender.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "stockbabble/error.hpp"

namespace stockbabble {

using indicators::IndicatorId;

std::string_view to_string(Signal signal) noexcept {
  switch (signal) {
    case Signal::Buy: return "Buy";
    case Signal::Sell: return "Sell";
    case Signal::Neutral: return "Neutral";
  }
  return "?";
}

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::StrongSell: return "StrongSell";
    case Label::Sell: return "Sell";
    case Label::WeakSell: return "WeakSell";
    case Label::Hold: return "Hold";
    case Label::WeakBuy: return "WeakBuy";
    case Label::Buy: return "Buy";
    case Label::StrongBuy: return "StrongBuy";
  }
  return "?";
}

std::string_view display_name(Label label) noexcept {
  switch (label) {
    case Label::StrongSell: return "Strong Sell";
    case Label::Sell: return "Sell";
    case Label::WeakSell: return "Weak Sell";
    case Label::Hold: return "Hold";
    case Label::WeakBuy: return "Weak Buy";
    case Label::Buy: return "Buy";
    case Label::StrongBuy: return "Strong Buy";
  }
  return "?";
}

std::optional<Signal> signal_from_string(std::string_view name) noexcept {
  for (const auto s : {Signal::Buy, Signal::Sell, Signal::Neutral}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<Label> label_from_string(std::string_view name) noexcept {
  for (const auto l : kAllLabels) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

std::string format_number(double value) {
  auto text = fmt::format("{:.2f}", value);
  while (text.back() == '0') text.pop_back();
  if (text.back() == '.') text.pop_back();
  if (text == "-0") text = "0";
  return text;
}

IndicatorSignal signal_for(IndicatorId id, const indicators::IndicatorOutput& output,
                           double latest_close) {
  if (output.id != id) {
    throw Error(ErrorCode::MismatchedIndicator,
                fmt::format("expected {} output, got {}", indicators::to_string(id),
                            indicators::to_string(output.id)));
  }
  const auto reading = output.latest();
  const auto name = indicators::to_string(id);
  IndicatorSignal result{id, Signal::Neutral, {}};
  switch (id) {
    case IndicatorId::SMA20:
    case IndicatorId::EMA20:
    case IndicatorId::EMA50: {
      // Ties go to Buy.
      const bool above = latest_close >= reading.value;
      result.signal = above ? Signal::Buy : Signal::Sell;
      result.evidence = fmt::format("close {} {} {} {}", format_number(latest_close),
                                    above ? "≥" : "<", name, format_number(reading.value));
      break;
    }
    case IndicatorId::RSI14: {
      const auto v = format_number(reading.value);
      if (reading.value <= kRsiOversold) {
        result.signal = Signal::Buy;
        result.evidence = fmt::format("RSI {} ≤ {} (oversold)", v, format_number(kRsiOversold));
      } else if (reading.value >= kRsiOverbought) {
        result.signal = Signal::Sell;
        result.evidence = fmt::format("RSI {} ≥ {} (overbought)", v, format_number(kRsiOverbought));
      } else {
        result.evidence = fmt::format("{} < RSI {} < {}", format_number(kRsiOversold), v,
                                      format_number(kRsiOverbought));
      }
      break;
    }
    case IndicatorId::STO: {
      const auto v = format_number(reading.value);
      if (reading.value <= kStochasticOversold) {
        result.signal = Signal::Buy;
        result.evidence =
            fmt::format("%K {} ≤ {} (oversold)", v, format_number(kStochasticOversold));
      } else if (reading.value >= kStochasticOverbought) {
        result.signal = Signal::Sell;
        result.evidence =
            fmt::format("%K {} ≥ {} (overbought)", v, format_number(kStochasticOverbought));
      } else {
        result.evidence = fmt::format("{} < %K {} < {}", format_number(kStochasticOversold), v,
                                      format_number(kStochasticOverbought));
      }
      break;
    }
    case IndicatorId::MACD: {
      const double line = reading.value;
      const double signal = reading.signal.value_or(line);
      const char* relation = "=";
      if (line > signal) {
        result.signal = Signal::Buy;
        relation = ">";
      } else if (line < signal) {
        result.signal = Signal::Sell;
        relation = "<";
      }
      // Six decimals so tiny crossings stay visible.
      result.evidence = fmt::format("MACD line {:.6f} {} signal line {:.6f}", line, relation, signal);
      break;
    }
  }
  return result;
}

int tally(const std::vector<IndicatorSignal>& signals) noexcept {
  int score = 0;
  for (const auto& s : signals) {
    if (s.signal == Signal::Buy) ++score;
    if (s.signal == Signal::Sell) --score;
  }
  return score;
}

Label label_for_score(int score) noexcept {
  if (score >= 5) return Label::StrongBuy;
  if (score >= 3) return Label::Buy;
  if (score >= 1) return Label::WeakBuy;
  if (score == 0) return Label::Hold;
  if (score >= -2) return Label::WeakSell;
  if (score >= -4) return Label::Sell;
  return Label::StrongSell;
}

std::size_t recommendation_minimum_length() noexcept {
  std::size_t longest = 0;
  for (const auto id : indicators::kAllIndicators) {
    longest = std::max(longest, indicators::minimum_length(id));
  }
  return longest;
}

Recommendation recommend(std::string_view ticker, const CandleSeries& series) {
  const auto bars = series.candles.size();
  for (const auto id : indicators::kAllIndicators) {
    if (bars < indicators::minimum_length(id)) {
      throw Error(ErrorCode::InsufficientData,
                  fmt::format("{} needs at least {} daily bars, got {}", indicators::to_string(id),
                              indicators::minimum_length(id), bars));
    }
  }
  Recommendation rec;
  rec.ticker = std::string(ticker);
  rec.as_of = Instant{series.candles.back().date};
  const double close = series.candles.back().close;
  for (const auto id : indicators::kAllIndicators) {
    rec.signals.push_back(signal_for(id, indicators::compute(id, series), close));
  }
  rec.score = tally(rec.signals);
  rec.label = label_for_score(rec.score);
  return rec;
}

std::vector<std::string> explain(const Recommendation& rec) {
  std::vector<std::string> lines;
  int buys = 0;
  int sells = 0;
  int neutrals = 0;
  for (const auto& s : rec.signals) {
    auto line = fmt::format("{}: {} → {}", indicators::to_string(s.id), s.evidence,
                            to_string(s.signal));
    switch (s.signal) {
      case Signal::Buy: ++buys; break;
      case Signal::Sell: ++sells; break;
      case Signal::Neutral:
        ++neutrals;
        line += " (not counted)";
        break;
    }
    lines.push_back(std::move(line));
  }
  auto summary = fmt::format("Tally: {} buy − {} sell = {:+d} → {}", buys, sells, buys - sells,
                             display_name(rec.label));
  if (neutrals > 0) summary += fmt::format(" ({} neutral not counted)", neutrals);
  lines.push_back(std::move(summary));
  return lines;
}

}  // namespace stockbabble
