#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stockbabble/indicators.hpp"

namespace stockbabble {

enum class Signal { Buy, Sell, Neutral };

enum class Label { StrongSell, Sell, WeakSell, Hold, WeakBuy, Buy, StrongBuy };

inline constexpr std::array<Label, 7> kAllLabels{Label::StrongSell, Label::Sell,    Label::WeakSell,
                                                 Label::Hold,       Label::WeakBuy, Label::Buy,
                                                 Label::StrongBuy};

std::string_view to_string(Signal signal) noexcept;
std::string_view to_string(Label label) noexcept;       // "WeakBuy"
std::string_view display_name(Label label) noexcept;    // "Weak Buy"
std::optional<Signal> signal_from_string(std::string_view name) noexcept;
std::optional<Label> label_from_string(std::string_view name) noexcept;

// Oversold/overbought bands.
inline constexpr double kRsiOversold = 30.0;
inline constexpr double kRsiOverbought = 70.0;
inline constexpr double kStochasticOversold = 20.0;
inline constexpr double kStochasticOverbought = 80.0;

struct IndicatorSignal {
  indicators::IndicatorId id = indicators::IndicatorId::SMA20;
  Signal signal = Signal::Neutral;
  std::string evidence;  // the comparison that decided the signal

  bool operator==(const IndicatorSignal&) const = default;
};

struct Recommendation {
  std::string ticker;
  Instant as_of;
  std::vector<IndicatorSignal> signals;  // one per indicator, in kAllIndicators order
  int score = 0;                         // #Buy - #Sell
  Label label = Label::Hold;

  bool operator==(const Recommendation&) const = default;
};

// Applies the per-indicator threshold rule to the latest reading. Throws
// Error(MismatchedIndicator) when output.id != id.
IndicatorSignal signal_for(indicators::IndicatorId id, const indicators::IndicatorOutput& output,
                           double latest_close);

int tally(const std::vector<IndicatorSignal>& signals) noexcept;

// >=5 StrongBuy, 3..4 Buy, 1..2 WeakBuy, 0 Hold, and mirrored below zero.
Label label_for_score(int score) noexcept;

// Computes all six indicators over `series`. Throws Error(InsufficientData)
// naming the first indicator that cannot be computed.
Recommendation recommend(std::string_view ticker, const CandleSeries& series);

// One line per indicator followed by a tally line such as
// "Tally: 4 buy − 2 sell = +2 → Weak Buy".
std::vector<std::string> explain(const Recommendation& rec);

// Shortest input for which recommend() succeeds.
std::size_t recommendation_minimum_length() noexcept;

// Compact decimal rendering used in evidence strings: at most two decimals,
// trailing zeros removed ("25", "102.3", "-0.41").
std::string format_number(double value);

}  // namespace stockbabble
