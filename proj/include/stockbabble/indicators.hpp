#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stockbabble/market_data.hpp"

namespace stockbabble::indicators {

// The six gauge indicators, in display order.
enum class IndicatorId { SMA20, EMA20, EMA50, RSI14, MACD, STO };

inline constexpr std::array<IndicatorId, 6> kAllIndicators{
    IndicatorId::SMA20, IndicatorId::EMA20, IndicatorId::EMA50,
    IndicatorId::RSI14, IndicatorId::MACD,  IndicatorId::STO};

std::string_view to_string(IndicatorId id) noexcept;
std::optional<IndicatorId> indicator_from_string(std::string_view name) noexcept;

inline constexpr int kRsiPeriod = 14;
inline constexpr int kMacdFast = 12;
inline constexpr int kMacdSlow = 26;
inline constexpr int kMacdSignal = 9;
inline constexpr int kStochasticK = 14;
inline constexpr int kStochasticD = 3;

// A computed line starting at input index `offset`; values.size() equals
// input length minus offset.
struct Line {
  std::size_t offset = 0;
  std::vector<double> values;
};

struct MacdLines {
  std::size_t offset = 0;  // first index where the signal line is defined
  std::vector<double> macd;
  std::vector<double> signal;
  std::vector<double> histogram;
};

struct StochasticLines {
  std::size_t offset = 0;  // first index where %D is defined
  std::vector<double> percent_k;
  std::vector<double> percent_d;
};

// All functions are pure and throw Error(InsufficientData) when the input is
// shorter than the minimum length noted.

// length >= period >= 1
Line sma(std::span<const double> closes, int period);
// length >= period; seeded with the SMA of the first `period` closes.
Line ema(std::span<const double> closes, int period);
// length >= period + 1; Wilder smoothing.
Line rsi(std::span<const double> closes, int period = kRsiPeriod);
// length >= slow + signal
MacdLines macd(std::span<const double> closes, int fast = kMacdFast, int slow = kMacdSlow,
               int signal = kMacdSignal);
// length >= k + d - 1; all three spans must have the same length.
StochasticLines stochastic(std::span<const double> highs, std::span<const double> lows,
                           std::span<const double> closes, int k_period = kStochasticK,
                           int d_period = kStochasticD);

// Number of leading inputs without an output value.
std::size_t warmup(IndicatorId id) noexcept;
// Shortest input for which the indicator is defined.
std::size_t minimum_length(IndicatorId id) noexcept;

// Latest reading. `value` is the scalar (SMA/EMA/RSI), %K (STO) or MACD line;
// `signal` is %D or the MACD signal line; `histogram` is MACD only.
struct Reading {
  double value = 0;
  std::optional<double> signal;
  std::optional<double> histogram;
};

// Indicator output aligned to the candles it came from.
struct IndicatorOutput {
  IndicatorId id = IndicatorId::SMA20;
  std::vector<Date> dates;  // dates[i] is the candle date of the i-th point
  std::vector<double> values;
  std::vector<double> signal;     // STO %D, MACD signal; empty otherwise
  std::vector<double> histogram;  // MACD only

  bool empty() const noexcept { return values.empty(); }
  Reading latest() const;
};

IndicatorOutput compute(IndicatorId id, const CandleSeries& series);

}  // namespace stockbabble::indicators
