#include "stockbabble/indicators.hpp"

#include <fmt/format.h>

#include <deque>
#include <stdexcept>

#include "stockbabble/error.hpp"

namespace stockbabble::indicators {
namespace {

void require_period(int period, const char* what) {
  if (period < 1) throw std::invalid_argument(fmt::format("{} period must be >= 1", what));
}

void require_length(std::size_t have, std::size_t need, std::string_view what) {
  if (have < need) {
    throw Error(ErrorCode::InsufficientData,
                fmt::format("{} needs at least {} closes, got {}", what, need, have));
  }
}

// Neutral reading when there has been no movement at all.
double rsi_from_averages(double avg_gain, double avg_loss) {
  if (avg_loss == 0.0) return avg_gain == 0.0 ? 50.0 : 100.0;
  if (avg_gain == 0.0) return 0.0;
  return 100.0 - 100.0 / (1.0 + avg_gain / avg_loss);
}

}  // namespace

std::string_view to_string(IndicatorId id) noexcept {
  switch (id) {
    case IndicatorId::SMA20: return "SMA20";
    case IndicatorId::EMA20: return "EMA20";
    case IndicatorId::EMA50: return "EMA50";
    case IndicatorId::RSI14: return "RSI14";
    case IndicatorId::MACD: return "MACD";
    case IndicatorId::STO: return "STO";
  }
  return "?";
}

std::optional<IndicatorId> indicator_from_string(std::string_view name) noexcept {
  for (const auto id : kAllIndicators) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

Line sma(std::span<const double> closes, int period) {
  require_period(period, "SMA");
  const auto p = static_cast<std::size_t>(period);
  require_length(closes.size(), p, fmt::format("SMA{}", period));
  Line out;
  out.offset = p - 1;
  out.values.reserve(closes.size() - out.offset);
  double sum = 0;
  for (std::size_t i = 0; i < closes.size(); ++i) {
    sum += closes[i];
    if (i >= p) sum -= closes[i - p];
    if (i + 1 >= p) out.values.push_back(sum / static_cast<double>(p));
  }
  return out;
}

Line ema(std::span<const double> closes, int period) {
  require_period(period, "EMA");
  const auto p = static_cast<std::size_t>(period);
  require_length(closes.size(), p, fmt::format("EMA{}", period));
  const double alpha = 2.0 / (static_cast<double>(period) + 1.0);
  Line out;
  out.offset = p - 1;
  out.values.reserve(closes.size() - out.offset);
  double seed = 0;
  for (std::size_t i = 0; i < p; ++i) seed += closes[i];
  double value = seed / static_cast<double>(p);
  out.values.push_back(value);
  for (std::size_t i = p; i < closes.size(); ++i) {
    value = alpha * closes[i] + (1.0 - alpha) * value;
    out.values.push_back(value);
  }
  return out;
}

Line rsi(std::span<const double> closes, int period) {
  require_period(period, "RSI");
  const auto p = static_cast<std::size_t>(period);
  require_length(closes.size(), p + 1, fmt::format("RSI{}", period));
  double avg_gain = 0;
  double avg_loss = 0;
  for (std::size_t i = 1; i <= p; ++i) {
    const double change = closes[i] - closes[i - 1];
    if (change > 0) avg_gain += change;
    else avg_loss -= change;
  }
  avg_gain /= static_cast<double>(p);
  avg_loss /= static_cast<double>(p);

  Line out;
  out.offset = p;
  out.values.reserve(closes.size() - p);
  out.values.push_back(rsi_from_averages(avg_gain, avg_loss));
  const double keep = static_cast<double>(p - 1);
  for (std::size_t i = p + 1; i < closes.size(); ++i) {
    const double change = closes[i] - closes[i - 1];
    const double gain = change > 0 ? change : 0.0;
    const double loss = change < 0 ? -change : 0.0;
    avg_gain = (avg_gain * keep + gain) / static_cast<double>(p);
    avg_loss = (avg_loss * keep + loss) / static_cast<double>(p);
    out.values.push_back(rsi_from_averages(avg_gain, avg_loss));
  }
  return out;
}

MacdLines macd(std::span<const double> closes, int fast, int slow, int signal) {
  require_period(fast, "MACD fast");
  require_period(slow, "MACD slow");
  require_period(signal, "MACD signal");
  const auto longest = static_cast<std::size_t>(std::max(fast, slow));
  require_length(closes.size(), longest + static_cast<std::size_t>(signal),
                 fmt::format("MACD({},{},{})", fast, slow, signal));

  const auto fast_line = ema(closes, fast);
  const auto slow_line = ema(closes, slow);
  const std::size_t line_start = longest - 1;
  std::vector<double> line;
  line.reserve(closes.size() - line_start);
  for (std::size_t i = line_start; i < closes.size(); ++i) {
    line.push_back(fast_line.values[i - fast_line.offset] - slow_line.values[i - slow_line.offset]);
  }
  const auto signal_line = ema(line, signal);

  MacdLines out;
  out.offset = line_start + signal_line.offset;
  out.macd.assign(line.begin() + static_cast<long>(signal_line.offset), line.end());
  out.signal = signal_line.values;
  out.histogram.reserve(out.macd.size());
  for (std::size_t i = 0; i < out.macd.size(); ++i) {
    out.histogram.push_back(out.macd[i] - out.signal[i]);
  }
  return out;
}

StochasticLines stochastic(std::span<const double> highs, std::span<const double> lows,
                           std::span<const double> closes, int k_period, int d_period) {
  require_period(k_period, "%K");
  require_period(d_period, "%D");
  if (highs.size() != closes.size() || lows.size() != closes.size()) {
    throw std::invalid_argument("stochastic inputs differ in length");
  }
  const auto k = static_cast<std::size_t>(k_period);
  const auto d = static_cast<std::size_t>(d_period);
  require_length(closes.size(), k + d - 1, fmt::format("STO({},{})", k_period, d_period));

  // Monotonic deques of indices give the window extremes in amortized O(1).
  std::deque<std::size_t> max_idx;
  std::deque<std::size_t> min_idx;
  std::vector<double> percent_k;
  percent_k.reserve(closes.size() - (k - 1));
  for (std::size_t i = 0; i < closes.size(); ++i) {
    while (!max_idx.empty() && highs[max_idx.back()] <= highs[i]) max_idx.pop_back();
    max_idx.push_back(i);
    while (!min_idx.empty() && lows[min_idx.back()] >= lows[i]) min_idx.pop_back();
    min_idx.push_back(i);
    if (max_idx.front() + k <= i) max_idx.pop_front();
    if (min_idx.front() + k <= i) min_idx.pop_front();
    if (i + 1 < k) continue;
    const double highest = highs[max_idx.front()];
    const double lowest = lows[min_idx.front()];
    // Flat window: no range to locate the close in.
    percent_k.push_back(highest == lowest ? 50.0
                                          : 100.0 * (closes[i] - lowest) / (highest - lowest));
  }
  const auto smoothed = sma(percent_k, d_period);

  StochasticLines out;
  out.offset = (k - 1) + smoothed.offset;
  out.percent_k.assign(percent_k.begin() + static_cast<long>(smoothed.offset), percent_k.end());
  out.percent_d = smoothed.values;
  return out;
}

std::size_t warmup(IndicatorId id) noexcept {
  switch (id) {
    case IndicatorId::SMA20: return 19;
    case IndicatorId::EMA20: return 19;
    case IndicatorId::EMA50: return 49;
    case IndicatorId::RSI14: return kRsiPeriod;
    case IndicatorId::MACD: return kMacdSlow + kMacdSignal - 2;
    case IndicatorId::STO: return kStochasticK + kStochasticD - 2;
  }
  return 0;
}

std::size_t minimum_length(IndicatorId id) noexcept {
  switch (id) {
    case IndicatorId::SMA20: return 20;
    case IndicatorId::EMA20: return 20;
    case IndicatorId::EMA50: return 50;
    case IndicatorId::RSI14: return kRsiPeriod + 1;
    case IndicatorId::MACD: return kMacdSlow + kMacdSignal;
    case IndicatorId::STO: return kStochasticK + kStochasticD - 1;
  }
  return 0;
}

Reading IndicatorOutput::latest() const {
  if (values.empty()) throw Error(ErrorCode::InsufficientData, "indicator has no values");
  Reading r;
  r.value = values.back();
  if (!signal.empty()) r.signal = signal.back();
  if (!histogram.empty()) r.histogram = histogram.back();
  return r;
}

IndicatorOutput compute(IndicatorId id, const CandleSeries& series) {
  const auto closes = series.closes();
  IndicatorOutput out;
  out.id = id;
  std::size_t offset = 0;
  switch (id) {
    case IndicatorId::SMA20: {
      auto line = sma(closes, 20);
      offset = line.offset;
      out.values = std::move(line.values);
      break;
    }
    case IndicatorId::EMA20:
    case IndicatorId::EMA50: {
      auto line = ema(closes, id == IndicatorId::EMA20 ? 20 : 50);
      offset = line.offset;
      out.values = std::move(line.values);
      break;
    }
    case IndicatorId::RSI14: {
      auto line = rsi(closes, kRsiPeriod);
      offset = line.offset;
      out.values = std::move(line.values);
      break;
    }
    case IndicatorId::MACD: {
      auto lines = macd(closes);
      offset = lines.offset;
      out.values = std::move(lines.macd);
      out.signal = std::move(lines.signal);
      out.histogram = std::move(lines.histogram);
      break;
    }
    case IndicatorId::STO: {
      auto lines = stochastic(series.highs(), series.lows(), closes);
      offset = lines.offset;
      out.values = std::move(lines.percent_k);
      out.signal = std::move(lines.percent_d);
      break;
    }
  }
  out.dates.reserve(out.values.size());
  for (std::size_t i = offset; i < series.candles.size(); ++i) {
    out.dates.push_back(series.candles[i].date);
  }
  return out;
}

}  // namespace stockbabble::indicators
