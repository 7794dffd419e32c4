#include "stockbabble/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stockbabble/error.hpp"
#include "stockbabble/recommender.hpp"
#include "stockbabble/serialization.hpp"
#include "stockbabble/service.hpp"

namespace stockbabble::cli {
namespace {

using indicators::IndicatorId;

std::string reading_text(IndicatorId id, const indicators::Reading& r) {
  switch (id) {
    case IndicatorId::MACD:
      return fmt::format("macd {:.6f}  signal {:.6f}  histogram {:.6f}", r.value,
                         r.signal.value_or(0), r.histogram.value_or(0));
    case IndicatorId::STO:
      return fmt::format("%K {:.6f}  %D {:.6f}", r.value, r.signal.value_or(0));
    default:
      return fmt::format("{:.6f}", r.value);
  }
}

struct Renderer {
  std::string& out;

  void operator()(const dialogue::Chart& chart) const {
    const auto closes = chart.series.closes();
    const auto tail = std::min<std::size_t>(closes.size(), 40);
    out += fmt::format("  [chart] {} {} daily bars\n", chart.series.ticker, closes.size());
    out += fmt::format("  {}\n",
                       sparkline(std::span<const double>(closes).subspan(closes.size() - tail)));
    for (const auto& overlay : chart.overlays) {
      const bool visible =
          std::find(chart.default_visible_overlays.begin(), chart.default_visible_overlays.end(),
                    overlay.id) != chart.default_visible_overlays.end();
      if (overlay.empty()) continue;
      out += fmt::format("  {} {:<6} {}\n", visible ? "*" : " ", indicators::to_string(overlay.id),
                         reading_text(overlay.id, overlay.latest()));
    }
  }
  void operator()(const dialogue::NewsTimeline& news) const {
    out += fmt::format("  [news] {}\n", news.ticker);
    for (const auto& item : news.items) {
      out += fmt::format("  {}  {} ({})\n", format_rfc3339(item.published_at).substr(0, 10),
                         item.headline, item.source);
    }
  }
  void operator()(const dialogue::ProfileCard& card) const {
    const auto& p = card.profile;
    out += fmt::format("  [profile] {} ({})\n", p.name, p.ticker);
    out += fmt::format("  CEO: {}   HQ: {}   Sector: {}\n", p.ceo, p.headquarters, p.sector);
    out += fmt::format("  Dividend: {}   Market cap: {:.0f}\n",
                       p.dividend_reported ? fmt::format("{:.2f}", p.annual_dividend)
                                           : std::string("not reported"),
                       p.market_cap);
    out += fmt::format("  {}\n", p.description);
  }
  void operator()(const dialogue::RecommendationGauge& gauge) const {
    out += fmt::format("  [recommendation] {}: {} (score {:+d})\n", gauge.recommendation.ticker,
                       display_name(gauge.recommendation.label), gauge.recommendation.score);
    for (const auto& line : gauge.explanation) out += fmt::format("    {}\n", line);
  }
  void operator()(const dialogue::PortfolioTable& table) const {
    const auto& v = table.valuation;
    out += "  [portfolio]\n";
    for (const auto& p : v.positions) {
      out += fmt::format("  {:<6} {:>6} shares  cost {:>12.2f}  value {:>12.2f}  P&L {:+.2f} ({:+.2f}%)\n",
                         p.ticker, p.shares, p.cost_basis, p.market_value, p.pnl_abs,
                         p.pnl_pct * 100.0);
    }
    out += fmt::format("  total  cost {:.2f}  value {:.2f}  P&L {:+.2f} ({:+.2f}%)\n", v.total_cost,
                       v.total_value, v.total_pnl_abs, v.total_pnl_pct * 100.0);
  }
  void operator()(const dialogue::TermCard& card) const {
    out += fmt::format("  [term] {}\n  {}\n", card.entry.title, card.entry.definition);
    if (!card.related.empty()) {
      std::vector<std::string> titles;
      for (const auto& r : card.related) titles.push_back(r.title);
      out += fmt::format("  Related: {}\n", fmt::join(titles, ", "));
    }
  }
  void operator()(const dialogue::TextBlock& block) const {
    out += fmt::format("  [{}]\n", block.title);
    for (const auto& line : block.lines) out += fmt::format("  - {}\n", line);
  }
};

}  // namespace

std::string sparkline(std::span<const double> values) {
  static constexpr const char* kBlocks[] = {"▁", "▂", "▃", "▄", "▅", "▆", "▇", "█"};
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::string out;
  for (const double v : values) {
    const int level = *hi == *lo ? 3 : static_cast<int>((v - *lo) / (*hi - *lo) * 7.0 + 0.5);
    out += kBlocks[std::clamp(level, 0, 7)];
  }
  return out;
}

std::string render_response(const dialogue::ChatResponse& response) {
  std::string out;
  for (const auto& m : response.messages) out += fmt::format("bot> {}\n", m);
  for (const auto& c : response.components) std::visit(Renderer{out}, c.payload);
  for (std::size_t i = 0; i < response.suggestions.size(); ++i) {
    out += fmt::format("  {}) {}\n", i + 1, response.suggestions[i]);
  }
  return out;
}

int run_repl(const dialogue::Engine& engine, dialogue::Session& session, std::istream& in,
             std::ostream& out, ReplOptions options) {
  std::vector<std::string> last_suggestions;
  if (!options.json) out << "StockBabble. Type a question, a suggestion number, or \"quit\".\n";
  std::string line;
  while (true) {
    if (!options.json) out << "you> " << std::flush;
    if (!std::getline(in, line)) break;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line == "quit" || line == "exit") break;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    // A bare number replays that suggestion verbatim.
    if (line.find_first_not_of("0123456789") == std::string::npos && line.size() < 4) {
      const auto pick = static_cast<std::size_t>(std::stoul(line));
      if (pick >= 1 && pick <= last_suggestions.size()) {
        line = last_suggestions[pick - 1];
        if (!options.json) out << "you> " << line << "\n";
      }
    }
    try {
      const auto response = engine.handle(session, line);
      last_suggestions = response.suggestions;
      if (options.json) {
        out << to_json(response).dump() << "\n";
      } else {
        out << render_response(response);
      }
    } catch (const Error& e) {
      if (options.json) {
        out << error_body(to_string(e.code()), e.what()) << "\n";
      } else {
        out << "bot> " << e.what() << "\n";
      }
    }
  }
  return kExitOk;
}

int run_demo(const dialogue::Engine& engine, dialogue::Session& session,
             const std::vector<std::string>& script, std::ostream& out, bool verbose) {
  const auto transcript = engine.run_script(session, script);
  std::size_t fallbacks = 0;
  for (const auto& entry : transcript) {
    if (entry.intent == nlu::Intent::Fallback) ++fallbacks;
  }
  if (verbose) {
    for (const auto& entry : transcript) {
      out << dialogue::format_transcript({entry});
      for (const auto& m : entry.messages) out << "  says: " << m << "\n";
    }
  } else {
    out << dialogue::format_transcript(transcript);
  }
  out << fmt::format("{} turns, {} fallbacks\n", transcript.size(), fallbacks);
  return fallbacks == 0 ? kExitOk : kExitFallback;
}

int run_analyze(const std::filesystem::path& csv, bool json, std::ostream& out, std::ostream& err) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) {
    err << "error: cannot open " << csv.string() << "\n";
    return kExitUsage;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  CandleSeries series;
  series.ticker = csv.stem().string();
  try {
    series.candles = parse_candles_csv(buffer.str(), csv.string());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const auto rec = recommend(series.ticker, series);
    if (json) {
      out << to_json(rec).dump(2) << "\n";
      return kExitOk;
    }
    out << fmt::format("{}: {} daily bars, last {}\n", series.ticker, series.candles.size(),
                       format_date(series.candles.back().date));
    for (std::size_t i = 0; i < rec.signals.size(); ++i) {
      const auto& s = rec.signals[i];
      const auto output = indicators::compute(s.id, series);
      out << fmt::format("{:<6} {:<8} {}\n       {}\n", indicators::to_string(s.id),
                         to_string(s.signal), reading_text(s.id, output.latest()), s.evidence);
    }
    out << fmt::format("score {:+d}  label {}\n", rec.score, display_name(rec.label));
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData) throw;
    err << "error: insufficient data: " << e.what() << "\n";
    return kExitInsufficientData;
  }
}

}  // namespace stockbabble::cli
