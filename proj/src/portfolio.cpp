#include "stockbabble/portfolio.hpp"

#include <fmt/format.h>

#include "stockbabble/error.hpp"

namespace stockbabble {

void apply_add(Portfolio& portfolio, std::string_view ticker, std::int64_t shares, double price,
               Instant now) {
  if (shares <= 0) {
    throw Error(ErrorCode::InvalidQuantity,
                fmt::format("share count must be positive, got {}", shares));
  }
  if (!(price > 0)) {
    throw Error(ErrorCode::ProviderUnavailable, fmt::format("no usable price for {}", ticker));
  }
  const std::string key(ticker);
  auto it = portfolio.positions.find(key);
  if (it == portfolio.positions.end()) {
    it = portfolio.positions.emplace(key, Position{key, 0, 0.0, now}).first;
  }
  it->second.shares += shares;
  it->second.cost_basis += static_cast<double>(shares) * price;
  portfolio.updated_at = now;
}

void apply_remove(Portfolio& portfolio, std::string_view ticker, std::int64_t shares, Instant now) {
  const auto it = portfolio.positions.find(std::string(ticker));
  if (it == portfolio.positions.end()) {
    throw Error(ErrorCode::UnknownPosition, fmt::format("no {} shares in the portfolio", ticker));
  }
  auto& position = it->second;
  if (shares <= 0 || shares > position.shares) {
    throw Error(ErrorCode::InvalidQuantity,
                fmt::format("cannot remove {} shares of {}; {} held", shares, ticker,
                            position.shares));
  }
  const auto remaining = position.shares - shares;
  if (remaining == 0) {
    portfolio.positions.erase(it);
  } else {
    position.cost_basis =
        position.cost_basis * static_cast<double>(remaining) / static_cast<double>(position.shares);
    position.shares = remaining;
  }
  portfolio.updated_at = now;
}

Valuation value(const Portfolio& portfolio,
                const std::function<double(const std::string&)>& price_of, Instant as_of) {
  Valuation v;
  v.as_of = as_of;
  for (const auto& [ticker, position] : portfolio.positions) {
    PositionValuation row;
    row.ticker = ticker;
    row.shares = position.shares;
    row.cost_basis = position.cost_basis;
    row.price = price_of(ticker);
    row.market_value = static_cast<double>(position.shares) * row.price;
    row.pnl_abs = row.market_value - row.cost_basis;
    row.pnl_pct = row.pnl_abs / row.cost_basis;
    v.total_cost += row.cost_basis;
    v.total_value += row.market_value;
    v.total_pnl_abs += row.pnl_abs;
    v.positions.push_back(std::move(row));
  }
  v.total_pnl_pct = v.total_cost > 0 ? v.total_pnl_abs / v.total_cost : 0.0;
  return v;
}

PortfolioBook::PortfolioBook(std::shared_ptr<PortfolioRepository> repository,
                             std::shared_ptr<const MarketDataProvider> provider, Clock clock)
    : repository_(std::move(repository)), provider_(std::move(provider)), clock_(std::move(clock)) {}

Portfolio PortfolioBook::add_position(std::string_view user_id, std::string_view ticker,
                                      std::int64_t shares) {
  if (shares <= 0) {
    throw Error(ErrorCode::InvalidQuantity,
                fmt::format("share count must be positive, got {}", shares));
  }
  // Price outside the critical section; the quote call may hit the network.
  repository_->load_portfolio(user_id);
  const auto quote = provider_->get_quote(ticker);
  const auto now = clock_();
  return repository_->update_portfolio(user_id, [&](Portfolio& p) {
    apply_add(p, quote.ticker, shares, quote.price, now);
  });
}

Portfolio PortfolioBook::remove_position(std::string_view user_id, std::string_view ticker,
                                         std::int64_t shares) {
  const auto now = clock_();
  return repository_->update_portfolio(user_id,
                                       [&](Portfolio& p) { apply_remove(p, ticker, shares, now); });
}

Valuation PortfolioBook::value_portfolio(std::string_view user_id) const {
  const auto snapshot = repository_->load_portfolio(user_id);
  return value(
      snapshot, [&](const std::string& ticker) { return provider_->get_quote(ticker).price; },
      clock_());
}

Portfolio PortfolioBook::portfolio(std::string_view user_id) const {
  return repository_->load_portfolio(user_id);
}

}  // namespace stockbabble
