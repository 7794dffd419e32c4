#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stockbabble/market_data.hpp"

namespace stockbabble {

// Merged-lot position: cost_basis is the total paid for all held shares.
struct Position {
  std::string ticker;
  std::int64_t shares = 0;
  double cost_basis = 0;
  Instant opened_at;

  bool operator==(const Position&) const = default;
};

struct Portfolio {
  std::string user_id;
  std::map<std::string, Position> positions;  // keyed by ticker
  Instant updated_at;

  bool operator==(const Portfolio&) const = default;
};

struct PositionValuation {
  std::string ticker;
  std::int64_t shares = 0;
  double cost_basis = 0;
  double price = 0;
  double market_value = 0;
  double pnl_abs = 0;
  double pnl_pct = 0;  // fraction: 0.10 is +10%
};

struct Valuation {
  Instant as_of;
  std::vector<PositionValuation> positions;
  double total_cost = 0;
  double total_value = 0;
  double total_pnl_abs = 0;
  double total_pnl_pct = 0;
};

// Buys `shares` at `price` into the portfolio. Throws Error(InvalidQuantity).
void apply_add(Portfolio& portfolio, std::string_view ticker, std::int64_t shares, double price,
               Instant now);
// Sells `shares`, reducing cost basis proportionally; a position sold down to
// zero is removed. Throws Error(UnknownPosition) or Error(InvalidQuantity).
void apply_remove(Portfolio& portfolio, std::string_view ticker, std::int64_t shares, Instant now);
// Values every position with `price_of(ticker)`.
Valuation value(const Portfolio& portfolio,
                const std::function<double(const std::string&)>& price_of, Instant as_of);

// Persistence seam; the service store implements it.
class PortfolioRepository {
 public:
  virtual ~PortfolioRepository() = default;

  // Throws Error(UnknownUser).
  virtual Portfolio load_portfolio(std::string_view user_id) const = 0;

  // Runs `mutate` on the user's portfolio and persists the result atomically.
  // Mutations for one user are serialized. If `mutate` throws, nothing is
  // stored. Returns the stored portfolio.
  virtual Portfolio update_portfolio(std::string_view user_id,
                                     const std::function<void(Portfolio&)>& mutate) = 0;
};

// Portfolio operations priced at the provider's current quote.
class PortfolioBook {
 public:
  PortfolioBook(std::shared_ptr<PortfolioRepository> repository,
                std::shared_ptr<const MarketDataProvider> provider, Clock clock = system_now);

  Portfolio add_position(std::string_view user_id, std::string_view ticker, std::int64_t shares);
  Portfolio remove_position(std::string_view user_id, std::string_view ticker,
                            std::int64_t shares);
  Valuation value_portfolio(std::string_view user_id) const;
  Portfolio portfolio(std::string_view user_id) const;

 private:
  std::shared_ptr<PortfolioRepository> repository_;
  std::shared_ptr<const MarketDataProvider> provider_;
  Clock clock_;
};

}  // namespace stockbabble
