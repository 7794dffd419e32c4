#pragma once

#include <cmath>
#include <random>
#include <vector>

namespace testseries {

struct Ohlc {
  std::vector<double> high, low, close;
};

// Geometric random walk with occasional flat stretches, so ties and
// zero-change runs actually occur.
inline Ohlc random_ohlc(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> start(5.0, 500.0);
  std::normal_distribution<double> step(0.0, 0.02);
  std::uniform_real_distribution<double> wick(0.0, 0.01);
  std::bernoulli_distribution flat(0.08);
  Ohlc s;
  double price = start(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (!flat(rng)) price *= std::exp(step(rng));
    const double up = price * wick(rng);
    const double down = price * wick(rng);
    s.close.push_back(price);
    s.high.push_back(price + up);
    s.low.push_back(price - down);
  }
  return s;
}

}  // namespace testseries
