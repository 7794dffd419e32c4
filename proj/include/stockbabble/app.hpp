#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "stockbabble/dialogue.hpp"
#include "stockbabble/knowledge.hpp"
#include "stockbabble/market_data.hpp"
#include "stockbabble/nlu.hpp"
#include "stockbabble/portfolio.hpp"
#include "stockbabble/store.hpp"

namespace stockbabble {

// $STOCKBABBLE_DATA, else the data directory of the source tree.
std::filesystem::path default_data_dir();

struct AppConfig {
  std::filesystem::path data_dir = default_data_dir();  // corpus.json, glossary.json
  // Fixture directory. Unset: live provider when STOCKBABBLE_DATA_URL is set,
  // otherwise <data_dir>/fixtures.
  std::optional<std::filesystem::path> fixtures_dir;
  std::filesystem::path store_path;  // empty keeps the store in memory
};

// Everything the dialogue engine needs, wired together.
struct App {
  std::shared_ptr<MarketDataProvider> provider;
  std::shared_ptr<nlu::Corpus> corpus;
  std::shared_ptr<Glossary> glossary;
  std::shared_ptr<Store> store;
  std::shared_ptr<PortfolioBook> portfolio;
  std::shared_ptr<dialogue::Engine> engine;
  std::string provider_description;  // for startup banners
};

// Throws Error (MalformedFixture, MalformedCorpus, StoreFailure) on bad input.
App build_app(const AppConfig& config, Clock clock = system_now);

}  // namespace stockbabble
