#include "stockbabble/app.hpp"

#include <fmt/format.h>

#include <cstdlib>

#include "stockbabble/error.hpp"
#include "stockbabble/live_provider.hpp"

#ifndef STOCKBABBLE_DATA_DIR
#define STOCKBABBLE_DATA_DIR "data"
#endif

namespace stockbabble {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("STOCKBABBLE_DATA"); env && *env) return env;
  return STOCKBABBLE_DATA_DIR;
}

App build_app(const AppConfig& config, Clock clock) {
  App app;
  const auto live = LiveProviderConfig::from_env();
  if (config.fixtures_dir) {
    app.provider = FixtureProvider::load(*config.fixtures_dir);
    app.provider_description = fmt::format("fixtures at {}", config.fixtures_dir->string());
  } else if (!live.base_url.empty()) {
    app.provider = std::make_shared<LiveProvider>(live, clock);
    app.provider_description = fmt::format("live data from {}", live.base_url);
  } else {
    const auto dir = config.data_dir / "fixtures";
    app.provider = FixtureProvider::load(dir);
    app.provider_description = fmt::format("fixtures at {}", dir.string());
  }

  app.glossary = std::make_shared<Glossary>(Glossary::load(config.data_dir / "glossary.json"));
  app.corpus = std::make_shared<nlu::Corpus>(nlu::Corpus::load(config.data_dir / "corpus.json"));
  dialogue::seed_dictionaries(*app.corpus, *app.glossary, app.provider->known_profiles());
  app.corpus->validate();

  app.store = std::make_shared<Store>(config.store_path, clock);
  app.portfolio = std::make_shared<PortfolioBook>(app.store, app.provider, clock);
  app.engine =
      std::make_shared<dialogue::Engine>(app.provider, app.corpus, app.glossary, app.portfolio);
  return app;
}

}  // namespace stockbabble
