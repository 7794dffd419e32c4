#include <CLI11.hpp>
#include <fmt/format.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

#include "stockbabble/app.hpp"
#include "stockbabble/auth.hpp"
#include "stockbabble/cli.hpp"
#include "stockbabble/error.hpp"
#include "stockbabble/service.hpp"

namespace {

using namespace stockbabble;

std::string env_or(const char* name, std::string fallback) {
  const char* value = std::getenv(name);
  return value && *value ? value : fallback;
}

// Fills fixtures from --fixtures or STOCKBABBLE_FIXTURES. Returns false when a
// named directory does not exist.
bool resolve_fixtures(const std::string& flag, AppConfig& config) {
  const auto dir = flag.empty() ? env_or("STOCKBABBLE_FIXTURES", "") : flag;
  if (dir.empty()) return true;
  if (!std::filesystem::is_directory(dir)) {
    std::cerr << fmt::format(
        "error: fixture directory '{}' does not exist. Pass --fixtures DIR, or unset it and set "
        "STOCKBABBLE_DATA_URL and STOCKBABBLE_DATA_KEY for live data.\n",
        dir);
    return false;
  }
  config.fixtures_dir = dir;
  return true;
}

int serve(int port, const std::string& fixtures, const std::string& store_path,
          const std::string& static_dir) {
  AppConfig config;
  config.store_path = store_path;
  if (!resolve_fixtures(fixtures, config)) return cli::kExitUsage;

  // Signals are handled on a dedicated thread so the server can stop cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  App app;
  try {
    app = build_app(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  auto router = std::make_shared<ApiRouter>(
      app.store, app.engine, app.portfolio, std::make_shared<TokenRegistry>(),
      ServiceOptions{kDefaultPasswordIterations, 8,
                     [](std::string_view line) { std::cerr << line << "\n"; }});
  HttpServer server(router, static_dir);
  if (server.bind("0.0.0.0", port) < 0) {
    std::cerr << fmt::format("error: cannot listen on port {} (in use?)\n", port);
    return cli::kExitUsage;
  }
  std::cout << fmt::format("stockbabble listening on port {}; data: {}; store: {}\n", port,
                           app.provider_description,
                           store_path.empty() ? std::string("in memory") : store_path)
            << std::flush;

  std::thread waiter([&] {
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
  });
  server.serve();
  // Wake the waiter if the server stopped on its own.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return cli::kExitOk;
}

int repl(const std::string& user, const std::string& fixtures, const std::string& store_path,
         bool json) {
  AppConfig config;
  config.store_path = store_path;
  if (!resolve_fixtures(fixtures, config)) return cli::kExitUsage;
  App app;
  try {
    app = build_app(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  dialogue::Session session;
  session.session_id = "repl";
  // Local users get an unusable random password; they only exist for the portfolio.
  auto record = app.store->find_user_by_name(user);
  if (!record) record = app.store->create_user(user, hash_password(random_hex(16)));
  session.user_id = record->user_id;
  return cli::run_repl(*app.engine, session, std::cin, std::cout, {json});
}

int demo(const std::string& script_path, const std::string& fixtures, bool verbose) {
  AppConfig config;
  if (!resolve_fixtures(fixtures, config)) return cli::kExitUsage;
  const auto path = script_path.empty()
                        ? (config.data_dir / "scripts" / "isabelle.txt").string()
                        : script_path;
  std::ifstream in(path);
  if (!in) {
    std::cerr << fmt::format("error: cannot read script '{}'\n", path);
    return cli::kExitUsage;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const auto script = dialogue::read_script(text.str());
  if (script.empty()) {
    std::cerr << fmt::format("error: script '{}' has no utterances\n", path);
    return cli::kExitUsage;
  }
  App app;
  try {
    app = build_app(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  dialogue::Session session;
  session.session_id = "demo";
  session.user_id = app.store->create_user("isabelle", hash_password(random_hex(16), 1)).user_id;
  return cli::run_demo(*app.engine, session, script, std::cout, verbose);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"StockBabble: conversational stock market assistant"};
  app.require_subcommand(1);

  int port = std::atoi(env_or("STOCKBABBLE_PORT", "8080").c_str());
  std::string fixtures;
  std::string store_path = env_or("STOCKBABBLE_STORE", "");
  std::string static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve_cmd->add_option("--port", port, "Listen port (STOCKBABBLE_PORT, default 8080)");
  serve_cmd->add_option("--fixtures", fixtures, "Fixture directory (STOCKBABBLE_FIXTURES)");
  serve_cmd->add_option("--store", store_path, "Store file (STOCKBABBLE_STORE)");
  serve_cmd->add_option("--static", static_dir, "Directory of web client files to serve at /");

  std::string user = "local";
  bool json = false;
  auto* repl_cmd = app.add_subcommand("repl", "Chat in the terminal");
  repl_cmd->add_option("--user", user, "Local user name owning the portfolio");
  repl_cmd->add_option("--fixtures", fixtures, "Fixture directory (STOCKBABBLE_FIXTURES)");
  repl_cmd->add_option("--store", store_path, "Store file (STOCKBABBLE_STORE)");
  repl_cmd->add_flag("--json", json, "Print each reply as a JSON line");

  std::string script;
  bool verbose = false;
  auto* demo_cmd = app.add_subcommand("demo", "Replay a scripted conversation");
  demo_cmd->add_option("--script", script, "Script file, one utterance per line");
  demo_cmd->add_option("--fixtures", fixtures, "Fixture directory (STOCKBABBLE_FIXTURES)");
  demo_cmd->add_flag("--verbose", verbose, "Include the agent's messages");

  std::string csv;
  auto* analyze_cmd = app.add_subcommand("analyze", "Indicators and recommendation for a CSV");
  analyze_cmd->add_option("--csv", csv, "Candles CSV (date,open,high,low,close,volume)")
      ->required();
  analyze_cmd->add_flag("--json", json, "Emit the recommendation as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  try {
    if (*serve_cmd) return serve(port, fixtures, store_path, static_dir);
    if (*repl_cmd) return repl(user, fixtures, store_path, json);
    if (*demo_cmd) return demo(script, fixtures, verbose);
    if (*analyze_cmd) return cli::run_analyze(csv, json, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
