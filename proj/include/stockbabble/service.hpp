#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "stockbabble/auth.hpp"
#include "stockbabble/dialogue.hpp"
#include "stockbabble/error.hpp"
#include "stockbabble/store.hpp"

namespace stockbabble {

struct ApiRequest {
  std::string method;  // "GET", "POST"
  std::string path;    // "/api/message"
  std::string authorization;  // raw Authorization header, may be empty
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON document
};

struct ServiceOptions {
  int password_iterations = kDefaultPasswordIterations;
  std::size_t min_password_length = 8;
  // Receives one line per request: method, path, status. Never bodies.
  std::function<void(std::string_view)> log;
};

// JSON API over the dialogue engine, independent of the HTTP transport.
//
//   GET  /api/health
//   POST /api/register   {username, password}  -> 201 {userId}
//   POST /api/login      {username, password}  -> 200 {token, userId, expiresAt}
//   POST /api/message    {text}        bearer  -> 200 ChatResponse
//   GET  /api/portfolio                bearer  -> 200 Valuation
//
// Errors are {"error": {"code", "message"}} with 400/401/404/409/503.
class ApiRouter {
 public:
  ApiRouter(std::shared_ptr<Store> store, std::shared_ptr<const dialogue::Engine> engine,
            std::shared_ptr<PortfolioBook> portfolio, std::shared_ptr<TokenRegistry> tokens,
            ServiceOptions options = {});

  ApiResponse dispatch(const ApiRequest& request);

 private:
  struct SessionSlot {
    std::mutex mutex;
    dialogue::Session session;
  };

  ApiResponse do_register(const ApiRequest& request);
  ApiResponse do_login(const ApiRequest& request);
  ApiResponse do_message(const ApiRequest& request);
  ApiResponse do_portfolio(const ApiRequest& request);
  std::string authenticate(const ApiRequest& request);
  std::shared_ptr<SessionSlot> session_for(const std::string& user_id);

  std::shared_ptr<Store> store_;
  std::shared_ptr<const dialogue::Engine> engine_;
  std::shared_ptr<PortfolioBook> portfolio_;
  std::shared_ptr<TokenRegistry> tokens_;
  ServiceOptions options_;
  std::string dummy_hash_;  // verified against for unknown users

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
};

int http_status(ErrorCode code) noexcept;
std::string error_body(std::string_view code, std::string_view message);

// Blocking HTTP server around an ApiRouter.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<ApiRouter> router, std::string static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds without serving. port 0 picks a free port. Returns the bound port
  // or -1 on failure.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after a successful bind().
  bool serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stockbabble
