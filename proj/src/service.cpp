#include "stockbabble/service.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include "stockbabble/error.hpp"
#include "stockbabble/serialization.hpp"

namespace stockbabble {
namespace {

ApiResponse json_response(int status, const Json& body) { return {status, body.dump()}; }

ApiResponse error_response(ErrorCode code, std::string_view message) {
  return {http_status(code), error_body(to_string(code), message)};
}

Json parse_object(const std::string& body) {
  Json json;
  try {
    json = Json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::BadRequest, "request body is not valid JSON");
  }
  if (!json.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
  return json;
}

std::string string_field(const Json& json, const char* key) {
  const auto it = json.find(key);
  if (it == json.end() || !it->is_string()) {
    throw Error(ErrorCode::BadRequest, fmt::format("field '{}' must be a string", key));
  }
  return it->get<std::string>();
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UsernameTaken: return 409;
    case ErrorCode::BadCredentials:
    case ErrorCode::InvalidToken:
    case ErrorCode::TokenExpired: return 401;
    case ErrorCode::ProviderUnavailable:
    case ErrorCode::StoreFailure: return 503;
    case ErrorCode::UnknownUser: return 404;
    default: return 400;
  }
}

std::string error_body(std::string_view code, std::string_view message) {
  return Json{{"error", {{"code", code}, {"message", message}}}}.dump();
}

ApiRouter::ApiRouter(std::shared_ptr<Store> store, std::shared_ptr<const dialogue::Engine> engine,
                     std::shared_ptr<PortfolioBook> portfolio,
                     std::shared_ptr<TokenRegistry> tokens, ServiceOptions options)
    : store_(std::move(store)),
      engine_(std::move(engine)),
      portfolio_(std::move(portfolio)),
      tokens_(std::move(tokens)),
      options_(std::move(options)),
      dummy_hash_(hash_password(random_hex(16), options_.password_iterations)) {}

ApiResponse ApiRouter::dispatch(const ApiRequest& request) {
  ApiResponse response;
  try {
    if (request.path == "/api/health" && request.method == "GET") {
      response = json_response(200, {{"status", "ok"}});
    } else if (request.path == "/api/register" && request.method == "POST") {
      response = do_register(request);
    } else if (request.path == "/api/login" && request.method == "POST") {
      response = do_login(request);
    } else if (request.path == "/api/message" && request.method == "POST") {
      response = do_message(request);
    } else if (request.path == "/api/portfolio" && request.method == "GET") {
      response = do_portfolio(request);
    } else {
      response = {404, error_body("NotFound", fmt::format("no route for {} {}", request.method,
                                                          request.path))};
    }
  } catch (const Error& e) {
    response = error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    response = {500, error_body("Internal", e.what())};
  }
  if (options_.log) {
    options_.log(fmt::format("{} {} {}", request.method, request.path, response.status));
  }
  return response;
}

ApiResponse ApiRouter::do_register(const ApiRequest& request) {
  const auto body = parse_object(request.body);
  const auto username = string_field(body, "username");
  const auto password = string_field(body, "password");
  if (username.empty() || username.size() > 64) {
    throw Error(ErrorCode::BadRequest, "username must be 1 to 64 characters");
  }
  if (password.size() < options_.min_password_length) {
    throw Error(ErrorCode::WeakPassword,
                fmt::format("password must be at least {} characters", options_.min_password_length));
  }
  const auto user =
      store_->create_user(username, hash_password(password, options_.password_iterations));
  return json_response(201, {{"userId", user.user_id}});
}

ApiResponse ApiRouter::do_login(const ApiRequest& request) {
  const auto body = parse_object(request.body);
  const auto username = string_field(body, "username");
  const auto password = string_field(body, "password");
  const auto user = store_->find_user_by_name(username);
  // Hash either way so unknown users cost the same as wrong passwords.
  const bool ok = verify_password(password, user ? user->password_hash : dummy_hash_);
  if (!user || !ok) throw Error(ErrorCode::BadCredentials, "invalid username or password");
  const auto token = tokens_->issue(user->user_id);
  return json_response(200, {{"token", token.token},
                             {"userId", user->user_id},
                             {"expiresAt", format_rfc3339(token.expires_at)}});
}

std::string ApiRouter::authenticate(const ApiRequest& request) {
  constexpr std::string_view kBearer = "Bearer ";
  std::string_view header = request.authorization;
  if (header.substr(0, kBearer.size()) != kBearer) {
    throw Error(ErrorCode::InvalidToken, "missing or unknown token");
  }
  return tokens_->verify(header.substr(kBearer.size()));
}

std::shared_ptr<ApiRouter::SessionSlot> ApiRouter::session_for(const std::string& user_id) {
  std::lock_guard lock(sessions_mutex_);
  auto& slot = sessions_[user_id];
  if (!slot) {
    slot = std::make_shared<SessionSlot>();
    slot->session.session_id = "s" + random_hex(6);
    slot->session.user_id = user_id;
  }
  return slot;
}

ApiResponse ApiRouter::do_message(const ApiRequest& request) {
  const auto user_id = authenticate(request);
  const auto body = parse_object(request.body);
  const auto text = string_field(body, "text");
  const auto slot = session_for(user_id);
  std::lock_guard lock(slot->mutex);
  return json_response(200, to_json(engine_->handle(slot->session, text)));
}

ApiResponse ApiRouter::do_portfolio(const ApiRequest& request) {
  const auto user_id = authenticate(request);
  return json_response(200, to_json(portfolio_->value_portfolio(user_id)));
}

struct HttpServer::Impl {
  std::shared_ptr<ApiRouter> router;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<ApiRouter> router, std::string static_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->router = std::move(router);
  auto forward = [router = impl_->router](const httplib::Request& req, httplib::Response& res) {
    const auto out = router->dispatch(
        ApiRequest{req.method, req.path, req.get_header_value("Authorization"), req.body});
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  auto& server = impl_->server;
  // httplib's default adds SO_REUSEPORT, which lets a second server share a
  // busy port silently. Plain SO_REUSEADDR makes that bind fail.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Get(R"(/api/.*)", forward);
  server.Post(R"(/api/.*)", forward);
  server.Put(R"(/api/.*)", forward);
  server.Delete(R"(/api/.*)", forward);
  server.Patch(R"(/api/.*)", forward);
  // Anything httplib answers on its own still gets the JSON error shape.
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const auto code = res.status == 404 ? "NotFound" : "BadRequest";
    res.set_content(error_body(code, fmt::format("no route for {} {}", req.method, req.path)),
                    "application/json");
  });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  if (!static_dir.empty()) server.set_mount_point("/", static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace stockbabble
