// Copyright 2026 The Toskose Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toskose/manager/rest_api.hpp"

#include <thread>

#include <httplib.h>

#include "toskose/common/error.hpp"

namespace toskose::manager {
namespace {

using nlohmann::json;

constexpr long long kDefaultLogLength = 65536;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view kind, const std::string& message) {
  send_json(res, status, {{"error", kind}, {"message", message}});
}

long long query_int(const httplib::Request& req, const std::string& key, long long fallback) {
  if (!req.has_param(key)) return fallback;
  const auto text = req.get_param_value(key);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || v < 0) fail(Errc::type_mismatch, key + " must be a non-negative integer");
  return v;
}

// Wraps a handler so Error and unexpected exceptions become JSON errors.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  };
}

}  // namespace

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::unknown_target: return 404;
    case Errc::conflict: return 409;
    case Errc::type_mismatch: return 400;
    case Errc::unit_unreachable: return 502;
    case Errc::operation_timeout: return 504;
    default: return 500;
  }
}

int http_status(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::success: return 200;
    case Outcome::failed: return 500;
    case Outcome::timeout: return 504;
    case Outcome::unreachable: return 502;
  }
  return 500;
}

struct RestServer::Impl {
  AppManager& manager;
  RestSettings settings;
  httplib::Server server;
  std::thread thread;
};

RestServer::RestServer(AppManager& manager, RestSettings settings)
    : impl_(std::make_unique<Impl>(manager, std::move(settings))) {
  auto& s = impl_->server;
  auto& m = impl_->manager;
  const std::string api(kApiRoot);

  const std::string expected =
      impl_->settings.authenticate
          ? "Basic " + httplib::detail::base64_encode(impl_->settings.user + ":" + impl_->settings.password)
          : std::string();
  s.set_pre_routing_handler([expected](const httplib::Request& req, httplib::Response& res) {
    if (expected.empty() || !req.path.starts_with("/api")) return httplib::Server::HandlerResponse::Unhandled;
    if (req.get_header_value("Authorization") == expected) return httplib::Server::HandlerResponse::Unhandled;
    res.set_header("WWW-Authenticate", "Basic realm=\"toskose\"");
    send_error(res, 401, "Unauthorized", "credentials required");
    return httplib::Server::HandlerResponse::Handled;
  });

  s.Get(api + "/node", guarded([&m](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, m.list_nodes());
  }));
  s.Get(api + R"(/node/([^/]+))", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, m.node(req.matches[1]));
  }));
  s.Get(api + R"(/node/([^/]+)/([^/]+))", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, m.component(req.matches[1], req.matches[2]));
  }));
  s.Get(api + R"(/node/([^/]+)/([^/]+)/log)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> operation;
    if (req.has_param("operation")) operation = req.get_param_value("operation");
    const auto offset = query_int(req, "offset", 0);
    const auto length = query_int(req, "length", kDefaultLogLength);
    const std::string container = req.matches[1];
    const std::string component = req.matches[2];
    const auto text = m.logs(container, component, operation, offset, length);
    send_json(res, 200,
              {{"container", container},
               {"component", component},
               {"program", program_for(component, operation.value_or("start"))},
               {"offset", offset},
               {"log", text}});
  }));
  s.Post(api + R"(/node/([^/]+)/([^/]+)/([^/]+))",
         guarded([&m](const httplib::Request& req, httplib::Response& res) {
           const auto r = m.execute(req.matches[1], req.matches[2], req.matches[3]);
           send_json(res, http_status(r.outcome), r.to_json());
         }));

  if (!impl_->settings.ui_dir.empty() && std::filesystem::is_directory(impl_->settings.ui_dir)) {
    s.set_mount_point("/ui", impl_->settings.ui_dir.string());
  }
  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) send_error(res, 404, "NotFound", "no route for " + req.path);
  });
}

RestServer::~RestServer() { stop(); }

int RestServer::start() {
  auto& impl = *impl_;
  const std::string host = impl.settings.host.empty() ? "0.0.0.0" : impl.settings.host;
  if (impl.settings.port == 0) {
    port_ = impl.server.bind_to_any_port(host);
    if (port_ <= 0) fail(Errc::io_error, "cannot bind REST listener on " + host);
  } else {
    if (!impl.server.bind_to_port(host, impl.settings.port)) {
      fail(Errc::io_error, "cannot bind REST listener on " + host + ":" + std::to_string(impl.settings.port));
    }
    port_ = impl.settings.port;
  }
  impl.thread = std::thread([&impl] { impl.server.listen_after_bind(); });
  impl.server.wait_until_ready();
  return port_;
}

void RestServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace toskose::manager
