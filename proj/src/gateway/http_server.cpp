// Copyright 2026 The QFaaS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfaas/gateway/http_server.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <thread>

#include "qfaas/error.hpp"

namespace qfaas::gateway {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json error_body(const Error& e) { return {{"error", e.code()}, {"message", e.what()}, {"details", e.details()}}; }

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nullptr;
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error("InvalidJson", std::string("request body is not valid JSON: ") + e.what());
  }
}

std::map<std::string, std::string> query_of(const httplib::Request& req) {
  std::map<std::string, std::string> q;
  for (const auto& [k, v] : req.params) q.emplace(k, v);
  return q;
}

}  // namespace

struct HttpServer::Impl {
  Gateway& gateway;
  httplib::Server server;
  std::thread thread;

  explicit Impl(Gateway& g) : gateway(g) {
    const std::size_t workers = gateway.config().http_workers;
    server.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
    install_routes();
  }

  /// Runs `body`, turning exceptions into JSON error responses. `envelope`
  /// adds "data": null so invocation errors still parse as {data, details}.
  template <typename F>
  void guarded(httplib::Response& res, F&& body, bool envelope = false) {
    try {
      body();
    } catch (const Error& e) {
      json b = error_body(e);
      if (envelope) b["data"] = nullptr;
      send_json(res, http_status_for(e.code()), b);
    } catch (const std::exception& e) {
      spdlog::error("unhandled exception in request: {}", e.what());
      json b = {{"error", "InternalError"}, {"message", e.what()}, {"details", json::object()}};
      if (envelope) b["data"] = nullptr;
      send_json(res, 500, b);
    }
  }

  Principal caller(const httplib::Request& req) {
    return gateway.authenticate(req.get_header_value("Authorization"));
  }

  void install_routes() {
    server.Post("/api/auth/login", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        std::string username;
        std::string password;
        const auto type = req.get_header_value("Content-Type");
        if (type.find("application/x-www-form-urlencoded") != std::string::npos) {
          username = req.get_param_value("username");
          password = req.get_param_value("password");
        } else {
          const json body = parse_body(req);
          if (!body.is_object() || !body.contains("username") || !body.contains("password") ||
              !body["username"].is_string() || !body["password"].is_string()) {
            throw Error("ValidationError", "login body must be {\"username\", \"password\"}");
          }
          username = body["username"].get<std::string>();
          password = body["password"].get<std::string>();
        }
        send_json(res, 200, gateway.login(username, password));
      });
    });

    server.Get("/api/auth/me", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        send_json(res, 200, {{"username", p.username}, {"role", role_name(p.role)}});
      });
    });

    server.Post("/api/function/:id", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(
          res,
          [&] {
            const auto p = caller(req);
            send_json(res, 200, gateway.invoke(req.path_params.at("id"), parse_body(req), p));
          },
          true);
    });

    server.Post("/api/functions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        send_json(res, 202, gateway.create_function(parse_body(req), p));
      });
    });
    server.Get("/api/functions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send_json(res, 200, gateway.list_functions(caller(req))); });
    });
    server.Get("/api/functions/:id", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        send_json(res, 200, gateway.get_function(req.path_params.at("id"), p));
      });
    });
    server.Put("/api/functions/:id", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        const json body = parse_body(req);
        const bool redeploy = body.is_object() && body.contains("fnCode");
        send_json(res, redeploy ? 202 : 200, gateway.update_function(req.path_params.at("id"), body, p));
      });
    });
    server.Delete("/api/functions/:id", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        gateway.delete_function(req.path_params.at("id"), p);
        res.status = 204;
      });
    });
    server.Get("/api/functions/:id/deployments", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        send_json(res, 200, gateway.function_deployments(req.path_params.at("id"), p));
      });
    });

    server.Get("/api/job/:id", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        send_json(res, 200, gateway.get_job(req.path_params.at("id"), p));
      });
    });
    server.Get("/api/jobs", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto p = caller(req);
        send_json(res, 200, gateway.list_jobs(query_of(req), p));
      });
    });
    server.Get("/api/backends", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        caller(req);
        send_json(res, 200, gateway.list_backends(query_of(req)));
      });
    });

    server.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(gateway.metrics_text(), "text/plain; version=0.0.4");
    });

    if (const auto& ui = gateway.config().ui_dir) {
      if (std::filesystem::is_directory(*ui)) {
        server.set_mount_point("/ui", ui->string());
        server.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/ui/"); });
      } else {
        spdlog::warn("ui_dir {} is not a directory; /ui/ is not served", ui->string());
      }
    }

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      const std::string code = res.status == 404 ? "NotFound" : "HttpError";
      send_json(res, res.status, {{"error", code}, {"message", "no such route"}, {"details", json::object()}});
    });
    server.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      gateway.metrics().http_response(res.status);
      spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
    });
  }
};

HttpServer::HttpServer(Gateway& gateway) : impl_(std::make_unique<Impl>(gateway)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("ConfigError", "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("ConfigError", "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace qfaas::gateway
