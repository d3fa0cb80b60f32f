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

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "qfaas/error.hpp"
#include "qfaas/gateway/http_server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qfaas gateway server", "qfaasd"};
  std::string config_path, listen, data_dir, catalog, ui_dir, log_level = "info";
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--listen", listen, "host:port (overrides config and QFAAS_LISTEN)");
  app.add_option("--data-dir", data_dir, "Data directory");
  app.add_option("--catalog", catalog, "Backend catalog JSON")->check(CLI::ExistingFile);
  app.add_option("--ui-dir", ui_dir, "Dashboard assets served under /ui/");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error"}));
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  // Signals are handled by a dedicated thread; block them everywhere else.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    using namespace qfaas::gateway;
    GatewayConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    config = apply_env(std::move(config), environment_snapshot());
    if (!listen.empty()) config = config_from_json({{"listen", listen}}, std::move(config));
    if (!data_dir.empty()) config.data_dir = data_dir;
    if (!catalog.empty()) config.catalog_path = catalog;
    if (!ui_dir.empty()) config.ui_dir = ui_dir;

    Gateway gateway(config);
    HttpServer server(gateway);
    const int port = server.bind(config.host, config.port);
    spdlog::info("listening on {}:{} (data dir {})", config.host, port, config.data_dir.string());

    std::jthread waiter([&server, signals] {
      int received = 0;
      sigwait(&signals, &received);
      spdlog::info("received signal {}, shutting down", received);
      server.stop();
    });
    server.run();
    pthread_kill(waiter.native_handle(), SIGTERM);
  } catch (const qfaas::Error& e) {
    spdlog::critical("{}: {}", e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::critical("{}", e.what());
    return 1;
  }
  return 0;
}
