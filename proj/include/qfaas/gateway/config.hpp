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

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfaas/role.hpp"

namespace qfaas::gateway {

enum class PasswordCost { Interactive, Minimal };

struct SeedUser {
  std::string username;
  std::string password;
  Role role = Role::EndUser;
};

struct GatewayConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8080;
  std::filesystem::path data_dir = "data";
  std::optional<std::filesystem::path> catalog_path;
  std::optional<std::filesystem::path> ui_dir;
  std::size_t sim_workers = 2;
  std::size_t http_workers = 16;
  std::size_t pipeline_workers = 1;
  std::chrono::milliseconds threshold{60000};
  std::chrono::seconds token_ttl{3600};
  unsigned max_qubits = 24;
  std::size_t max_in_flight_per_provider = 64;
  std::optional<std::string> admin_password;
  std::vector<SeedUser> users;
  PasswordCost password_cost = PasswordCost::Interactive;
  bool durable = true;
};

/// Reads a JSON config file. Keys mirror the struct fields ("listen" takes
/// "host:port"); unknown keys throw ConfigError.
GatewayConfig config_from_json(const nlohmann::json& doc, GatewayConfig base = {});
GatewayConfig load_config(const std::filesystem::path& path, GatewayConfig base = {});

/// Applies QFAAS_LISTEN, QFAAS_DATA_DIR, QFAAS_CATALOG, QFAAS_UI_DIR,
/// QFAAS_SIM_WORKERS, QFAAS_HTTP_WORKERS, QFAAS_THRESHOLD_MS,
/// QFAAS_TOKEN_TTL, QFAAS_MAX_QUBITS and QFAAS_ADMIN_PASSWORD.
/// `env` maps names to values; pass environment_snapshot() for the process.
GatewayConfig apply_env(GatewayConfig config, const std::map<std::string, std::string>& env);
std::map<std::string, std::string> environment_snapshot();

}  // namespace qfaas::gateway
