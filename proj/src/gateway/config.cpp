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

#include "qfaas/gateway/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "qfaas/error.hpp"

extern char** environ;

namespace qfaas::gateway {

using nlohmann::json;

namespace {

Error config_error(const std::string& message) { return Error("ConfigError", message); }

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw config_error(std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

void set_listen(GatewayConfig& config, std::string_view listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string_view::npos) throw config_error("listen must be host:port");
  config.host = std::string(listen.substr(0, colon));
  config.port = parse_number<std::uint16_t>(listen.substr(colon + 1), "listen port");
  if (config.host.empty()) config.host = "0.0.0.0";
}

template <typename T>
T positive(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw config_error(std::string(key) + " must be a positive integer");
  }
  return v.get<T>();
}

}  // namespace

GatewayConfig config_from_json(const json& doc, GatewayConfig config) {
  if (!doc.is_object()) throw config_error("config root must be an object");
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "listen") {
        set_listen(config, v.get<std::string>());
      } else if (key == "data_dir") {
        config.data_dir = v.get<std::string>();
      } else if (key == "catalog") {
        config.catalog_path = v.get<std::string>();
      } else if (key == "ui_dir") {
        config.ui_dir = v.get<std::string>();
      } else if (key == "sim_workers") {
        config.sim_workers = positive<std::size_t>(v, "sim_workers");
      } else if (key == "http_workers") {
        config.http_workers = positive<std::size_t>(v, "http_workers");
      } else if (key == "pipeline_workers") {
        config.pipeline_workers = positive<std::size_t>(v, "pipeline_workers");
      } else if (key == "threshold_ms") {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
          throw config_error("threshold_ms must be a non-negative integer");
        }
        config.threshold = std::chrono::milliseconds(v.get<std::int64_t>());
      } else if (key == "token_ttl") {
        config.token_ttl = std::chrono::seconds(positive<std::int64_t>(v, "token_ttl"));
      } else if (key == "max_qubits") {
        config.max_qubits = positive<unsigned>(v, "max_qubits");
      } else if (key == "max_in_flight_per_provider") {
        config.max_in_flight_per_provider = positive<std::size_t>(v, "max_in_flight_per_provider");
      } else if (key == "admin_password") {
        config.admin_password = v.get<std::string>();
      } else if (key == "password_cost") {
        const auto cost = v.get<std::string>();
        if (cost == "interactive") {
          config.password_cost = PasswordCost::Interactive;
        } else if (cost == "minimal") {
          config.password_cost = PasswordCost::Minimal;
        } else {
          throw config_error("password_cost must be interactive or minimal");
        }
      } else if (key == "durable") {
        config.durable = v.get<bool>();
      } else if (key == "users") {
        for (const auto& u : v) {
          const auto role = role_from_name(u.at("role").get<std::string>());
          if (!role) throw config_error("unknown role for user " + u.at("username").get<std::string>());
          config.users.push_back({u.at("username").get<std::string>(), u.at("password").get<std::string>(), *role});
        }
      } else {
        throw config_error("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("malformed config: ") + e.what());
  }
  return config;
}

GatewayConfig load_config(const std::filesystem::path& path, GatewayConfig base) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }
  return config_from_json(doc, std::move(base));
}

GatewayConfig apply_env(GatewayConfig config, const std::map<std::string, std::string>& env) {
  auto get = [&](const char* name) -> const std::string* {
    const auto it = env.find(name);
    return it == env.end() || it->second.empty() ? nullptr : &it->second;
  };
  if (auto v = get("QFAAS_LISTEN")) set_listen(config, *v);
  if (auto v = get("QFAAS_DATA_DIR")) config.data_dir = *v;
  if (auto v = get("QFAAS_CATALOG")) config.catalog_path = *v;
  if (auto v = get("QFAAS_UI_DIR")) config.ui_dir = *v;
  if (auto v = get("QFAAS_SIM_WORKERS")) config.sim_workers = parse_number<std::size_t>(*v, "QFAAS_SIM_WORKERS");
  if (auto v = get("QFAAS_HTTP_WORKERS")) config.http_workers = parse_number<std::size_t>(*v, "QFAAS_HTTP_WORKERS");
  if (auto v = get("QFAAS_THRESHOLD_MS")) {
    config.threshold = std::chrono::milliseconds(parse_number<std::int64_t>(*v, "QFAAS_THRESHOLD_MS"));
  }
  if (auto v = get("QFAAS_TOKEN_TTL")) {
    config.token_ttl = std::chrono::seconds(parse_number<std::int64_t>(*v, "QFAAS_TOKEN_TTL"));
  }
  if (auto v = get("QFAAS_MAX_QUBITS")) config.max_qubits = parse_number<unsigned>(*v, "QFAAS_MAX_QUBITS");
  if (auto v = get("QFAAS_ADMIN_PASSWORD")) config.admin_password = *v;
  if (config.sim_workers == 0 || config.http_workers == 0 || config.token_ttl.count() <= 0 ||
      config.threshold.count() < 0 || config.max_qubits == 0) {
    throw config_error("worker counts, token TTL and max qubits must be positive");
  }
  return config;
}

std::map<std::string, std::string> environment_snapshot() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    if (entry.substr(0, 6) != "QFAAS_") continue;
    env.emplace(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return env;
}

}  // namespace qfaas::gateway
