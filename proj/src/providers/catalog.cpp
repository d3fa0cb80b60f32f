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

#include "qfaas/providers/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "qfaas/error.hpp"

namespace qfaas::providers {

using nlohmann::json;

std::string_view kind_name(BackendKind kind) { return kind == BackendKind::Qpu ? "qpu" : "simulator"; }

std::optional<BackendKind> kind_from_name(std::string_view name) {
  if (name == "qpu") return BackendKind::Qpu;
  if (name == "simulator") return BackendKind::Simulator;
  return std::nullopt;
}

json to_json(const BackendInfo& b) {
  json roles = json::array();
  for (Role r : b.allowed_roles) roles.push_back(role_name(r));
  return {
      {"name", b.name},
      {"provider", b.provider},
      {"kind", kind_name(b.kind)},
      {"qubits", b.qubits},
      {"operational", b.operational},
      {"queue_length", b.queue_length},
      {"avg_seconds_per_job", b.avg_seconds_per_job},
      {"estimated_wait_seconds", b.estimated_wait_seconds()},
      {"readout_flip_p", b.readout_flip_p},
      {"allowed_roles", roles},
  };
}

namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error("ConfigError", "backend catalog: " + message); }

BackendInfo backend_from_json(const json& j) {
  if (!j.is_object()) config_error("each backend must be an object");
  BackendInfo b;
  try {
    b.name = j.at("name").get<std::string>();
    b.provider = j.at("provider").get<std::string>();
    const auto kind = kind_from_name(j.at("kind").get<std::string>());
    if (!kind) config_error("backend '" + b.name + "': kind must be 'qpu' or 'simulator'");
    b.kind = *kind;
    const auto qubits = j.at("qubits").get<std::int64_t>();
    if (qubits < 1 || qubits > 1024) config_error("backend '" + b.name + "': qubits must be in [1, 1024]");
    b.qubits = static_cast<std::uint32_t>(qubits);
    b.operational = j.value("operational", true);
    b.avg_seconds_per_job = j.value("avg_seconds_per_job", 0.0);
    b.readout_flip_p = j.value("readout_flip_p", 0.0);
    const auto background = j.value("queue_length", std::int64_t{0});
    if (background < 0) config_error("backend '" + b.name + "': queue_length must be >= 0");
    b.background_queue = static_cast<std::uint64_t>(background);
    b.queue_length = b.background_queue;
    if (j.contains("allowed_roles")) {
      b.allowed_roles.clear();
      for (const auto& r : j.at("allowed_roles")) {
        const auto role = role_from_name(r.get<std::string>());
        if (!role) config_error("backend '" + b.name + "': unknown role " + r.dump());
        b.allowed_roles.insert(*role);
      }
    }
  } catch (const json::exception& e) {
    config_error(e.what());
  }
  if (b.name.empty()) config_error("backend name must be nonempty");
  if (!(b.avg_seconds_per_job >= 0) || !std::isfinite(b.avg_seconds_per_job)) {
    config_error("backend '" + b.name + "': avg_seconds_per_job must be a finite value >= 0");
  }
  if (!(b.readout_flip_p >= 0 && b.readout_flip_p <= 1)) {
    config_error("backend '" + b.name + "': readout_flip_p must lie in [0, 1]");
  }
  return b;
}

}  // namespace

ProviderCatalog ProviderCatalog::from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("backends") || !doc["backends"].is_array()) {
    config_error("expected {\"backends\": [...]}");
  }
  ProviderCatalog catalog;
  for (const auto& entry : doc["backends"]) {
    BackendInfo b = backend_from_json(entry);
    if (catalog.find(b.name)) config_error("duplicate backend name '" + b.name + "'");
    catalog.backends.push_back(std::move(b));
  }
  std::sort(catalog.backends.begin(), catalog.backends.end(),
            [](const BackendInfo& a, const BackendInfo& b) { return a.name < b.name; });
  return catalog;
}

ProviderCatalog ProviderCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ConfigError", "cannot open backend catalog '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error("ConfigError", "backend catalog '" + path + "': " + e.what());
  }
  return from_json(doc);
}

ProviderCatalog ProviderCatalog::defaults() {
  return from_json(json::parse(R"({"backends": [
    {"name": "local-sv", "provider": "local", "kind": "simulator", "qubits": 24,
     "operational": true, "avg_seconds_per_job": 0, "readout_flip_p": 0},
    {"name": "mock-ibm-q5", "provider": "mock-ibm", "kind": "qpu", "qubits": 5,
     "operational": true, "avg_seconds_per_job": 2, "readout_flip_p": 0.02},
    {"name": "mock-braket-sv", "provider": "mock-braket", "kind": "simulator", "qubits": 20,
     "operational": true, "avg_seconds_per_job": 1, "readout_flip_p": 0}
  ]})"));
}

const BackendInfo* ProviderCatalog::find(std::string_view name) const {
  for (const auto& b : backends) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

std::vector<BackendInfo> filter_backends(const std::vector<BackendInfo>& backends, const BackendFilter& filter) {
  std::vector<BackendInfo> out;
  for (const auto& b : backends) {
    if (filter.provider && b.provider != *filter.provider) continue;
    if (filter.kind && b.kind != *filter.kind) continue;
    if (filter.operational && b.operational != *filter.operational) continue;
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(), [](const BackendInfo& a, const BackendInfo& b) { return a.name < b.name; });
  return out;
}

BackendInfo verify_backend(const std::vector<BackendInfo>& backends, Role role, std::string_view name,
                           const circuit::CircuitStats& stats) {
  const auto it = std::find_if(backends.begin(), backends.end(), [&](const BackendInfo& b) { return b.name == name; });
  const std::string n(name);
  if (it == backends.end()) throw Error("UnknownBackend", "no backend named '" + n + "'", {{"backend", n}});
  if (!it->operational) throw Error("BackendDown", "backend '" + n + "' is not operational", {{"backend", n}});
  if (!it->allowed_roles.contains(role)) {
    throw Error("PermissionDenied", "role '" + std::string(role_name(role)) + "' may not use backend '" + n + "'",
                {{"backend", n}});
  }
  if (it->qubits < stats.width) {
    throw Error("InsufficientQubits",
                "backend '" + n + "' has " + std::to_string(it->qubits) + " qubits, circuit needs " +
                    std::to_string(stats.width),
                {{"backend", n}, {"qubits", it->qubits}, {"width", stats.width}});
  }
  return *it;
}

}  // namespace qfaas::providers
