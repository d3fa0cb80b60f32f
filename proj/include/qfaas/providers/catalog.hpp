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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qfaas/circuit/circuit.hpp"
#include "qfaas/role.hpp"

namespace qfaas::providers {

enum class BackendKind { Qpu, Simulator };

std::string_view kind_name(BackendKind kind);
std::optional<BackendKind> kind_from_name(std::string_view name);

/// Provider name of the in-process simulator. Every other provider is a mock
/// remote that holds jobs in a queue before executing them.
inline constexpr std::string_view kLocalProvider = "local";

struct BackendInfo {
  std::string name;
  std::string provider;
  BackendKind kind = BackendKind::Simulator;
  std::uint32_t qubits = 1;
  bool operational = true;
  /// External load configured for the device; jobs from other tenants that
  /// never drain. Zero for every default backend.
  std::uint64_t background_queue = 0;
  /// background_queue plus this service's unfinished jobs on the backend.
  std::uint64_t queue_length = 0;
  double avg_seconds_per_job = 0;
  double readout_flip_p = 0;
  std::set<Role> allowed_roles{Role::Admin, Role::Developer, Role::EndUser};

  bool is_local() const { return provider == kLocalProvider; }
  double estimated_wait_seconds() const { return static_cast<double>(queue_length) * avg_seconds_per_job; }
};

nlohmann::json to_json(const BackendInfo& backend);

struct ProviderCatalog {
  std::vector<BackendInfo> backends;

  /// `{"backends":[{name, provider, kind, qubits, operational,
  /// avg_seconds_per_job, readout_flip_p, allowed_roles, queue_length?}]}`.
  /// Throws Error{"ConfigError"} on malformed documents or duplicate names.
  static ProviderCatalog from_json(const nlohmann::json& doc);
  static ProviderCatalog load(const std::string& path);
  /// local-sv, mock-ibm-q5 and mock-braket-sv.
  static ProviderCatalog defaults();

  const BackendInfo* find(std::string_view name) const;
};

struct BackendFilter {
  std::optional<std::string> provider;
  std::optional<BackendKind> kind;
  std::optional<bool> operational;
};

/// Matching backends ordered by name.
std::vector<BackendInfo> filter_backends(const std::vector<BackendInfo>& backends, const BackendFilter& filter);

/// Returns the named backend iff it exists, is operational, admits `role`
/// and has at least `stats.width` qubits. Throws Error with code
/// UnknownBackend, BackendDown, PermissionDenied or InsufficientQubits.
BackendInfo verify_backend(const std::vector<BackendInfo>& backends, Role role, std::string_view name,
                           const circuit::CircuitStats& stats);

}  // namespace qfaas::providers
