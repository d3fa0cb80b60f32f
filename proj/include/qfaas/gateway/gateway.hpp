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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qfaas/gateway/auth.hpp"
#include "qfaas/gateway/config.hpp"
#include "qfaas/gateway/metrics.hpp"
#include "qfaas/jobs/job_store.hpp"
#include "qfaas/providers/provider_service.hpp"
#include "qfaas/registry/registry.hpp"

namespace qfaas::gateway {

inline constexpr std::uint64_t kDefaultShots = 1024;
inline constexpr std::uint64_t kMaxShots = 1'000'000;

struct InvocationRequest {
  nlohmann::json input;  // null when absent
  std::uint64_t shots = kDefaultShots;
  bool wait_for_result = true;
  std::optional<std::string> provider;
  bool auto_select = true;
  std::optional<providers::BackendKind> backend_type;
  std::optional<std::string> backend_name;
  bool post_process_only = false;
  std::optional<std::string> job_id;
  std::optional<std::uint64_t> seed;
};

/// Strict parse: unknown fields, wrong types, shots outside [1, kMaxShots],
/// postProcessOnly without jobId and autoSelect=false without backendName
/// all throw Error{"ValidationError"}.
InvocationRequest invocation_request_from_json(const nlohmann::json& body);
nlohmann::json to_json(const InvocationRequest& request);

/// Everything behind the HTTP routes, callable without a socket.
class Gateway {
 public:
  explicit Gateway(GatewayConfig config);
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  const GatewayConfig& config() const { return config_; }

  /// {"access_token","token_type":"bearer","expires_in"}; Error{"InvalidCredentials"}.
  nlohmann::json login(std::string_view username, std::string_view password);
  /// Resolves an Authorization header value; Error{"Unauthorized"}.
  Principal authenticate(std::string_view authorization_header);

  nlohmann::json create_function(const nlohmann::json& body, const Principal& caller);
  nlohmann::json list_functions(const Principal& caller) const;
  nlohmann::json get_function(std::string_view identifier, const Principal& caller) const;
  nlohmann::json update_function(std::string_view identifier, const nlohmann::json& body, const Principal& caller);
  void delete_function(std::string_view identifier, const Principal& caller);
  nlohmann::json function_deployments(std::string_view identifier, const Principal& caller) const;

  /// Returns {data, details}.
  nlohmann::json invoke(std::string_view identifier, const nlohmann::json& body, const Principal& caller);

  nlohmann::json get_job(std::string_view job_id, const Principal& caller) const;
  /// Query keys: owner, status, function, page, page_size.
  nlohmann::json list_jobs(const std::map<std::string, std::string>& query, const Principal& caller) const;
  /// Query keys: provider, type, operational.
  nlohmann::json list_backends(const std::map<std::string, std::string>& query) const;

  std::string metrics_text() const;
  Metrics& metrics() { return metrics_; }

  registry::Registry& registry() { return *registry_; }
  jobs::JobStore& jobs() { return *jobs_; }
  providers::ProviderService& providers() { return *providers_; }
  UserStore& users() { return *users_; }

 private:
  nlohmann::json post_process_only(std::string_view identifier, const InvocationRequest& request,
                                   const registry::Invocable& fn, const Principal& caller);
  nlohmann::json response_for(const jobs::Job& job) const;
  void seed_users();

  GatewayConfig config_;
  Metrics metrics_;
  std::unique_ptr<UserStore> users_;
  TokenStore tokens_;
  std::unique_ptr<jobs::JobStore> jobs_;
  std::unique_ptr<registry::Registry> registry_;
  std::unique_ptr<providers::ProviderService> providers_;
};

/// HTTP status for an error code.
int http_status_for(std::string_view error_code);

}  // namespace qfaas::gateway
