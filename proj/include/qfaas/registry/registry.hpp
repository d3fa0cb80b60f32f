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
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/asio/thread_pool.hpp>
#include <json.hpp>

#include "qfaas/dsl/ast.hpp"
#include "qfaas/role.hpp"
#include "qfaas/storage/document_dir.hpp"

namespace qfaas::registry {

using EpochMillis = std::int64_t;

inline constexpr std::string_view kFunctionSchema = "qfaas.function/v1";

enum class FunctionStatus { Registered, Validating, Building, Deploying, Ready, FailedDeploy };
std::string_view status_name(FunctionStatus status);
std::optional<FunctionStatus> function_status_from_name(std::string_view name);

enum class StageStatus { Pending, Running, Passed, Failed };
std::string_view stage_status_name(StageStatus status);

struct Stage {
  std::string name;  // "Validate", "Build" or "Deploy"
  StageStatus status = StageStatus::Pending;
  std::string log;
  std::optional<EpochMillis> at;

  bool operator==(const Stage&) const = default;
};

struct DeploymentRecord {
  std::string identifier;
  std::int64_t version = 0;
  std::vector<Stage> stages;

  static DeploymentRecord fresh(std::string identifier, std::int64_t version);
  bool all_passed() const;
  bool any_failed() const;
  bool finished() const { return all_passed() || any_failed(); }
};

/// Sources as stored at one version, kept append-only.
struct VersionEntry {
  std::int64_t version = 0;
  std::string source_b64;
  std::string requirements_b64;
  std::string handler_qs_b64;
  EpochMillis at = 0;
};

struct FunctionRecord {
  std::string identifier;
  std::string name;
  std::string template_tag;
  std::string author;
  bool is_public = false;
  std::string source_b64;
  std::string requirements_b64;
  std::string handler_qs_b64;
  std::int64_t version = 1;
  std::shared_ptr<const dsl::FunctionDef> compiled;
  FunctionStatus status = FunctionStatus::Registered;
  EpochMillis created_at = 0;
  EpochMillis updated_at = 0;
  std::vector<VersionEntry> history;
  std::vector<DeploymentRecord> deployments;

  const DeploymentRecord& latest_deployment() const { return deployments.back(); }
};

nlohmann::json to_json(const Stage& stage);
nlohmann::json to_json(const DeploymentRecord& deployment);
/// Public view: no history, no compiled definition.
nlohmann::json to_json(const FunctionRecord& record);

/// Function code objects, each Base64.
struct FunctionCode {
  std::string requirements;
  std::string handler_py;  // the DSL source
  std::string handler_qs;
};

struct CreateRequest {
  std::string name;
  std::string template_tag;
  FunctionCode code;
  bool is_public = false;
  std::optional<std::string> author;
};

struct UpdateRequest {
  std::optional<FunctionCode> code;
  std::optional<bool> is_public;
};

/// Parses the JSON creation body; unknown or mistyped fields throw ValidationError.
CreateRequest create_request_from_json(const nlohmann::json& body);
UpdateRequest update_request_from_json(const nlohmann::json& body);

bool valid_function_name(std::string_view name);
std::string make_identifier(std::string_view template_tag, std::string_view name);

struct RegistryOptions {
  bool durable = true;
  /// Threads running deployment pipelines. Zero means pipelines only run
  /// when run_pipeline() is called explicitly.
  unsigned pipeline_threads = 1;
};

/// A function resolved for invocation.
struct Invocable {
  std::string identifier;
  std::int64_t version = 0;
  std::shared_ptr<const dsl::FunctionDef> def;
};

class Registry {
 public:
  explicit Registry(const std::filesystem::path& data_dir, RegistryOptions options = {});
  ~Registry();
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  /// Errors: PermissionDenied, ValidationError, Conflict.
  FunctionRecord create(const CreateRequest& request, const Principal& caller);
  FunctionRecord update(std::string_view identifier, const UpdateRequest& request, const Principal& caller);
  void remove(std::string_view identifier, const Principal& caller);

  /// Visible when public, owned by the caller, or the caller is admin.
  FunctionRecord get(std::string_view identifier, const Principal& caller) const;
  FunctionRecord get(std::string_view identifier) const;
  /// Admin: all. Otherwise the caller's own plus other users' public Ready functions.
  std::vector<FunctionRecord> list(const Principal& caller) const;
  std::vector<DeploymentRecord> deployments(std::string_view identifier, const Principal& caller) const;

  /// Errors: UnknownFunction, PermissionDenied, FunctionNotReady.
  Invocable resolve(std::string_view identifier, const Principal& caller) const;

  /// Runs Validate, Build and Deploy for the current version. Abandons the
  /// run if the function is updated or deleted meanwhile.
  DeploymentRecord run_pipeline(std::string_view identifier);

  /// Waits until the current version's pipeline has finished.
  FunctionRecord await_deployment(std::string_view identifier,
                                  std::chrono::milliseconds timeout = std::chrono::seconds(30)) const;

 private:
  FunctionRecord& find_locked(std::string_view identifier);
  const FunctionRecord& find_locked(std::string_view identifier) const;
  void persist_locked(const FunctionRecord& record);
  void schedule(std::string identifier);
  /// Applies a stage result if `version` is still current; false otherwise.
  bool record_stage(std::string_view identifier, std::int64_t version, std::size_t stage, StageStatus status,
                    std::string log, std::optional<FunctionStatus> next_status,
                    std::shared_ptr<const dsl::FunctionDef> compiled = nullptr);

  storage::DocumentDir dir_;
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::map<std::string, FunctionRecord, std::less<>> records_;
  std::unique_ptr<boost::asio::thread_pool> pool_;
};

}  // namespace qfaas::registry
