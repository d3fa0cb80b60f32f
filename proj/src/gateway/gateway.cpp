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

#include "qfaas/gateway/gateway.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <unordered_map>

#include "qfaas/dsl/dsl.hpp"
#include "qfaas/encoding.hpp"
#include "qfaas/error.hpp"
#include "qfaas/selector/selector.hpp"

namespace qfaas::gateway {

using nlohmann::json;

namespace {

Error invalid(const std::string& message, json details = json::object()) {
  return Error("ValidationError", message, std::move(details));
}

bool as_bool(const json& v, const char* key) {
  if (!v.is_boolean()) throw invalid(std::string(key) + " must be a boolean", {{"field", key}});
  return v.get<bool>();
}

std::optional<std::string> as_optional_string(const json& v, const char* key) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw invalid(std::string(key) + " must be a string", {{"field", key}});
  return v.get<std::string>();
}

std::uint64_t as_count(const json& v, const char* key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw invalid(std::string(key) + " must be a non-negative integer", {{"field", key}});
  }
  return v.get<std::uint64_t>();
}

std::size_t query_size(const std::map<std::string, std::string>& query, const char* key, std::size_t fallback) {
  const auto it = query.find(key);
  if (it == query.end() || it->second.empty()) return fallback;
  std::size_t value = 0;
  const auto& text = it->second;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    throw invalid(std::string(key) + " must be a positive integer", {{"field", key}});
  }
  return value;
}

std::optional<std::string> query_string(const std::map<std::string, std::string>& query, const char* key) {
  const auto it = query.find(key);
  if (it == query.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

}  // namespace

InvocationRequest invocation_request_from_json(const json& body) {
  InvocationRequest req;
  if (body.is_null()) return req;
  if (!body.is_object()) throw invalid("request body must be a JSON object");
  for (const auto& [key, v] : body.items()) {
    if (key == "input") {
      req.input = v;
    } else if (key == "shots") {
      req.shots = as_count(v, "shots");
      if (req.shots < 1 || req.shots > kMaxShots) {
        throw invalid("shots must be between 1 and " + std::to_string(kMaxShots), {{"field", "shots"}});
      }
    } else if (key == "waitForResult") {
      req.wait_for_result = as_bool(v, "waitForResult");
    } else if (key == "provider") {
      req.provider = as_optional_string(v, "provider");
    } else if (key == "autoSelect") {
      req.auto_select = as_bool(v, "autoSelect");
    } else if (key == "backendType") {
      if (const auto t = as_optional_string(v, "backendType")) {
        req.backend_type = providers::kind_from_name(*t);
        if (!req.backend_type) throw invalid("backendType must be qpu or simulator", {{"field", "backendType"}});
      }
    } else if (key == "backendName") {
      req.backend_name = as_optional_string(v, "backendName");
    } else if (key == "postProcessOnly") {
      req.post_process_only = as_bool(v, "postProcessOnly");
    } else if (key == "jobId") {
      req.job_id = as_optional_string(v, "jobId");
    } else if (key == "seed") {
      if (!v.is_null()) req.seed = as_count(v, "seed");
    } else {
      throw invalid("unknown field " + key, {{"field", key}});
    }
  }
  if (req.post_process_only && !req.job_id) throw invalid("postProcessOnly requires jobId", {{"field", "jobId"}});
  if (!req.auto_select && !req.backend_name) {
    throw invalid("autoSelect=false requires backendName", {{"field", "backendName"}});
  }
  return req;
}

json to_json(const InvocationRequest& r) {
  json j = {{"input", r.input},
            {"shots", r.shots},
            {"waitForResult", r.wait_for_result},
            {"autoSelect", r.auto_select},
            {"postProcessOnly", r.post_process_only}};
  if (r.provider) j["provider"] = *r.provider;
  if (r.backend_type) j["backendType"] = providers::kind_name(*r.backend_type);
  if (r.backend_name) j["backendName"] = *r.backend_name;
  if (r.job_id) j["jobId"] = *r.job_id;
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

int http_status_for(std::string_view code) {
  static const std::unordered_map<std::string_view, int> table = {
      {"InvalidJson", 400},
      {"Unauthorized", 401},         {"InvalidCredentials", 401},
      {"PermissionDenied", 403},
      {"NotFound", 404},             {"UnknownFunction", 404},    {"UnknownJob", 404},
      {"Conflict", 409},             {"JobNotCompleted", 409},
      {"ValidationError", 422},      {"MissingParam", 422},       {"RangeViolation", 422},
      {"TypeViolation", 422},        {"EvalError", 422},          {"UnknownBackend", 422},
      {"InsufficientQubits", 422},   {"InvalidCriteria", 422},    {"InvalidCircuit", 422},
      {"PipelineTypeError", 422},    {"InvalidCounts", 422},
      {"NoEligibleBackend", 503},    {"BackendDown", 503},        {"CapacityExceeded", 503},
      {"FunctionNotReady", 503},
  };
  const auto it = table.find(code);
  return it == table.end() ? 500 : it->second;
}

Gateway::Gateway(GatewayConfig config) : config_(std::move(config)), tokens_(config_.token_ttl) {
  std::filesystem::create_directories(config_.data_dir);
  users_ = std::make_unique<UserStore>(config_.data_dir, config_.password_cost, config_.durable);
  jobs_ = std::make_unique<jobs::JobStore>(config_.data_dir, jobs::JobStoreOptions{config_.durable});
  if (const auto orphans = jobs_->recover_orphans()) {
    spdlog::warn("marked {} unfinished job(s) from a previous run as Failed", orphans);
  }
  registry_ = std::make_unique<registry::Registry>(
      config_.data_dir,
      registry::RegistryOptions{config_.durable, static_cast<unsigned>(config_.pipeline_workers)});
  auto catalog = config_.catalog_path ? providers::ProviderCatalog::load(config_.catalog_path->string())
                                      : providers::ProviderCatalog::defaults();
  providers::ProviderConfig pc;
  pc.worker_threads = config_.sim_workers;
  pc.max_in_flight_per_provider = config_.max_in_flight_per_provider;
  pc.max_qubits = config_.max_qubits;
  providers_ = std::make_unique<providers::ProviderService>(std::move(catalog), pc);
  seed_users();
}

Gateway::~Gateway() {
  providers_.reset();
  registry_.reset();
}

void Gateway::seed_users() {
  if (!users_->contains("admin")) {
    const bool generated = !config_.admin_password;
    const std::string password = generated ? random_token(12) : *config_.admin_password;
    users_->add("admin", password, Role::Admin);
    if (generated) {
      spdlog::warn("created user 'admin' with generated password: {}", password);
    } else {
      spdlog::info("created user 'admin' with the configured password");
    }
  }
  for (const auto& u : config_.users) {
    if (users_->contains(u.username)) continue;
    users_->add(u.username, u.password, u.role);
    spdlog::info("created user '{}' ({})", u.username, role_name(u.role));
  }
}

json Gateway::login(std::string_view username, std::string_view password) {
  const auto principal = users_->authenticate(username, password);
  if (!principal) throw Error("InvalidCredentials", "invalid username or password");
  const auto token = tokens_.issue(*principal);
  return {{"access_token", token.access_token}, {"token_type", "bearer"}, {"expires_in", token.expires_in.count()}};
}

Principal Gateway::authenticate(std::string_view header) {
  constexpr std::string_view scheme = "bearer ";
  if (header.size() <= scheme.size()) throw Error("Unauthorized", "missing bearer token");
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(header[i])) != scheme[i]) {
      throw Error("Unauthorized", "missing bearer token");
    }
  }
  const auto principal = tokens_.resolve(header.substr(scheme.size()));
  if (!principal) throw Error("Unauthorized", "invalid or expired token");
  return *principal;
}

json Gateway::create_function(const json& body, const Principal& caller) {
  const auto record = registry_->create(registry::create_request_from_json(body), caller);
  json out = registry::to_json(record);
  out["deployment"] = registry::to_json(record.latest_deployment());
  return out;
}

json Gateway::list_functions(const Principal& caller) const {
  json items = json::array();
  for (const auto& r : registry_->list(caller)) items.push_back(registry::to_json(r));
  return {{"items", items}};
}

json Gateway::get_function(std::string_view identifier, const Principal& caller) const {
  const auto record = registry_->get(identifier, caller);
  json out = registry::to_json(record);
  out["deployment"] = registry::to_json(record.latest_deployment());
  return out;
}

json Gateway::update_function(std::string_view identifier, const json& body, const Principal& caller) {
  const auto record = registry_->update(identifier, registry::update_request_from_json(body), caller);
  json out = registry::to_json(record);
  out["deployment"] = registry::to_json(record.latest_deployment());
  return out;
}

void Gateway::delete_function(std::string_view identifier, const Principal& caller) {
  registry_->remove(identifier, caller);
}

json Gateway::function_deployments(std::string_view identifier, const Principal& caller) const {
  json items = json::array();
  for (const auto& d : registry_->deployments(identifier, caller)) items.push_back(registry::to_json(d));
  return {{"items", items}};
}

json Gateway::response_for(const jobs::Job& job) const {
  json details = {
      {"jobId", job.job_id},
      {"status", jobs::status_name(job.status)},
      {"function", job.function_identifier},
      {"backend", job.backend_name},
      {"provider", job.provider},
      {"shots", job.shots},
      {"seed", job.seed},
      {"waiting_ms", job.waiting_ms},
      {"running_ms", job.running_ms},
      {"circuit", job.circuit_text},
      {"selection_reason", job.selection_reason},
  };
  if (job.counts) details["counts"] = *job.counts;
  if (job.error) details["error"] = *job.error;
  const bool done = job.status == jobs::JobStatus::Completed && job.result_data;
  return {{"data", done ? *job.result_data : json(nullptr)}, {"details", details}};
}

json Gateway::post_process_only(std::string_view identifier, const InvocationRequest& request,
                                const registry::Invocable& fn, const Principal& caller) {
  const auto job = jobs_->get(*request.job_id, caller);
  if (job.function_identifier != identifier) {
    throw invalid("job " + job.job_id + " belongs to function " + job.function_identifier, {{"field", "jobId"}});
  }
  if (job.status != jobs::JobStatus::Completed || !job.counts) {
    throw Error("JobNotCompleted", "job " + job.job_id + " is " + std::string(jobs::status_name(job.status)),
                {{"jobId", job.job_id}, {"status", jobs::status_name(job.status)}});
  }
  const auto result = dsl::postprocess(*job.counts, fn.def->post_pipeline, job.bindings);
  json out = response_for(job);
  out["data"] = result.data;
  out["details"]["postProcessOnly"] = true;
  metrics_.invocation();
  return out;
}

json Gateway::invoke(std::string_view identifier, const json& body, const Principal& caller) {
  const auto request = invocation_request_from_json(body);
  const auto fn = registry_->resolve(identifier, caller);
  if (request.post_process_only) return post_process_only(identifier, request, fn, caller);

  const auto bindings = dsl::preprocess(*fn.def, request.input);
  auto circuit = dsl::instantiate(*fn.def, bindings);
  const auto stats = circuit::stats(circuit);
  const auto decision = selector::select(
      providers_->snapshot(), caller.role, stats,
      {request.provider, request.backend_type, request.backend_name, request.auto_select});
  const std::uint64_t seed = request.seed.value_or(sim::entropy_seed());

  jobs::NewJob spec;
  spec.function_identifier = fn.identifier;
  spec.owner = caller.username;
  spec.backend_name = decision.backend.name;
  spec.provider = decision.backend.provider;
  spec.shots = request.shots;
  spec.seed = seed;
  spec.circuit_text = circuit::to_text(circuit);
  spec.bindings = bindings;
  spec.selection_reason = decision.reason;
  const auto job_id = jobs_->create(spec).job_id;
  jobs_->transition(job_id, jobs::JobStatus::Queued);

  auto on_transition = [this, job_id, def = fn.def, bindings](const providers::ProviderJobHandle& handle) {
    try {
      switch (handle.state) {
        case providers::HandleState::Running: jobs_->transition(job_id, jobs::JobStatus::Running); break;
        case providers::HandleState::Done: {
          jobs::TransitionPayload payload;
          try {
            auto post = dsl::postprocess(handle.result->counts, def->post_pipeline, bindings);
            payload.counts = handle.result->counts;
            payload.result_data = std::move(post.data);
            // Count before the transition wakes waiters, so a caller that saw
            // the result also sees the counter.
            metrics_.job_completed();
            jobs_->transition(job_id, jobs::JobStatus::Completed, std::move(payload));
          } catch (const Error& e) {
            payload = {};
            payload.error = std::string("post-processing failed: ") + e.what();
            metrics_.job_failed();
            jobs_->transition(job_id, jobs::JobStatus::Failed, std::move(payload));
          }
          break;
        }
        case providers::HandleState::Failed: {
          jobs::TransitionPayload payload;
          payload.error = handle.error.value_or("execution failed");
          metrics_.job_failed();
          jobs_->transition(job_id, jobs::JobStatus::Failed, std::move(payload));
          break;
        }
        case providers::HandleState::Queued: break;
      }
    } catch (const std::exception& e) {
      spdlog::error("job {}: could not record provider transition: {}", job_id, e.what());
    }
  };

  try {
    providers_->submit(decision.backend, std::move(circuit), request.shots, seed, std::move(on_transition));
  } catch (const Error& e) {
    jobs::TransitionPayload payload;
    payload.error = std::string("submission rejected: ") + e.what();
    jobs_->transition(job_id, jobs::JobStatus::Failed, std::move(payload));
    metrics_.job_failed();
    throw;
  }

  const auto snapshot =
      request.wait_for_result ? jobs_->await_result(job_id, config_.threshold) : jobs_->get(job_id);
  metrics_.invocation();
  return response_for(snapshot);
}

json Gateway::get_job(std::string_view job_id, const Principal& caller) const {
  return jobs::to_json(jobs_->get(job_id, caller));
}

json Gateway::list_jobs(const std::map<std::string, std::string>& query, const Principal& caller) const {
  jobs::JobFilter filter;
  filter.owner = query_string(query, "owner");
  filter.function_identifier = query_string(query, "function");
  if (const auto status = query_string(query, "status")) {
    filter.status = jobs::status_from_name(*status);
    if (!filter.status) throw invalid("unknown status " + *status, {{"field", "status"}});
  }
  const auto page = jobs_->list(filter, caller, query_size(query, "page", 1), query_size(query, "page_size", 50));
  json items = json::array();
  for (const auto& job : page.items) items.push_back(jobs::to_json(job));
  return {{"items", items}, {"total", page.total}, {"page", page.page}, {"page_size", page.page_size}};
}

json Gateway::list_backends(const std::map<std::string, std::string>& query) const {
  providers::BackendFilter filter;
  filter.provider = query_string(query, "provider");
  if (const auto type = query_string(query, "type")) {
    filter.kind = providers::kind_from_name(*type);
    if (!filter.kind) throw invalid("type must be qpu or simulator", {{"field", "type"}});
  }
  if (const auto op = query_string(query, "operational")) {
    if (*op != "true" && *op != "false") throw invalid("operational must be true or false");
    filter.operational = *op == "true";
  }
  json items = json::array();
  for (const auto& b : providers_->list_backends(filter)) items.push_back(providers::to_json(b));
  return {{"items", items}};
}

std::string Gateway::metrics_text() const { return metrics_.render(providers_->snapshot()); }

}  // namespace qfaas::gateway
