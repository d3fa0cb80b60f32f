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

#include "qfaas/registry/registry.hpp"

#include <boost/asio/post.hpp>

#include <algorithm>
#include <regex>

#include "qfaas/circuit/circuit.hpp"
#include "qfaas/dsl/dsl.hpp"
#include "qfaas/encoding.hpp"
#include "qfaas/error.hpp"

namespace qfaas::registry {

using nlohmann::json;

namespace {

constexpr std::size_t kKeptDeployments = 20;
constexpr std::array<std::string_view, 3> kStageNames = {"Validate", "Build", "Deploy"};

EpochMillis now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Error validation_error(const std::string& message, json details = json::object()) {
  return Error("ValidationError", message, std::move(details));
}

Error unknown_function(std::string_view identifier) {
  return Error("UnknownFunction", "no function '" + std::string(identifier) + "'", {{"identifier", identifier}});
}

bool can_modify(const FunctionRecord& record, const Principal& caller) {
  return caller.is_admin() || record.author == caller.username;
}

bool can_see(const FunctionRecord& record, const Principal& caller) {
  return record.is_public || can_modify(record, caller);
}

std::string checked_b64(const json& obj, const char* key, bool required) {
  if (!obj.contains(key)) {
    if (required) throw validation_error(std::string("fnCode.") + key + " is required", {{"field", key}});
    return "";
  }
  if (!obj[key].is_string()) throw validation_error(std::string("fnCode.") + key + " must be a string");
  std::string text = obj[key].get<std::string>();
  if (!base64_decode(text)) {
    throw validation_error(std::string("fnCode.") + key + " is not valid Base64", {{"field", key}});
  }
  return text;
}

FunctionCode code_from_json(const json& fn_code) {
  if (!fn_code.is_object()) throw validation_error("fnCode must be an object");
  for (const auto& [key, value] : fn_code.items()) {
    if (key != "requirements" && key != "handlerPy" && key != "handlerQs") {
      throw validation_error("unknown field fnCode." + key, {{"field", key}});
    }
  }
  return {checked_b64(fn_code, "requirements", false), checked_b64(fn_code, "handlerPy", true),
          checked_b64(fn_code, "handlerQs", false)};
}

json param_json(const dsl::ParamDecl& p) {
  json j = {{"name", p.name}, {"type", "int"}};
  j["min"] = p.min ? json(*p.min) : json(nullptr);
  j["max"] = p.max ? json(*p.max) : json(nullptr);
  j["default"] = p.default_value ? json(*p.default_value) : json(nullptr);
  return j;
}

Stage stage_from_json(const json& j) {
  Stage s;
  s.name = j.at("name").get<std::string>();
  const auto status = j.at("status").get<std::string>();
  for (StageStatus st : {StageStatus::Pending, StageStatus::Running, StageStatus::Passed, StageStatus::Failed}) {
    if (stage_status_name(st) == status) s.status = st;
  }
  s.log = j.value("log", std::string{});
  if (j.contains("at") && !j["at"].is_null()) s.at = j["at"].get<EpochMillis>();
  return s;
}

DeploymentRecord deployment_from_json(const json& j) {
  DeploymentRecord d;
  d.identifier = j.at("identifier").get<std::string>();
  d.version = j.at("version").get<std::int64_t>();
  for (const auto& s : j.at("stages")) d.stages.push_back(stage_from_json(s));
  return d;
}

json persisted_json(const FunctionRecord& record) {
  json j = to_json(record);
  j["schema"] = kFunctionSchema;
  j["history"] = json::array();
  for (const auto& h : record.history) {
    j["history"].push_back({{"version", h.version},
                            {"handlerPy", h.source_b64},
                            {"requirements", h.requirements_b64},
                            {"handlerQs", h.handler_qs_b64},
                            {"at", h.at}});
  }
  j["deployments"] = json::array();
  for (const auto& d : record.deployments) j["deployments"].push_back(to_json(d));
  j.erase("params");
  return j;
}

FunctionRecord record_from_json(const json& j) {
  FunctionRecord r;
  try {
    r.identifier = j.at("identifier").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.template_tag = j.at("template").get<std::string>();
    r.author = j.at("author").get<std::string>();
    r.is_public = j.at("public").get<bool>();
    const auto& code = j.at("fnCode");
    r.source_b64 = code.at("handlerPy").get<std::string>();
    r.requirements_b64 = code.value("requirements", std::string{});
    r.handler_qs_b64 = code.value("handlerQs", std::string{});
    r.version = j.at("version").get<std::int64_t>();
    const auto status = function_status_from_name(j.at("status").get<std::string>());
    if (!status) throw Error("StorageFailure", "unknown function status in record " + r.identifier);
    r.status = *status;
    r.created_at = j.at("created_at").get<EpochMillis>();
    r.updated_at = j.at("updated_at").get<EpochMillis>();
    for (const auto& h : j.at("history")) {
      r.history.push_back({h.at("version").get<std::int64_t>(), h.at("handlerPy").get<std::string>(),
                           h.value("requirements", std::string{}), h.value("handlerQs", std::string{}),
                           h.at("at").get<EpochMillis>()});
    }
    for (const auto& d : j.at("deployments")) r.deployments.push_back(deployment_from_json(d));
  } catch (const json::exception& e) {
    throw Error("StorageFailure", std::string("malformed function record: ") + e.what());
  }
  if (r.deployments.empty()) r.deployments.push_back(DeploymentRecord::fresh(r.identifier, r.version));
  return r;
}

std::string diagnostic(const Error& e) {
  if (const auto* p = dynamic_cast<const dsl::ParseError*>(&e)) return p->kind() + ": " + e.what();
  if (const auto* s = dynamic_cast<const dsl::StaticError*>(&e)) return s->rule() + ": " + e.what();
  if (const auto* v = dynamic_cast<const dsl::EvalError*>(&e)) return v->rule() + ": " + e.what();
  return e.code() + ": " + e.what();
}

}  // namespace

std::string_view status_name(FunctionStatus status) {
  switch (status) {
    case FunctionStatus::Registered: return "Registered";
    case FunctionStatus::Validating: return "Validating";
    case FunctionStatus::Building: return "Building";
    case FunctionStatus::Deploying: return "Deploying";
    case FunctionStatus::Ready: return "Ready";
    case FunctionStatus::FailedDeploy: return "FailedDeploy";
  }
  return "Unknown";
}

std::optional<FunctionStatus> function_status_from_name(std::string_view name) {
  for (auto s : {FunctionStatus::Registered, FunctionStatus::Validating, FunctionStatus::Building,
                 FunctionStatus::Deploying, FunctionStatus::Ready, FunctionStatus::FailedDeploy}) {
    if (status_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view stage_status_name(StageStatus status) {
  switch (status) {
    case StageStatus::Pending: return "pending";
    case StageStatus::Running: return "running";
    case StageStatus::Passed: return "passed";
    case StageStatus::Failed: return "failed";
  }
  return "unknown";
}

DeploymentRecord DeploymentRecord::fresh(std::string identifier, std::int64_t version) {
  DeploymentRecord d{std::move(identifier), version, {}};
  for (auto name : kStageNames) d.stages.push_back({std::string(name), StageStatus::Pending, "", std::nullopt});
  return d;
}

bool DeploymentRecord::all_passed() const {
  return !stages.empty() &&
         std::all_of(stages.begin(), stages.end(), [](const Stage& s) { return s.status == StageStatus::Passed; });
}

bool DeploymentRecord::any_failed() const {
  return std::any_of(stages.begin(), stages.end(), [](const Stage& s) { return s.status == StageStatus::Failed; });
}

json to_json(const Stage& stage) {
  return {{"name", stage.name},
          {"status", stage_status_name(stage.status)},
          {"log", stage.log},
          {"at", stage.at ? json(*stage.at) : json(nullptr)}};
}

json to_json(const DeploymentRecord& deployment) {
  json stages = json::array();
  for (const auto& s : deployment.stages) stages.push_back(to_json(s));
  return {{"identifier", deployment.identifier}, {"version", deployment.version}, {"stages", stages}};
}

json to_json(const FunctionRecord& record) {
  json j = {
      {"identifier", record.identifier},
      {"name", record.name},
      {"template", record.template_tag},
      {"author", record.author},
      {"public", record.is_public},
      {"fnCode",
       {{"requirements", record.requirements_b64},
        {"handlerPy", record.source_b64},
        {"handlerQs", record.handler_qs_b64}}},
      {"version", record.version},
      {"status", status_name(record.status)},
      {"created_at", record.created_at},
      {"updated_at", record.updated_at},
  };
  if (record.compiled) {
    j["params"] = json::array();
    for (const auto& p : record.compiled->params) j["params"].push_back(param_json(p));
  }
  return j;
}

CreateRequest create_request_from_json(const json& body) {
  if (!body.is_object()) throw validation_error("request body must be a JSON object");
  for (const auto& [key, value] : body.items()) {
    if (key != "name" && key != "template" && key != "fnCode" && key != "public" && key != "author") {
      throw validation_error("unknown field " + key, {{"field", key}});
    }
  }
  CreateRequest req;
  if (!body.contains("name") || !body["name"].is_string()) throw validation_error("name must be a string");
  if (!body.contains("template") || !body["template"].is_string()) {
    throw validation_error("template must be a string");
  }
  if (!body.contains("fnCode")) throw validation_error("fnCode is required");
  req.name = body["name"].get<std::string>();
  req.template_tag = body["template"].get<std::string>();
  req.code = code_from_json(body["fnCode"]);
  if (body.contains("public")) {
    if (!body["public"].is_boolean()) throw validation_error("public must be a boolean");
    req.is_public = body["public"].get<bool>();
  }
  if (body.contains("author") && !body["author"].is_null()) {
    if (!body["author"].is_string()) throw validation_error("author must be a string");
    req.author = body["author"].get<std::string>();
  }
  return req;
}

UpdateRequest update_request_from_json(const json& body) {
  if (!body.is_object()) throw validation_error("request body must be a JSON object");
  UpdateRequest req;
  for (const auto& [key, value] : body.items()) {
    if (key == "fnCode") {
      req.code = code_from_json(value);
    } else if (key == "public") {
      if (!value.is_boolean()) throw validation_error("public must be a boolean");
      req.is_public = value.get<bool>();
    } else {
      throw validation_error("unknown field " + key, {{"field", key}});
    }
  }
  return req;
}

bool valid_function_name(std::string_view name) {
  static const std::regex pattern("[a-z][a-z0-9-]{0,62}");
  return std::regex_match(name.begin(), name.end(), pattern);
}

std::string make_identifier(std::string_view template_tag, std::string_view name) {
  return std::string(template_tag) + "-" + std::string(name);
}

Registry::Registry(const std::filesystem::path& data_dir, RegistryOptions options)
    : dir_(data_dir / "functions", options.durable) {
  std::vector<std::string> resume;
  for (const auto& key : dir_.keys()) {
    const auto doc = dir_.get(key);
    if (!doc) continue;
    if (doc->value("schema", std::string{}) != kFunctionSchema) {
      throw Error("StorageFailure", "function record '" + key + "' has unsupported schema");
    }
    FunctionRecord record = record_from_json(*doc);
    if (record.status == FunctionStatus::Ready) {
      const auto source = base64_decode(record.source_b64);
      try {
        record.compiled = std::make_shared<const dsl::FunctionDef>(dsl::parse(source.value_or("")));
      } catch (const Error&) {
        record.status = FunctionStatus::FailedDeploy;
      }
    } else if (record.status != FunctionStatus::FailedDeploy) {
      resume.push_back(record.identifier);
    }
    records_.emplace(record.identifier, std::move(record));
  }
  if (options.pipeline_threads > 0) pool_ = std::make_unique<boost::asio::thread_pool>(options.pipeline_threads);
  for (auto& id : resume) schedule(std::move(id));
}

Registry::~Registry() {
  if (pool_) pool_->join();
}

FunctionRecord& Registry::find_locked(std::string_view identifier) {
  const auto it = records_.find(identifier);
  if (it == records_.end()) throw unknown_function(identifier);
  return it->second;
}

const FunctionRecord& Registry::find_locked(std::string_view identifier) const {
  const auto it = records_.find(identifier);
  if (it == records_.end()) throw unknown_function(identifier);
  return it->second;
}

void Registry::persist_locked(const FunctionRecord& record) { dir_.put(record.identifier, persisted_json(record)); }

void Registry::schedule(std::string identifier) {
  if (!pool_) return;
  boost::asio::post(*pool_, [this, id = std::move(identifier)] {
    try {
      run_pipeline(id);
    } catch (const Error&) {
      // Deleted before the pipeline started.
    }
  });
}

FunctionRecord Registry::create(const CreateRequest& request, const Principal& caller) {
  if (caller.role == Role::EndUser) {
    throw Error("PermissionDenied", "only developers and admins may create functions");
  }
  if (!valid_function_name(request.name)) {
    throw validation_error("name must match [a-z][a-z0-9-]{0,62}", {{"field", "name"}});
  }
  if (!dsl::template_from_name(request.template_tag)) {
    throw validation_error("template must be one of qiskit, cirq, qsharp, braket", {{"field", "template"}});
  }
  for (const auto* field : {&request.code.requirements, &request.code.handler_py, &request.code.handler_qs}) {
    if (!base64_decode(*field)) throw validation_error("function code is not valid Base64");
  }
  if (request.author && *request.author != caller.username && !caller.is_admin()) {
    throw Error("PermissionDenied", "only admins may create functions on behalf of another author");
  }

  FunctionRecord record;
  record.identifier = make_identifier(request.template_tag, request.name);
  record.name = request.name;
  record.template_tag = request.template_tag;
  record.author = request.author.value_or(caller.username);
  record.is_public = request.is_public;
  record.source_b64 = request.code.handler_py;
  record.requirements_b64 = request.code.requirements;
  record.handler_qs_b64 = request.code.handler_qs;
  record.version = 1;
  record.status = FunctionStatus::Registered;
  record.created_at = record.updated_at = now_ms();
  record.history.push_back(
      {1, record.source_b64, record.requirements_b64, record.handler_qs_b64, record.created_at});
  record.deployments.push_back(DeploymentRecord::fresh(record.identifier, 1));
  {
    std::lock_guard lock(mutex_);
    if (records_.contains(record.identifier)) {
      throw Error("Conflict", "function '" + record.identifier + "' already exists",
                  {{"identifier", record.identifier}});
    }
    persist_locked(record);
    records_.emplace(record.identifier, record);
  }
  changed_.notify_all();
  schedule(record.identifier);
  return record;
}

FunctionRecord Registry::update(std::string_view identifier, const UpdateRequest& request,
                                const Principal& caller) {
  FunctionRecord snapshot;
  bool redeploy = false;
  {
    std::lock_guard lock(mutex_);
    FunctionRecord& record = find_locked(identifier);
    if (!can_modify(record, caller)) {
      throw Error("PermissionDenied", "only the author or an admin may update '" + record.identifier + "'");
    }
    FunctionRecord next = record;
    if (request.is_public) next.is_public = *request.is_public;
    if (request.code) {
      redeploy = true;
      next.source_b64 = request.code->handler_py;
      next.requirements_b64 = request.code->requirements;
      next.handler_qs_b64 = request.code->handler_qs;
      next.version = record.version + 1;
      next.compiled = nullptr;
      next.status = FunctionStatus::Registered;
      next.history.push_back(
          {next.version, next.source_b64, next.requirements_b64, next.handler_qs_b64, now_ms()});
      next.deployments.push_back(DeploymentRecord::fresh(next.identifier, next.version));
      if (next.deployments.size() > kKeptDeployments) next.deployments.erase(next.deployments.begin());
    }
    next.updated_at = std::max(now_ms(), record.updated_at);
    persist_locked(next);
    record = next;
    snapshot = std::move(next);
  }
  changed_.notify_all();
  if (redeploy) schedule(snapshot.identifier);
  return snapshot;
}

void Registry::remove(std::string_view identifier, const Principal& caller) {
  {
    std::lock_guard lock(mutex_);
    const FunctionRecord& record = find_locked(identifier);
    if (!can_modify(record, caller)) {
      throw Error("PermissionDenied", "only the author or an admin may delete '" + record.identifier + "'");
    }
    dir_.remove(record.identifier);
    records_.erase(records_.find(identifier));
  }
  changed_.notify_all();
}

FunctionRecord Registry::get(std::string_view identifier) const {
  std::lock_guard lock(mutex_);
  return find_locked(identifier);
}

FunctionRecord Registry::get(std::string_view identifier, const Principal& caller) const {
  FunctionRecord record = get(identifier);
  if (!can_see(record, caller)) {
    throw Error("PermissionDenied", "function '" + record.identifier + "' is private");
  }
  return record;
}

std::vector<FunctionRecord> Registry::list(const Principal& caller) const {
  std::vector<FunctionRecord> out;
  std::lock_guard lock(mutex_);
  for (const auto& [id, record] : records_) {
    if (can_modify(record, caller) || (record.is_public && record.status == FunctionStatus::Ready)) {
      out.push_back(record);
    }
  }
  return out;
}

std::vector<DeploymentRecord> Registry::deployments(std::string_view identifier, const Principal& caller) const {
  return get(identifier, caller).deployments;
}

Invocable Registry::resolve(std::string_view identifier, const Principal& caller) const {
  std::lock_guard lock(mutex_);
  const FunctionRecord& record = find_locked(identifier);
  if (!can_see(record, caller)) {
    throw Error("PermissionDenied", "function '" + record.identifier + "' is private");
  }
  if (record.status != FunctionStatus::Ready || !record.compiled) {
    throw Error("FunctionNotReady", "function '" + record.identifier + "' is not deployed",
                {{"identifier", record.identifier}, {"status", status_name(record.status)}});
  }
  return {record.identifier, record.version, record.compiled};
}

bool Registry::record_stage(std::string_view identifier, std::int64_t version, std::size_t stage,
                            StageStatus status, std::string log, std::optional<FunctionStatus> next_status,
                            std::shared_ptr<const dsl::FunctionDef> compiled) {
  {
    std::lock_guard lock(mutex_);
    const auto it = records_.find(identifier);
    if (it == records_.end() || it->second.version != version) return false;
    FunctionRecord next = it->second;
    DeploymentRecord& d = next.deployments.back();
    if (d.version != version) return false;
    const EpochMillis now = now_ms();
    d.stages[stage].status = status;
    d.stages[stage].log = std::move(log);
    d.stages[stage].at = now;
    if (status == StageStatus::Passed && stage + 1 < d.stages.size()) {
      d.stages[stage + 1].status = StageStatus::Running;
      d.stages[stage + 1].at = now;
    }
    if (next_status) next.status = *next_status;
    next.compiled = std::move(compiled);
    next.updated_at = std::max(now, next.updated_at);
    persist_locked(next);
    it->second = std::move(next);
  }
  changed_.notify_all();
  return true;
}

DeploymentRecord Registry::run_pipeline(std::string_view identifier) {
  std::int64_t version = 0;
  std::string source_b64;
  std::string template_tag;
  {
    std::lock_guard lock(mutex_);
    FunctionRecord& record = find_locked(identifier);
    FunctionRecord next = record;
    if (next.deployments.back().version != next.version ||
        next.deployments.back().stages.front().status != StageStatus::Pending) {
      next.deployments.push_back(DeploymentRecord::fresh(next.identifier, next.version));
      if (next.deployments.size() > kKeptDeployments) next.deployments.erase(next.deployments.begin());
    }
    next.status = FunctionStatus::Validating;
    next.compiled = nullptr;
    auto& first = next.deployments.back().stages.front();
    first.status = StageStatus::Running;
    first.at = now_ms();
    persist_locked(next);
    record = next;
    version = next.version;
    source_b64 = next.source_b64;
    template_tag = next.template_tag;
  }
  changed_.notify_all();

  auto finish = [&]() {
    std::lock_guard lock(mutex_);
    const auto it = records_.find(identifier);
    if (it == records_.end()) return DeploymentRecord::fresh(std::string(identifier), version);
    for (auto d = it->second.deployments.rbegin(); d != it->second.deployments.rend(); ++d) {
      if (d->version == version) return *d;
    }
    return it->second.deployments.back();
  };

  // Validate
  std::shared_ptr<const dsl::FunctionDef> def;
  try {
    const auto source = base64_decode(source_b64);
    if (!source) throw Error("ValidationError", "handler source is not valid Base64");
    auto parsed = std::make_shared<dsl::FunctionDef>(dsl::parse(*source));
    if (parsed->template_tag && dsl::template_name(*parsed->template_tag) != template_tag) {
      throw Error("TemplateMismatch", "source declares template '" +
                                          std::string(dsl::template_name(*parsed->template_tag)) +
                                          "' but the function is registered as '" + template_tag + "'");
    }
    def = std::move(parsed);
  } catch (const Error& e) {
    record_stage(identifier, version, 0, StageStatus::Failed, diagnostic(e), FunctionStatus::FailedDeploy);
    return finish();
  }
  std::string validate_log = "parsed fn " + def->name + ": " + std::to_string(def->params.size()) +
                             " parameter(s), " + std::to_string(def->circuit.statements.size()) +
                             " statement(s), " + std::to_string(def->post_pipeline.size()) + " post step(s)";
  if (!record_stage(identifier, version, 0, StageStatus::Passed, std::move(validate_log), FunctionStatus::Building)) {
    return finish();
  }

  // Build
  std::string build_log;
  try {
    const auto bindings = dsl::smoke_bindings(*def);
    const auto circuit = dsl::instantiate(*def, bindings);
    const auto report = circuit::validate_executable(circuit);
    if (!report.ok()) throw Error("InvalidCircuit", report.summary());
    const auto st = circuit::stats(circuit);
    build_log = "smoke build";
    for (const auto& [name, value] : bindings) build_log += " " + name + "=" + std::to_string(value);
    build_log += ": width " + std::to_string(st.width) + ", " + std::to_string(st.gate_count) + " gate(s), depth " +
                 std::to_string(st.depth);
  } catch (const Error& e) {
    record_stage(identifier, version, 1, StageStatus::Failed, diagnostic(e), FunctionStatus::FailedDeploy);
    return finish();
  }
  if (!record_stage(identifier, version, 1, StageStatus::Passed, std::move(build_log), FunctionStatus::Deploying)) {
    return finish();
  }

  // Deploy
  record_stage(identifier, version, 2, StageStatus::Passed,
               "route /api/function/" + std::string(identifier) + " published", FunctionStatus::Ready, def);
  return finish();
}

FunctionRecord Registry::await_deployment(std::string_view identifier, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const FunctionRecord& record = find_locked(identifier);
    if (record.status == FunctionStatus::Ready || record.status == FunctionStatus::FailedDeploy) return record;
    if (changed_.wait_until(lock, deadline) == std::cv_status::timeout) return find_locked(identifier);
  }
}

}  // namespace qfaas::registry
