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

#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <thread>

#include "qfaas/encoding.hpp"
#include "support.hpp"

using namespace qfaas::testing;
using namespace std::chrono_literals;
using nlohmann::json;
using qfaas::gateway::GatewayConfig;

namespace {

using Clock = std::chrono::steady_clock;

double metric(const std::string& text, const std::string& name) {
  std::smatch m;
  const std::regex re("(^|\n)" + std::regex_replace(name, std::regex(R"([{}"\\])"), R"(\$&)") + " ([0-9.e+]+)");
  if (!std::regex_search(text, m, re)) return -1;
  return std::stod(m[2]);
}

GatewayConfig with_slow_mock(const TempDir& dir, double avg_seconds, std::uint64_t queue) {
  auto config = test_config(dir.path() / "data");
  const auto catalog = dir.path() / "catalog.json";
  std::ofstream(catalog) << json{{"backends",
                                  json::array({{{"name", "local-sv"}, {"provider", "local"}, {"kind", "simulator"},
                                                {"qubits", 24}},
                                               {{"name", "slow-q5"}, {"provider", "mock-ibm"}, {"kind", "qpu"},
                                                {"qubits", 5}, {"avg_seconds_per_job", avg_seconds},
                                                {"queue_length", queue}}})}};
  config.catalog_path = catalog;
  return config;
}

json invoke_body(json input, std::uint64_t shots = 1024) {
  return {{"input", std::move(input)}, {"shots", shots}, {"backendName", "local-sv"}};
}

}  // namespace

TEST(gateway, status_mapping) {
  using qfaas::gateway::http_status_for;
  EXPECT_EQ(http_status_for("Unauthorized"), 401);
  EXPECT_EQ(http_status_for("InvalidCredentials"), 401);
  EXPECT_EQ(http_status_for("PermissionDenied"), 403);
  EXPECT_EQ(http_status_for("UnknownFunction"), 404);
  EXPECT_EQ(http_status_for("UnknownJob"), 404);
  EXPECT_EQ(http_status_for("Conflict"), 409);
  EXPECT_EQ(http_status_for("RangeViolation"), 422);
  EXPECT_EQ(http_status_for("MissingParam"), 422);
  EXPECT_EQ(http_status_for("ValidationError"), 422);
  EXPECT_EQ(http_status_for("NoEligibleBackend"), 503);
  EXPECT_EQ(http_status_for("BackendDown"), 503);
  EXPECT_EQ(http_status_for("CapacityExceeded"), 503);
  EXPECT_EQ(http_status_for("SomethingElse"), 500);
}

TEST(gateway, invocation_request_parsing) {
  using qfaas::gateway::invocation_request_from_json;
  const auto r = invocation_request_from_json(json::object());
  EXPECT_EQ(r.shots, 1024u);
  EXPECT_TRUE(r.wait_for_result);
  EXPECT_TRUE(r.auto_select);
  EXPECT_TRUE(r.input.is_null());
  const auto full = invocation_request_from_json(json::parse(
      R"({"input":4,"shots":10,"waitForResult":false,"provider":"local","autoSelect":true,
          "backendType":"simulator","seed":9})"));
  EXPECT_EQ(full.shots, 10u);
  EXPECT_EQ(full.seed, 9u);
  EXPECT_FALSE(full.wait_for_result);
  auto code = [](const char* text) {
    try {
      invocation_request_from_json(json::parse(text));
    } catch (const qfaas::Error& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code(R"({"postProcessOnly":true})"), "ValidationError");
  EXPECT_EQ(code(R"({"autoSelect":false})"), "ValidationError");
  EXPECT_EQ(code(R"({"shots":0})"), "ValidationError");
  EXPECT_EQ(code(R"({"shots":"many"})"), "ValidationError");
  EXPECT_EQ(code(R"({"backendType":"gpu"})"), "ValidationError");
  EXPECT_EQ(code(R"({"extra":1})"), "ValidationError");
  EXPECT_EQ(code(R"({"autoSelect":false,"backendName":"local-sv"})"), "none");
}

TEST(gateway, routes_require_token) {
  TempDir dir;
  TestServer server(dir.path());
  const std::vector<std::pair<std::string, std::string>> routes{
      {"GET", "/api/auth/me"},          {"POST", "/api/function/qiskit-qrng"},
      {"POST", "/api/functions"},       {"GET", "/api/functions"},
      {"GET", "/api/functions/x"},      {"PUT", "/api/functions/x"},
      {"DELETE", "/api/functions/x"},   {"GET", "/api/functions/x/deployments"},
      {"GET", "/api/job/x"},            {"GET", "/api/jobs"},
      {"GET", "/api/backends"}};
  for (const auto& [method, path] : routes) {
    EXPECT_EQ(server.call(method, path, "", json::object()).status, 401) << method << " " << path;
    const auto bad = server.call(method, path, "not-a-token", json::object());
    EXPECT_EQ(bad.status, 401) << method << " " << path;
    EXPECT_EQ(bad.body.at("error"), "Unauthorized");
  }
  EXPECT_EQ(server.call("GET", "/metrics").status, 200);
  EXPECT_EQ(server.call("POST", "/api/auth/login", "", {{"username", "alice"}, {"password", "alice-pw"}}).status, 200);
}

TEST(gateway, login_rules) {
  TempDir dir;
  auto config = test_config(dir.path());
  config.token_ttl = 1s;
  TestServer server(dir.path(), config);
  const auto ok = server.call("POST", "/api/auth/login", "", {{"username", "dev"}, {"password", "dev-pw"}});
  ASSERT_EQ(ok.status, 200);
  EXPECT_EQ(ok.body.at("token_type"), "bearer");
  EXPECT_EQ(ok.body.at("expires_in"), 1);
  const auto token = ok.body.at("access_token").get<std::string>();
  const auto me = server.call("GET", "/api/auth/me", token);
  EXPECT_EQ(me.status, 200);
  EXPECT_EQ(me.body.at("role"), "developer");

  EXPECT_EQ(server.call("POST", "/api/auth/login", "", {{"username", "dev"}, {"password", "nope"}}).status, 401);
  EXPECT_EQ(server.call("POST", "/api/auth/login", "", {{"username", "ghost"}, {"password", "nope"}}).status, 401);
  EXPECT_EQ(server.call("POST", "/api/auth/login", "", {{"username", "dev"}}).status, 422);

  std::this_thread::sleep_for(1100ms);
  EXPECT_EQ(server.call("GET", "/api/backends", token).status, 401);
  EXPECT_EQ(server.call("GET", "/api/functions", token).status, 401);
}

TEST(gateway, function_crud_over_http) {
  TempDir dir;
  TestServer server(dir.path());
  const json body{{"name", "qrng"},
                  {"template", "qiskit"},
                  {"fnCode", {{"requirements", ""}, {"handlerPy", qfaas::base64_encode(qrng_source())}, {"handlerQs", ""}}},
                  {"public", true}};
  const auto created = server.call("POST", "/api/functions", server.token("dev"), body);
  ASSERT_EQ(created.status, 202) << created.raw;
  EXPECT_EQ(created.body.at("identifier"), "qiskit-qrng");
  EXPECT_TRUE(created.body.contains("deployment"));
  EXPECT_EQ(server.call("POST", "/api/functions", server.token("dev"), body).status, 409);
  EXPECT_EQ(server.call("POST", "/api/functions", server.token("alice"), body).status, 403);
  auto bad = body;
  bad["name"] = "Qrng!";
  EXPECT_EQ(server.call("POST", "/api/functions", server.token("dev"), bad).status, 422);

  server.gateway().registry().await_deployment("qiskit-qrng");
  const auto got = server.call("GET", "/api/functions/qiskit-qrng", server.token("alice"));
  EXPECT_EQ(got.status, 200);
  EXPECT_EQ(got.body.at("status"), "Ready");
  EXPECT_EQ(server.call("GET", "/api/functions/qiskit-none", server.token("dev")).status, 404);
  EXPECT_EQ(server.call("PUT", "/api/functions/qiskit-qrng", server.token("dev2"), {{"public", false}}).status, 403);
  EXPECT_EQ(server.call("PUT", "/api/functions/qiskit-qrng", server.token("dev"), {{"public", false}}).status, 200);
  const auto deployments = server.call("GET", "/api/functions/qiskit-qrng/deployments", server.token("dev"));
  EXPECT_EQ(deployments.status, 200);
  EXPECT_EQ(deployments.body.at("items").size(), 1u);

  EXPECT_EQ(server.call("DELETE", "/api/functions/qiskit-qrng", server.token("dev")).status, 204);
  EXPECT_EQ(server.call("POST", "/api/function/qiskit-qrng", server.token("dev"), invoke_body(4)).status, 404);
  EXPECT_EQ(server.call("GET", "/api/nothing-here", server.token("dev")).status, 404);
}

TEST(gateway, invoke_qrng_locally) {
  TempDir dir;
  TestServer server(dir.path());
  server.deploy("dev", "qrng", "qiskit", qrng_source(), true);
  const auto r = server.call("POST", "/api/function/qiskit-qrng", server.token("alice"), invoke_body(4));
  ASSERT_EQ(r.status, 200) << r.raw;
  const auto value = r.body.at("data").get<int>();
  EXPECT_GE(value, 0);
  EXPECT_LT(value, 16);
  const auto& details = r.body.at("details");
  EXPECT_EQ(details.at("status"), "Completed");
  EXPECT_EQ(details.at("backend"), "local-sv");
  EXPECT_EQ(details.at("shots"), 1024);
  std::uint64_t total = 0;
  for (const auto& [bits, n] : details.at("counts").items()) {
    EXPECT_EQ(bits.size(), 4u);
    total += n.get<std::uint64_t>();
  }
  EXPECT_EQ(total, 1024u);

  const auto job = server.call("GET", "/api/job/" + details.at("jobId").get<std::string>(), server.token("alice"));
  EXPECT_EQ(job.status, 200);
  EXPECT_EQ(job.body.at("status"), "Completed");
  EXPECT_EQ(job.body.at("data"), value);
  EXPECT_EQ(server.call("GET", "/api/job/" + details.at("jobId").get<std::string>(), server.token("bob")).status, 403);
  EXPECT_EQ(server.call("GET", "/api/job/" + details.at("jobId").get<std::string>(), server.token("admin")).status,
            200);
  EXPECT_EQ(server.call("GET", "/api/job/unknown", server.token("admin")).status, 404);

  const auto page = server.call("GET", "/api/jobs?status=Completed", server.token("alice"));
  EXPECT_EQ(page.body.at("total"), 1);
  EXPECT_EQ(server.call("GET", "/api/jobs", server.token("bob")).body.at("total"), 0);
  EXPECT_EQ(server.call("GET", "/api/jobs", server.token("admin")).body.at("total"), 1);
}

TEST(gateway, invoke_errors) {
  TempDir dir;
  TestServer server(dir.path());
  server.deploy("dev", "qrng", "qiskit", qrng_source(), true);
  const auto token = server.token("alice");
  auto expect_error = [&](const json& body, int status, const std::string& code) {
    const auto r = server.call("POST", "/api/function/qiskit-qrng", token, body);
    EXPECT_EQ(r.status, status) << body.dump() << " " << r.raw;
    EXPECT_EQ(r.body.value("error", ""), code) << r.raw;
    EXPECT_TRUE(r.body.contains("message"));
    EXPECT_TRUE(r.body.contains("details"));
  };
  expect_error(invoke_body(25), 422, "RangeViolation");
  expect_error(invoke_body("four"), 422, "TypeViolation");
  expect_error({{"postProcessOnly", true}}, 422, "ValidationError");
  expect_error({{"autoSelect", false}}, 422, "ValidationError");
  expect_error({{"input", 4}, {"backendName", "no-such"}}, 422, "UnknownBackend");
  expect_error({{"input", 4}, {"backendType", "qpu"}, {"provider", "local"}}, 503, "NoEligibleBackend");
  expect_error({{"input", 8}, {"backendName", "mock-ibm-q5"}}, 422, "InsufficientQubits");
  httplib::Client client("127.0.0.1", server.port());
  const auto raw = client.Post("/api/function/qiskit-qrng", {{"Authorization", "Bearer " + token}}, "{not json",
                               "application/json");
  ASSERT_TRUE(raw);
  EXPECT_EQ(raw->status, 400);
  EXPECT_EQ(json::parse(raw->body).at("error"), "InvalidJson");

  server.gateway().providers().set_operational("local-sv", false);
  expect_error(invoke_body(4), 503, "BackendDown");
}

TEST(gateway, no_wait_and_post_process_only) {
  TempDir dir;
  TestServer server(dir.path(), with_slow_mock(dir, 2.0, 1));
  server.deploy("dev", "qrng", "qiskit", qrng_source(), true);
  const auto token = server.token("alice");
  const auto start = Clock::now();
  const auto r = server.call("POST", "/api/function/qiskit-qrng", token,
                             {{"input", 3}, {"backendName", "slow-q5"}, {"waitForResult", false}});
  EXPECT_LT(Clock::now() - start, 1s);
  ASSERT_EQ(r.status, 200) << r.raw;
  EXPECT_TRUE(r.body.at("data").is_null());
  EXPECT_EQ(r.body.at("details").at("status"), "Queued");
  const auto job_id = r.body.at("details").at("jobId").get<std::string>();

  const auto early = server.call("POST", "/api/function/qiskit-qrng", token,
                                 {{"postProcessOnly", true}, {"jobId", job_id}});
  EXPECT_EQ(early.status, 409);
  EXPECT_TRUE(early.body.contains("data"));

  server.gateway().jobs().await_result(job_id, 10s);
  const auto again = server.call("POST", "/api/function/qiskit-qrng", token,
                                 {{"postProcessOnly", true}, {"jobId", job_id}});
  ASSERT_EQ(again.status, 200) << again.raw;
  const auto job = server.call("GET", "/api/job/" + job_id, token).body;
  EXPECT_EQ(job.at("status"), "Completed");
  EXPECT_EQ(again.body.at("data"), job.at("data"));
  EXPECT_EQ(again.body.at("details").at("counts"), job.at("counts"));
  EXPECT_EQ(server.call("POST", "/api/function/qiskit-qrng", server.token("bob"),
                        {{"postProcessOnly", true}, {"jobId", job_id}})
                .status,
            403);
}

TEST(gateway, post_process_only_reuses_stored_counts) {
  TempDir dir;
  TestServer server(dir.path());
  server.deploy("dev", "qrng", "qiskit", qrng_source(), true);
  auto& jobs = server.gateway().jobs();
  qfaas::jobs::NewJob spec;
  spec.function_identifier = "qiskit-qrng";
  spec.owner = "alice";
  spec.backend_name = "local-sv";
  spec.provider = "local";
  spec.shots = 100;
  const auto id = jobs.create(spec).job_id;
  jobs.transition(id, qfaas::jobs::JobStatus::Queued);
  jobs.transition(id, qfaas::jobs::JobStatus::Running);
  qfaas::jobs::TransitionPayload payload;
  payload.counts = qfaas::sim::Counts{{"11", 70}, {"01", 30}};
  payload.result_data = 0;
  jobs.transition(id, qfaas::jobs::JobStatus::Completed, payload);
  const auto r = server.call("POST", "/api/function/qiskit-qrng", server.token("alice"),
                             {{"postProcessOnly", true}, {"jobId", id}});
  ASSERT_EQ(r.status, 200) << r.raw;
  EXPECT_EQ(r.body.at("data"), 3);
}

TEST(gateway, private_functions_are_hidden) {
  TempDir dir;
  TestServer server(dir.path());
  server.deploy("dev", "secret", "qiskit", "fn secret\ncircuit { qubits 1; h 0; measure all }\n", false);
  const auto r = server.call("POST", "/api/function/qiskit-secret", server.token("alice"), invoke_body(nullptr));
  EXPECT_EQ(r.status, 403);
  EXPECT_TRUE(r.body.contains("data"));
  EXPECT_TRUE(r.body.at("data").is_null());
  EXPECT_EQ(server.call("GET", "/api/functions/qiskit-secret", server.token("alice")).status, 403);
  EXPECT_EQ(server.call("GET", "/api/functions", server.token("alice")).body.at("items").size(), 0u);
  EXPECT_EQ(server.call("POST", "/api/function/qiskit-secret", server.token("dev"), invoke_body(nullptr)).status, 200);
}

TEST(gateway, metrics_count_invocations) {
  TempDir dir;
  TestServer server(dir.path());
  auto text = server.call("GET", "/metrics").raw;
  EXPECT_EQ(metric(text, "invocations_total"), 0);
  EXPECT_EQ(metric(text, "jobs_completed_total"), 0);
  EXPECT_EQ(metric(text, "jobs_failed_total"), 0);
  EXPECT_EQ(metric(text, "queue_depth{backend=\"local-sv\"}"), 0);
  server.deploy("dev", "bell", "qiskit", bell_source(), true);
  ASSERT_EQ(server.call("POST", "/api/function/qiskit-bell", server.token("alice"), invoke_body(nullptr)).status, 200);
  text = server.call("GET", "/metrics").raw;
  EXPECT_EQ(metric(text, "invocations_total"), 1);
  EXPECT_EQ(metric(text, "jobs_completed_total"), 1);
  EXPECT_GE(metric(text, "http_requests_total{code=\"200\"}"), 1);
}

TEST(gateway, backends_report_queue_length) {
  TempDir dir;
  TestServer server(dir.path(), with_slow_mock(dir, 30, 2));
  const auto r = server.call("GET", "/api/backends", server.token("alice"));
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body.at("items").size(), 2u);
  for (const auto& b : r.body.at("items")) {
    EXPECT_TRUE(b.contains("queue_length"));
    if (b.at("name") == "slow-q5") {
      EXPECT_EQ(b.at("queue_length"), 2);
    }
  }
  EXPECT_EQ(server.call("GET", "/api/backends?type=qpu", server.token("alice")).body.at("items").size(), 1u);
}

TEST(gateway, fixed_seed_is_deterministic) {
  TempDir dir;
  TestServer server(dir.path());
  server.deploy("dev", "ghz", "qiskit", ghz_source(), true);
  json body{{"input", 5}, {"shots", 2000}, {"seed", 1234}, {"backendName", "local-sv"}};
  const auto a = server.call("POST", "/api/function/qiskit-ghz", server.token("alice"), body);
  const auto b = server.call("POST", "/api/function/qiskit-ghz", server.token("bob"), body);
  ASSERT_EQ(a.status, 200) << a.raw;
  EXPECT_EQ(a.body.at("details").at("counts"), b.body.at("details").at("counts"));
  EXPECT_EQ(a.body.at("details").at("seed"), 1234);
  EXPECT_EQ(a.body.at("data"), b.body.at("data"));
}

TEST(gateway, visibility_matrix) {
  TempDir dir;
  TestServer server(dir.path());
  std::mt19937_64 rng(31);
  const std::vector<std::string> authors{"dev", "dev2"};
  const std::vector<std::string> viewers{"dev", "dev2", "alice", "bob", "admin"};
  std::map<std::string, std::pair<std::string, bool>> functions;
  for (int i = 0; i < 8; ++i) {
    const std::string name = "f" + std::to_string(i);
    const auto& author = authors[rng() % 2];
    const bool is_public = rng() % 2;
    server.deploy(author, name, "qiskit", "fn " + name + "\ncircuit { qubits 1; h 0; measure all }\n", is_public);
    functions["qiskit-" + name] = {author, is_public};
  }
  for (const auto& viewer : viewers) {
    std::set<std::string> expected, listed;
    for (const auto& [id, info] : functions) {
      if (viewer == "admin" || info.second || info.first == viewer) expected.insert(id);
    }
    const auto reply = server.call("GET", "/api/functions", server.token(viewer));
    for (const auto& item : reply.body.at("items")) {
      listed.insert(item.at("identifier").get<std::string>());
    }
    EXPECT_EQ(listed, expected) << viewer;
    for (const auto& [id, info] : functions) {
      const int status = server.call("POST", "/api/function/" + id, server.token(viewer), invoke_body(nullptr, 8)).status;
      EXPECT_EQ(status, expected.contains(id) ? 200 : 403) << viewer << " " << id;
    }
  }
}

TEST(gateway, config_file_and_env) {
  using namespace qfaas::gateway;
  const auto base = config_from_json(json::object());
  EXPECT_EQ(base.threshold, 60000ms);
  EXPECT_EQ(base.token_ttl, 3600s);
  const auto c = config_from_json(json::parse(R"({"listen":"0.0.0.0:9000","threshold_ms":1500,
    "password_cost":"minimal","users":[{"username":"u1","password":"p","role":"developer"}]})"));
  EXPECT_EQ(c.host, "0.0.0.0");
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.threshold, 1500ms);
  EXPECT_EQ(c.password_cost, PasswordCost::Minimal);
  ASSERT_EQ(c.users.size(), 1u);
  EXPECT_EQ(c.users[0].role, qfaas::Role::Developer);
  auto code = [](const char* text) {
    try {
      config_from_json(json::parse(text));
    } catch (const qfaas::Error& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code(R"({"colour":1})"), "ConfigError");
  EXPECT_EQ(code(R"({"listen":"nowhere"})"), "ConfigError");
  EXPECT_EQ(code(R"({"threshold_ms":-1})"), "ConfigError");
  const auto env = apply_env(c, {{"QFAAS_LISTEN", "127.0.0.1:7000"}, {"QFAAS_THRESHOLD_MS", "250"}, {"HOME", "/x"}});
  EXPECT_EQ(env.port, 7000);
  EXPECT_EQ(env.threshold, 250ms);
  EXPECT_EQ(env.users.size(), 1u);
}
