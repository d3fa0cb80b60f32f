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

#include "qfaas/cli/cli.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <sys/stat.h>

#include "support.hpp"

using namespace qfaas::testing;
using namespace qfaas::cli;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli {
 public:
  Cli(const TempDir& config_dir, std::string server) : config_dir_(config_dir.path().string()), server_(server) {}

  Run operator()(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::vector<const char*> argv{"qfaas", "--server", server_.c_str()};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    std::istringstream in(stdin_text);
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), {out, err, in, {{"QFAAS_CONFIG_DIR", config_dir_}}});
    r.out = out.str();
    r.err = err.str();
    return r;
  }

 private:
  std::string config_dir_;
  std::string server_;
};

std::string write_file(const TempDir& dir, const std::string& name, const std::string& text) {
  const auto path = dir.path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(cli, config_dir_resolution) {
  EXPECT_EQ(config_dir({{"QFAAS_CONFIG_DIR", "/x"}, {"HOME", "/h"}}), "/x");
  EXPECT_EQ(config_dir({{"XDG_CONFIG_HOME", "/xdg"}, {"HOME", "/h"}}), "/xdg/qfaas");
  EXPECT_EQ(config_dir({{"HOME", "/h"}}), "/h/.config/qfaas");
}

TEST(cli, config_file_is_private) {
  TempDir dir;
  const auto file = dir.path() / "config.json";
  CliConfig config;
  config.token = "t0k";
  config.output = "json";
  save_cli_config(file, config);
  struct stat st {};
  ASSERT_EQ(::stat(file.c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
  const auto back = load_cli_config(file);
  EXPECT_EQ(back.token, "t0k");
  EXPECT_EQ(back.output, "json");
}

TEST(cli, login_deploy_invoke_flow) {
  TempDir data, home;
  TestServer server(data.path());
  Cli cli(home, server.base_url());

  EXPECT_EQ(cli({"backends"}).code, kAuthOrConfig);
  const auto bad = cli({"login", "dev"}, "wrong\n");
  EXPECT_EQ(bad.code, kAuthOrConfig);
  EXPECT_FALSE(bad.err.empty());
  ASSERT_EQ(cli({"login", "dev"}, "dev-pw\n").code, kOk);

  const auto qrng = write_file(home, "qrng.qf", qrng_source());
  const auto deployed = cli({"deploy", "--name", "qrng", "--template", "qiskit", "--file", qrng, "--public"});
  ASSERT_EQ(deployed.code, kOk) << deployed.err;
  EXPECT_NE(deployed.out.find("qiskit-qrng Ready"), std::string::npos);
  EXPECT_NE(deployed.out.find("Validate passed"), std::string::npos);

  const auto dup = cli({"deploy", "--name", "qrng", "--template", "qiskit", "--file", qrng});
  EXPECT_EQ(dup.code, kServerError);
  EXPECT_NE(dup.err.find("Conflict"), std::string::npos);

  const auto broken = write_file(home, "broken.qf", "fn broken\ncircuit {\n  qubits 1\n  h 0\n}\n");
  const auto failed = cli({"deploy", "--name", "broken", "--template", "qiskit", "--file", broken});
  EXPECT_EQ(failed.code, kServerError);
  EXPECT_NE(failed.err.find("Validate failed"), std::string::npos);
  EXPECT_NE(failed.err.find("MissingMeasure"), std::string::npos);

  const auto invoked = cli({"--output", "json", "invoke", "qiskit-qrng", "--input", "4", "--backend", "local-sv"});
  ASSERT_EQ(invoked.code, kOk) << invoked.err;
  const auto response = json::parse(invoked.out);
  EXPECT_GE(response.at("data").get<int>(), 0);
  EXPECT_LT(response.at("data").get<int>(), 16);
  const auto job_id = response.at("details").at("jobId").get<std::string>();

  const auto table = cli({"invoke", "qiskit-qrng", "--input", "3", "--backend", "local-sv", "--shots", "10"});
  ASSERT_EQ(table.code, kOk);
  const int value = std::stoi(table.out.substr(0, table.out.find('\n')));
  EXPECT_GE(value, 0);
  EXPECT_LT(value, 8);

  const auto job = cli({"--output", "json", "job", job_id});
  ASSERT_EQ(job.code, kOk);
  EXPECT_EQ(json::parse(job.out).at("status"), "Completed");
  EXPECT_TRUE(json::parse(job.out).contains("counts"));
  EXPECT_EQ(cli({"job", "does-not-exist"}).code, kServerError);

  const auto jobs = cli({"--output", "json", "jobs", "--status", "Completed"});
  ASSERT_EQ(jobs.code, kOk);
  EXPECT_EQ(json::parse(jobs.out).at("total"), 2);
  EXPECT_EQ(json::parse(cli({"--output", "json", "jobs", "--status", "Failed"}).out).at("total"), 0);

  const auto backends = cli({"backends"});
  ASSERT_EQ(backends.code, kOk);
  for (const char* name : {"local-sv", "mock-ibm-q5", "mock-braket-sv"}) {
    EXPECT_NE(backends.out.find(name), std::string::npos) << name;
  }
  EXPECT_EQ(cli({"invoke", "qiskit-nothing"}).code, kServerError);
}

TEST(cli, no_wait_prints_job_id) {
  TempDir data, home;
  TestServer server(data.path());
  server.deploy("dev", "bell", "qiskit", bell_source(), true);
  Cli cli(home, server.base_url());
  ASSERT_EQ(cli({"login", "alice"}, "alice-pw\n").code, kOk);
  const auto r = cli({"invoke", "qiskit-bell", "--backend", "mock-braket-sv", "--no-wait"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("jobId: "), std::string::npos);
}

TEST(cli, json_output_matches_gateway_schema) {
  TempDir data, home;
  TestServer server(data.path());
  server.deploy("dev", "bell", "qiskit", bell_source(), true);
  Cli cli(home, server.base_url());
  ASSERT_EQ(cli({"login", "alice"}, "alice-pw\n").code, kOk);
  const auto r = json::parse(cli({"--output", "json", "invoke", "qiskit-bell", "--backend", "local-sv",
                                  "--shots", "64", "--seed", "5"})
                                 .out);
  const auto direct = server.call("POST", "/api/function/qiskit-bell", server.token("alice"),
                                  {{"backendName", "local-sv"}, {"shots", 64}, {"seed", 5}, {"autoSelect", false}});
  ASSERT_EQ(direct.status, 200);
  for (const auto& key : {"status", "backend", "shots", "seed", "counts"}) {
    EXPECT_EQ(r.at("details").at(key), direct.body.at("details").at(key)) << key;
  }
  EXPECT_EQ(r.at("data"), direct.body.at("data"));
  const auto backends = json::parse(cli({"--output", "json", "backends"}).out);
  EXPECT_EQ(backends, server.call("GET", "/api/backends", server.token("alice")).body);
}

TEST(cli, transport_and_usage_errors) {
  TempDir home;
  Cli cli(home, "http://127.0.0.1:1");
  EXPECT_EQ(cli({"login", "dev"}, "dev-pw\n").code, kTransport);
  EXPECT_EQ(cli({"frobnicate"}).code, kAuthOrConfig);
  EXPECT_EQ(cli({"--help"}).code, kOk);
}
