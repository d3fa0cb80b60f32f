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

#include <fcntl.h>
#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "qfaas/encoding.hpp"

namespace qfaas::cli {

using nlohmann::json;

namespace {

/// Raised inside commands; carries the exit code.
struct CliFailure {
  int code;
  std::string message;
};

std::string env_or(const std::map<std::string, std::string>& env, const char* key, std::string fallback = {}) {
  const auto it = env.find(key);
  return it == env.end() || it->second.empty() ? fallback : it->second;
}

class Api {
 public:
  Api(const std::string& server, std::optional<std::string> token) : client_(server), token_(std::move(token)) {
    if (!client_.is_valid()) throw CliFailure{kAuthOrConfig, "invalid server URL '" + server + "'"};
    client_.set_connection_timeout(std::chrono::seconds(5));
    client_.set_read_timeout(std::chrono::seconds(600));
    if (token_) client_.set_bearer_token_auth(*token_);
  }

  void require_token() const {
    if (!token_) throw CliFailure{kAuthOrConfig, "not logged in; run `qfaas login <user>` or set QFAAS_TOKEN"};
  }

  json get(const std::string& path, const httplib::Params& params = {}) {
    return check(client_.Get(path, params, httplib::Headers{}));
  }
  json post(const std::string& path, const json& body) {
    return check(client_.Post(path, body.dump(), "application/json"));
  }

 private:
  json check(const httplib::Result& res) {
    if (!res) throw CliFailure{kTransport, "cannot reach server: " + httplib::to_string(res.error())};
    json body;
    try {
      body = res->body.empty() ? json(nullptr) : json::parse(res->body);
    } catch (const json::exception&) {
      body = json(nullptr);
    }
    if (res->status >= 200 && res->status < 300) return body;
    std::string message = "server returned " + std::to_string(res->status);
    if (body.is_object() && body.contains("error")) {
      message += " " + body["error"].get<std::string>() + ": " + body.value("message", std::string{});
    }
    throw CliFailure{res->status == 401 ? kAuthOrConfig : kServerError, message};
  }

  httplib::Client client_;
  std::optional<std::string> token_;
};

std::string read_password(CliIo& io) {
  io.err << "Password: " << std::flush;
  termios saved{};
  const bool hide = io.interactive && isatty(STDIN_FILENO) && tcgetattr(STDIN_FILENO, &saved) == 0;
  if (hide) {
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  }
  std::string password;
  std::getline(io.in, password);
  if (hide) {
    tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    io.err << "\n";
  }
  return password;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{kAuthOrConfig, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void print_job(std::ostream& out, const json& job) {
  for (const char* key : {"job_id", "function", "status", "owner", "backend", "provider", "shots", "seed",
                          "created_at", "waiting_ms", "running_ms", "error"}) {
    if (job.contains(key) && !job[key].is_null()) out << std::left << std::setw(12) << key << scalar(job[key]) << "\n";
  }
  if (job.contains("data") && !job["data"].is_null()) out << std::left << std::setw(12) << "data" << job["data"].dump() << "\n";
  if (job.contains("counts") && job["counts"].is_object()) {
    out << "counts\n";
    for (const auto& [bits, n] : job["counts"].items()) out << "  " << bits << "  " << n << "\n";
  }
}

void print_stages(std::ostream& out, const json& deployment, std::size_t& shown) {
  const auto& stages = deployment.at("stages");
  while (shown < stages.size()) {
    const auto& s = stages[shown];
    const auto status = s.value("status", std::string{});
    if (status != "passed" && status != "failed") break;
    out << s.value("name", std::string{}) << " " << status << ": " << s.value("log", std::string{}) << "\n";
    ++shown;
  }
}

}  // namespace

std::filesystem::path config_dir(const std::map<std::string, std::string>& env) {
  if (const auto dir = env_or(env, "QFAAS_CONFIG_DIR"); !dir.empty()) return dir;
  if (const auto xdg = env_or(env, "XDG_CONFIG_HOME"); !xdg.empty()) return std::filesystem::path(xdg) / "qfaas";
  return std::filesystem::path(env_or(env, "HOME", ".")) / ".config" / "qfaas";
}

CliConfig load_cli_config(const std::filesystem::path& file) {
  CliConfig config;
  std::ifstream in(file);
  if (!in) return config;
  try {
    const json doc = json::parse(in);
    config.server = doc.value("server", config.server);
    if (doc.contains("token") && doc["token"].is_string()) config.token = doc["token"].get<std::string>();
    config.output = doc.value("output", config.output);
  } catch (const json::exception& e) {
    throw CliFailure{kAuthOrConfig, file.string() + " is malformed: " + e.what()};
  }
  return config;
}

void save_cli_config(const std::filesystem::path& file, const CliConfig& config) {
  std::filesystem::create_directories(file.parent_path());
  json doc = {{"server", config.server}, {"output", config.output}};
  if (config.token) doc["token"] = *config.token;
  const std::string text = doc.dump(2) + "\n";
  const int fd = ::open(file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (fd < 0) throw CliFailure{kAuthOrConfig, "cannot write " + file.string()};
  ::fchmod(fd, 0600);
  const bool ok = ::write(fd, text.data(), text.size()) == static_cast<ssize_t>(text.size());
  ::close(fd);
  if (!ok) throw CliFailure{kAuthOrConfig, "cannot write " + file.string()};
}

int run_cli(int argc, const char* const* argv, CliIo io) {
  CLI::App app{"Command-line client for the qfaas gateway", "qfaas"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string server_flag;
  std::string output_flag;
  app.add_option("--server", server_flag, "Gateway base URL");
  app.add_option("--output", output_flag, "Output mode")->check(CLI::IsMember({"json", "table"}));

  std::string login_user;
  auto* login = app.add_subcommand("login", "Log in and store a token");
  login->add_option("user", login_user, "Username")->required();

  std::string fn_name, fn_template, fn_file, fn_requirements;
  bool fn_public = false;
  double deploy_timeout = 120;
  auto* deploy = app.add_subcommand("deploy", "Create a function and wait for its deployment");
  deploy->add_option("--name", fn_name, "Function name")->required();
  deploy->add_option("--template", fn_template, "qiskit, cirq, qsharp or braket")->required();
  deploy->add_option("--file", fn_file, "Function source (.qf)")->required();
  deploy->add_option("--requirements", fn_requirements, "requirements file, stored verbatim");
  deploy->add_flag("--public", fn_public, "Visible to every user");
  deploy->add_option("--timeout", deploy_timeout, "Seconds to wait for the pipeline");

  std::string inv_id, inv_input, inv_backend, inv_provider, inv_type, inv_job;
  std::uint64_t inv_shots = 0, inv_seed = 0;
  bool inv_no_wait = false, inv_post_only = false;
  auto* invoke = app.add_subcommand("invoke", "Invoke a deployed function");
  invoke->add_option("identifier", inv_id, "Function identifier, e.g. qiskit-qrng")->required();
  auto* input_opt = invoke->add_option("--input", inv_input, "Input value (JSON, or a bare string)");
  auto* shots_opt = invoke->add_option("--shots", inv_shots, "Number of shots")->check(CLI::PositiveNumber);
  invoke->add_option("--backend", inv_backend, "Backend name; disables auto selection");
  invoke->add_option("--provider", inv_provider, "Restrict to a provider");
  invoke->add_option("--type", inv_type, "Backend type")->check(CLI::IsMember({"qpu", "simulator"}));
  auto* seed_opt = invoke->add_option("--seed", inv_seed, "Sampling seed");
  invoke->add_flag("--no-wait", inv_no_wait, "Return immediately with the job id");
  invoke->add_flag("--post-process-only", inv_post_only, "Re-run post-processing on --job-id");
  invoke->add_option("--job-id", inv_job, "Job whose counts to post-process");

  std::string job_id;
  auto* job = app.add_subcommand("job", "Show one job");
  job->add_option("id", job_id, "Job id")->required();

  std::string jobs_status, jobs_function, jobs_owner;
  std::size_t jobs_page = 1, jobs_page_size = 50;
  auto* jobs = app.add_subcommand("jobs", "List jobs");
  jobs->add_option("--status", jobs_status, "Created, Queued, Running, Completed or Failed");
  jobs->add_option("--function", jobs_function, "Function identifier");
  jobs->add_option("--owner", jobs_owner, "Owner (admins only)");
  jobs->add_option("--page", jobs_page, "Page number")->check(CLI::PositiveNumber);
  jobs->add_option("--page-size", jobs_page_size, "Page size")->check(CLI::PositiveNumber);

  auto* backends = app.add_subcommand("backends", "List backends");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kOk : kAuthOrConfig;
  }

  try {
    const auto config_file = config_dir(io.env) / "config.json";
    CliConfig config = load_cli_config(config_file);
    const std::string server =
        !server_flag.empty() ? server_flag : env_or(io.env, "QFAAS_SERVER", config.server);
    const std::string output = !output_flag.empty() ? output_flag : config.output;
    const bool as_json = output == "json";
    std::optional<std::string> token = config.token;
    if (const auto t = env_or(io.env, "QFAAS_TOKEN"); !t.empty()) token = t;

    if (login->parsed()) {
      const std::string password = read_password(io);
      Api api(server, std::nullopt);
      const json res = api.post("/api/auth/login", {{"username", login_user}, {"password", password}});
      config.server = server;
      config.token = res.at("access_token").get<std::string>();
      if (!output_flag.empty()) config.output = output_flag;
      save_cli_config(config_file, config);
      if (as_json) {
        io.out << json{{"username", login_user}, {"expires_in", res.at("expires_in")}}.dump() << "\n";
      } else {
        io.out << "logged in as " << login_user << " (token expires in " << res.at("expires_in") << " s)\n";
      }
      return kOk;
    }

    Api api(server, token);
    api.require_token();

    if (deploy->parsed()) {
      const std::string source = read_file(fn_file);
      const std::string requirements = fn_requirements.empty() ? "" : read_file(fn_requirements);
      json body = {{"name", fn_name},
                   {"template", fn_template},
                   {"fnCode",
                    {{"requirements", base64_encode(requirements)},
                     {"handlerPy", base64_encode(source)},
                     {"handlerQs", ""}}},
                   {"public", fn_public}};
      json record = api.post("/api/functions", body);
      const std::string identifier = record.at("identifier").get<std::string>();
      std::size_t shown = 0;
      const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(deploy_timeout);
      while (true) {
        const auto status = record.at("status").get<std::string>();
        if (!as_json) print_stages(io.out, record.at("deployment"), shown);
        if (status == "Ready" || status == "FailedDeploy") break;
        if (std::chrono::steady_clock::now() > deadline) {
          throw CliFailure{kServerError, identifier + " still " + status + " after " +
                                             std::to_string(deploy_timeout) + " s"};
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
        record = api.get("/api/functions/" + identifier);
      }
      const bool ready = record.at("status") == "Ready";
      if (as_json) {
        io.out << record.dump() << "\n";
      } else {
        io.out << identifier << " " << record.at("status").get<std::string>() << "\n";
      }
      if (!ready) {
        for (const auto& s : record.at("deployment").at("stages")) {
          if (s.value("status", std::string{}) == "failed") {
            io.err << s.value("name", std::string{}) << " failed: " << s.value("log", std::string{}) << "\n";
          }
        }
        return kServerError;
      }
      return kOk;
    }

    if (invoke->parsed()) {
      json body = json::object();
      if (*input_opt) {
        try {
          body["input"] = json::parse(inv_input);
        } catch (const json::exception&) {
          body["input"] = inv_input;
        }
      }
      if (*shots_opt) body["shots"] = inv_shots;
      if (inv_no_wait) body["waitForResult"] = false;
      if (!inv_provider.empty()) body["provider"] = inv_provider;
      if (!inv_type.empty()) body["backendType"] = inv_type;
      if (!inv_backend.empty()) {
        body["backendName"] = inv_backend;
        body["autoSelect"] = false;
      }
      if (*seed_opt) body["seed"] = inv_seed;
      if (inv_post_only) body["postProcessOnly"] = true;
      if (!inv_job.empty()) body["jobId"] = inv_job;
      const json res = api.post("/api/function/" + inv_id, body);
      if (as_json) {
        io.out << res.dump() << "\n";
      } else if (res.at("data").is_null()) {
        const auto& d = res.at("details");
        io.out << "jobId: " << d.value("jobId", std::string{}) << "\n";
        io.out << "status: " << d.value("status", std::string{}) << "\n";
        if (d.contains("error")) io.out << "error: " << scalar(d["error"]) << "\n";
      } else {
        const auto& d = res.at("details");
        io.out << scalar(res.at("data")) << "\n";
        io.out << "jobId: " << d.value("jobId", std::string{}) << "  backend: " << d.value("backend", std::string{})
               << "  shots: " << d.value("shots", 0) << "\n";
      }
      return kOk;
    }

    if (job->parsed()) {
      const json res = api.get("/api/job/" + job_id);
      if (as_json) {
        io.out << res.dump() << "\n";
      } else {
        print_job(io.out, res);
      }
      return kOk;
    }

    if (jobs->parsed()) {
      httplib::Params params;
      if (!jobs_status.empty()) params.emplace("status", jobs_status);
      if (!jobs_function.empty()) params.emplace("function", jobs_function);
      if (!jobs_owner.empty()) params.emplace("owner", jobs_owner);
      params.emplace("page", std::to_string(jobs_page));
      params.emplace("page_size", std::to_string(jobs_page_size));
      const json res = api.get("/api/jobs", params);
      if (as_json) {
        io.out << res.dump() << "\n";
      } else {
        io.out << std::left << std::setw(38) << "JOB" << std::setw(11) << "STATUS" << std::setw(22) << "FUNCTION"
               << std::setw(18) << "BACKEND" << "DATA\n";
        for (const auto& j : res.at("items")) {
          io.out << std::left << std::setw(38) << scalar(j.at("job_id")) << std::setw(11) << scalar(j.at("status"))
                 << std::setw(22) << scalar(j.at("function")) << std::setw(18) << scalar(j.at("backend"))
                 << (j.at("data").is_null() ? "-" : j.at("data").dump()) << "\n";
        }
        io.out << res.at("items").size() << " of " << res.at("total") << " job(s)\n";
      }
      return kOk;
    }

    if (backends->parsed()) {
      const json res = api.get("/api/backends");
      if (as_json) {
        io.out << res.dump() << "\n";
      } else {
        io.out << std::left << std::setw(18) << "NAME" << std::setw(14) << "PROVIDER" << std::setw(11) << "TYPE"
               << std::setw(8) << "QUBITS" << std::setw(6) << "UP" << std::setw(7) << "QUEUE" << "WAIT(s)\n";
        for (const auto& b : res.at("items")) {
          io.out << std::left << std::setw(18) << scalar(b.at("name")) << std::setw(14) << scalar(b.at("provider"))
                 << std::setw(11) << scalar(b.at("kind")) << std::setw(8) << scalar(b.at("qubits")) << std::setw(6)
                 << (b.at("operational").get<bool>() ? "yes" : "no") << std::setw(7) << scalar(b.at("queue_length"))
                 << scalar(b.at("estimated_wait_seconds")) << "\n";
        }
      }
      return kOk;
    }
  } catch (const CliFailure& f) {
    io.err << "qfaas: " << f.message << "\n";
    return f.code;
  } catch (const json::exception& e) {
    io.err << "qfaas: unexpected response: " << e.what() << "\n";
    return kServerError;
  }
  return kOk;
}

}  // namespace qfaas::cli
