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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace qfaas::cli {

enum ExitCode : int { kOk = 0, kAuthOrConfig = 1, kServerError = 2, kTransport = 3 };

struct CliConfig {
  std::string server = "http://127.0.0.1:8080";
  std::optional<std::string> token;
  std::string output = "table";  // or "json"
};

/// QFAAS_CONFIG_DIR, else $XDG_CONFIG_HOME/qfaas, else $HOME/.config/qfaas.
std::filesystem::path config_dir(const std::map<std::string, std::string>& env);
CliConfig load_cli_config(const std::filesystem::path& file);
/// Writes the file with mode 0600.
void save_cli_config(const std::filesystem::path& file, const CliConfig& config);

struct CliIo {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
  /// Relevant environment (QFAAS_*, HOME, XDG_CONFIG_HOME).
  std::map<std::string, std::string> env;
  /// Disable terminal echo while reading the password.
  bool interactive = false;
};

int run_cli(int argc, const char* const* argv, CliIo io);

}  // namespace qfaas::cli
