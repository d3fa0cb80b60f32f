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

#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "qfaas/cli/cli.hpp"

int main(int argc, char** argv) {
  std::map<std::string, std::string> env;
  for (const char* key : {"QFAAS_TOKEN", "QFAAS_SERVER", "QFAAS_CONFIG_DIR", "HOME", "XDG_CONFIG_HOME"}) {
    if (const char* value = std::getenv(key)) env[key] = value;
  }
  return qfaas::cli::run_cli(argc, argv, {std::cout, std::cerr, std::cin, env, isatty(STDIN_FILENO) != 0});
}
