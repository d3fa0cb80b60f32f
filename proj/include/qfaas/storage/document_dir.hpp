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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qfaas::storage {

/// One JSON document per file in a directory. put() writes a temporary file,
/// fsyncs it, renames it over the target and fsyncs the directory, so a
/// returned put() survives a crash. Keys are restricted to [A-Za-z0-9._-].
/// Not synchronized; owners serialize access.
class DocumentDir {
 public:
  explicit DocumentDir(std::filesystem::path dir, bool durable = true);

  void put(std::string_view key, const nlohmann::json& doc) const;
  std::optional<nlohmann::json> get(std::string_view key) const;
  void remove(std::string_view key) const;
  std::vector<std::string> keys() const;

  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path file_for(std::string_view key) const;

  std::filesystem::path dir_;
  bool durable_;
};

}  // namespace qfaas::storage
