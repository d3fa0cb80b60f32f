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

#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace qfaas {

/// Base of every domain error. `code()` is a stable machine-readable name
/// (e.g. "RangeViolation") that the HTTP layer maps onto a status and
/// echoes in error bodies; `details()` carries structured context.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, nlohmann::json details = nlohmann::json::object())
      : std::runtime_error(message), code_(std::move(code)), details_(std::move(details)) {}

  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  std::string code_;
  nlohmann::json details_;
};

}  // namespace qfaas
