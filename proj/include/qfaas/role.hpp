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

#include <optional>
#include <string>
#include <string_view>

namespace qfaas {

enum class Role { Admin, Developer, EndUser };

std::string_view role_name(Role role);
std::optional<Role> role_from_name(std::string_view name);

/// An authenticated caller.
struct Principal {
  std::string username;
  Role role = Role::EndUser;

  bool is_admin() const { return role == Role::Admin; }
};

}  // namespace qfaas
