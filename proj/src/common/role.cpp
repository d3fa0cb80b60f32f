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

#include "qfaas/role.hpp"

namespace qfaas {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::Admin: return "admin";
    case Role::Developer: return "developer";
    case Role::EndUser: return "enduser";
  }
  return "unknown";
}

std::optional<Role> role_from_name(std::string_view name) {
  if (name == "admin") return Role::Admin;
  if (name == "developer") return Role::Developer;
  if (name == "enduser") return Role::EndUser;
  return std::nullopt;
}

}  // namespace qfaas
