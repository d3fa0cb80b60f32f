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

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "qfaas/gateway/config.hpp"
#include "qfaas/role.hpp"
#include "qfaas/storage/document_dir.hpp"

namespace qfaas::gateway {

inline constexpr std::string_view kUserSchema = "qfaas.user/v1";

/// Users persisted under data/users, one record per user, passwords kept
/// only as libsodium pwhash strings.
class UserStore {
 public:
  UserStore(const std::filesystem::path& data_dir, PasswordCost cost, bool durable = true);

  /// Throws Error{"Conflict"} if the user exists, ValidationError on a bad name.
  void add(const std::string& username, const std::string& password, Role role);
  bool contains(std::string_view username) const;
  /// Constant work whether or not the user exists.
  std::optional<Principal> authenticate(std::string_view username, std::string_view password) const;

 private:
  std::string hash(const std::string& password) const;

  storage::DocumentDir dir_;
  PasswordCost cost_;
  std::string dummy_hash_;
  mutable std::mutex mutex_;
  std::map<std::string, std::pair<std::string, Role>, std::less<>> users_;
};

struct IssuedToken {
  std::string access_token;
  std::chrono::seconds expires_in;
};

/// Opaque bearer tokens held in memory.
class TokenStore {
 public:
  explicit TokenStore(std::chrono::seconds ttl) : ttl_(ttl) {}

  IssuedToken issue(const Principal& principal);
  /// nullopt for unknown or expired tokens; expired entries are dropped.
  std::optional<Principal> resolve(std::string_view token);

 private:
  struct Entry {
    Principal principal;
    std::chrono::steady_clock::time_point expires_at;
  };
  std::chrono::seconds ttl_;
  std::mutex mutex_;
  std::map<std::string, Entry, std::less<>> tokens_;
};

}  // namespace qfaas::gateway
