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

#include "qfaas/gateway/auth.hpp"

#include <sodium.h>

#include <regex>

#include "qfaas/encoding.hpp"
#include "qfaas/error.hpp"

namespace qfaas::gateway {

UserStore::UserStore(const std::filesystem::path& data_dir, PasswordCost cost, bool durable)
    : dir_(data_dir / "users", durable), cost_(cost) {
  ensure_crypto_ready();
  dummy_hash_ = hash(random_token(16));
  for (const auto& key : dir_.keys()) {
    const auto doc = dir_.get(key);
    if (!doc) continue;
    if (doc->value("schema", std::string{}) != kUserSchema) {
      throw Error("StorageFailure", "user record '" + key + "' has unsupported schema");
    }
    const auto role = role_from_name(doc->value("role", std::string{}));
    if (!role) throw Error("StorageFailure", "user record '" + key + "' has an unknown role");
    users_[doc->at("username").get<std::string>()] = {doc->at("password_hash").get<std::string>(), *role};
  }
}

std::string UserStore::hash(const std::string& password) const {
  const bool minimal = cost_ == PasswordCost::Minimal;
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str(out, password.data(), password.size(),
                        minimal ? crypto_pwhash_OPSLIMIT_MIN : crypto_pwhash_OPSLIMIT_INTERACTIVE,
                        minimal ? crypto_pwhash_MEMLIMIT_MIN : crypto_pwhash_MEMLIMIT_INTERACTIVE) != 0) {
    throw Error("StorageFailure", "password hashing ran out of memory");
  }
  return out;
}

void UserStore::add(const std::string& username, const std::string& password, Role role) {
  static const std::regex pattern("[A-Za-z0-9_][A-Za-z0-9._-]{0,63}");
  if (!std::regex_match(username, pattern)) {
    throw Error("ValidationError", "username must match [A-Za-z0-9_][A-Za-z0-9._-]{0,63}");
  }
  if (password.empty()) throw Error("ValidationError", "password must not be empty");
  const std::string hashed = hash(password);
  std::lock_guard lock(mutex_);
  if (users_.contains(username)) throw Error("Conflict", "user '" + username + "' already exists");
  dir_.put(username,
           {{"schema", kUserSchema}, {"username", username}, {"role", role_name(role)}, {"password_hash", hashed}});
  users_[username] = {hashed, role};
}

bool UserStore::contains(std::string_view username) const {
  std::lock_guard lock(mutex_);
  return users_.contains(username);
}

std::optional<Principal> UserStore::authenticate(std::string_view username, std::string_view password) const {
  std::string stored = dummy_hash_;
  std::optional<Role> role;
  {
    std::lock_guard lock(mutex_);
    if (const auto it = users_.find(username); it != users_.end()) {
      stored = it->second.first;
      role = it->second.second;
    }
  }
  const bool match = crypto_pwhash_str_verify(stored.c_str(), password.data(), password.size()) == 0;
  if (!match || !role) return std::nullopt;
  return Principal{std::string(username), *role};
}

IssuedToken TokenStore::issue(const Principal& principal) {
  std::string token = random_token(32);
  std::lock_guard lock(mutex_);
  const auto now = std::chrono::steady_clock::now();
  std::erase_if(tokens_, [&](const auto& kv) { return kv.second.expires_at <= now; });
  tokens_[token] = {principal, now + ttl_};
  return {token, ttl_};
}

std::optional<Principal> TokenStore::resolve(std::string_view token) {
  std::lock_guard lock(mutex_);
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  if (it->second.expires_at <= std::chrono::steady_clock::now()) {
    tokens_.erase(it);
    return std::nullopt;
  }
  return it->second.principal;
}

}  // namespace qfaas::gateway
