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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace qfaas {

/// Standard padded Base64. Decoding ignores ASCII whitespace and returns
/// nullopt on any other malformation.
std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view text);

/// URL-safe unpadded Base64 of `bytes` bytes from the OS CSPRNG.
std::string random_token(std::size_t bytes = 32);

/// Initializes libsodium; safe to call repeatedly from any thread.
void ensure_crypto_ready();

}  // namespace qfaas
