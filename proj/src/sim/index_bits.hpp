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

#include <cstdint>

namespace qfaas::sim::detail {

/// Spreads `i` around a zero at bit position `pos`.
inline std::uint64_t insert_zero_bit(std::uint64_t i, unsigned pos) {
  const std::uint64_t low = i & ((std::uint64_t{1} << pos) - 1);
  return ((i >> pos) << (pos + 1)) | low;
}

/// Inserts zeros at two distinct positions; `lo` < `hi`.
inline std::uint64_t insert_two_zero_bits(std::uint64_t i, unsigned lo, unsigned hi) {
  return insert_zero_bit(insert_zero_bit(i, lo), hi);
}

}  // namespace qfaas::sim::detail
