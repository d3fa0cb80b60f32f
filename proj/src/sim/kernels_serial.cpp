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

// Reference kernels. Single-threaded and kept deliberately plain; the
// parallel variants are tested against these.

#include <algorithm>
#include <utility>

#include "index_bits.hpp"
#include "qfaas/sim/kernels.hpp"

namespace qfaas::sim::serial {

using detail::insert_two_zero_bits;
using detail::insert_zero_bit;

void apply_1q(std::span<Amplitude> amps, circuit::Qubit target, const Mat2& m) {
  const std::uint64_t half = amps.size() / 2;
  const std::uint64_t mask = std::uint64_t{1} << target;
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = insert_zero_bit(i, target);
    const std::uint64_t i1 = i0 | mask;
    const Amplitude a0 = amps[i0];
    const Amplitude a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
  }
}

void apply_cx(std::span<Amplitude> amps, circuit::Qubit control, circuit::Qubit target) {
  const std::uint64_t quarter = amps.size() / 4;
  const std::uint64_t cmask = std::uint64_t{1} << control;
  const std::uint64_t tmask = std::uint64_t{1} << target;
  const unsigned lo = std::min(control, target);
  const unsigned hi = std::max(control, target);
  for (std::uint64_t i = 0; i < quarter; ++i) {
    const std::uint64_t base = insert_two_zero_bits(i, lo, hi) | cmask;
    std::swap(amps[base], amps[base | tmask]);
  }
}

void apply_cz(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b) {
  const std::uint64_t quarter = amps.size() / 4;
  const std::uint64_t both = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
  const unsigned lo = std::min(a, b);
  const unsigned hi = std::max(a, b);
  for (std::uint64_t i = 0; i < quarter; ++i) {
    const std::uint64_t idx = insert_two_zero_bits(i, lo, hi) | both;
    amps[idx] = -amps[idx];
  }
}

void apply_swap(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b) {
  const std::uint64_t quarter = amps.size() / 4;
  const std::uint64_t amask = std::uint64_t{1} << a;
  const std::uint64_t bmask = std::uint64_t{1} << b;
  const unsigned lo = std::min(a, b);
  const unsigned hi = std::max(a, b);
  for (std::uint64_t i = 0; i < quarter; ++i) {
    const std::uint64_t base = insert_two_zero_bits(i, lo, hi);
    std::swap(amps[base | amask], amps[base | bmask]);
  }
}

}  // namespace qfaas::sim::serial
