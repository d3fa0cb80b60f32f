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

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <utility>

#include "index_bits.hpp"
#include "qfaas/sim/kernels.hpp"

namespace qfaas::sim::parallel {

using detail::insert_two_zero_bits;
using detail::insert_zero_bit;

namespace {

bool wide(std::span<Amplitude> amps) { return amps.size() >= (std::size_t{1} << kMinParallelQubits); }

}  // namespace

void apply_1q(std::span<Amplitude> amps, circuit::Qubit target, const Mat2& m) {
  const std::int64_t half = static_cast<std::int64_t>(amps.size() / 2);
  const std::uint64_t mask = std::uint64_t{1} << target;
  Amplitude* data = amps.data();
  const Amplitude m0 = m[0], m1 = m[1], m2 = m[2], m3 = m[3];
#pragma omp parallel for schedule(static) if (wide(amps))
  for (std::int64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = insert_zero_bit(static_cast<std::uint64_t>(i), target);
    const std::uint64_t i1 = i0 | mask;
    const Amplitude a0 = data[i0];
    const Amplitude a1 = data[i1];
    data[i0] = m0 * a0 + m1 * a1;
    data[i1] = m2 * a0 + m3 * a1;
  }
}

void apply_cx(std::span<Amplitude> amps, circuit::Qubit control, circuit::Qubit target) {
  const std::int64_t quarter = static_cast<std::int64_t>(amps.size() / 4);
  const std::uint64_t cmask = std::uint64_t{1} << control;
  const std::uint64_t tmask = std::uint64_t{1} << target;
  const unsigned lo = std::min(control, target);
  const unsigned hi = std::max(control, target);
  Amplitude* data = amps.data();
#pragma omp parallel for schedule(static) if (wide(amps))
  for (std::int64_t i = 0; i < quarter; ++i) {
    const std::uint64_t base = insert_two_zero_bits(static_cast<std::uint64_t>(i), lo, hi) | cmask;
    std::swap(data[base], data[base | tmask]);
  }
}

void apply_cz(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b) {
  const std::int64_t quarter = static_cast<std::int64_t>(amps.size() / 4);
  const std::uint64_t both = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
  const unsigned lo = std::min(a, b);
  const unsigned hi = std::max(a, b);
  Amplitude* data = amps.data();
#pragma omp parallel for schedule(static) if (wide(amps))
  for (std::int64_t i = 0; i < quarter; ++i) {
    const std::uint64_t idx = insert_two_zero_bits(static_cast<std::uint64_t>(i), lo, hi) | both;
    data[idx] = -data[idx];
  }
}

void apply_swap(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b) {
  const std::int64_t quarter = static_cast<std::int64_t>(amps.size() / 4);
  const std::uint64_t amask = std::uint64_t{1} << a;
  const std::uint64_t bmask = std::uint64_t{1} << b;
  const unsigned lo = std::min(a, b);
  const unsigned hi = std::max(a, b);
  Amplitude* data = amps.data();
#pragma omp parallel for schedule(static) if (wide(amps))
  for (std::int64_t i = 0; i < quarter; ++i) {
    const std::uint64_t base = insert_two_zero_bits(static_cast<std::uint64_t>(i), lo, hi);
    std::swap(data[base | amask], data[base | bmask]);
  }
}

}  // namespace qfaas::sim::parallel
