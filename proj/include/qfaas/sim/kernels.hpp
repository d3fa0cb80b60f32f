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

#include <array>
#include <complex>
#include <cstdint>
#include <span>

#include "qfaas/circuit/circuit.hpp"

namespace qfaas::sim {

using Amplitude = std::complex<double>;

/// Row-major 2x2 unitary: {m00, m01, m10, m11}.
using Mat2 = std::array<Amplitude, 4>;

/// Matrix of a single-qubit gate (H, X, Y, Z, S, T, RX, RY, RZ).
Mat2 single_qubit_matrix(const circuit::GateOp& op);

// Every kernel works in place on 2^n amplitudes where basis index
// b = sum_q bit(q) * 2^q (qubit 0 least significant).

namespace serial {
void apply_1q(std::span<Amplitude> amps, circuit::Qubit target, const Mat2& m);
void apply_cx(std::span<Amplitude> amps, circuit::Qubit control, circuit::Qubit target);
void apply_cz(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b);
void apply_swap(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b);
}  // namespace serial

namespace parallel {
/// OpenMP variants; below kMinParallelQubits they run on the calling thread.
inline constexpr unsigned kMinParallelQubits = 14;

void apply_1q(std::span<Amplitude> amps, circuit::Qubit target, const Mat2& m);
void apply_cx(std::span<Amplitude> amps, circuit::Qubit control, circuit::Qubit target);
void apply_cz(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b);
void apply_swap(std::span<Amplitude> amps, circuit::Qubit a, circuit::Qubit b);
}  // namespace parallel

}  // namespace qfaas::sim
