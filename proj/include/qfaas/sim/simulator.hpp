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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qfaas/circuit/circuit.hpp"
#include "qfaas/sim/kernels.hpp"

namespace qfaas::sim {

inline constexpr unsigned kDefaultMaxQubits = 24;

enum class KernelVariant { Serial, Parallel };

struct StateVector {
  unsigned n = 0;
  std::vector<Amplitude> amplitudes;

  /// |0...0> on n qubits.
  static StateVector zero(unsigned n);

  double norm_squared() const;
};

/// Bitstring (leftmost char = highest measured qubit) -> occurrences.
using Counts = std::map<std::string, std::uint64_t>;

/// Dense marginal distribution over the measured qubits. Outcome index k has
/// bit j set iff the j-th measured qubit (ascending) reads 1.
struct Distribution {
  unsigned bits = 0;
  std::vector<double> probs;

  std::string bitstring(std::uint64_t outcome) const;
  /// Nonzero entries keyed by bitstring.
  std::map<std::string, double> to_map() const;
};

struct ExecutionResult {
  Counts counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double duration_ms = 0;
  std::string backend_name;
};

void apply_gate(StateVector& state, const circuit::GateOp& op, KernelVariant variant = KernelVariant::Parallel);

/// Evolves |0...0> through every op. Throws Error{"InvalidCircuit"} if the
/// circuit fails validation or is wider than max_qubits.
StateVector run(const circuit::Circuit& circuit, KernelVariant variant = KernelVariant::Parallel,
                unsigned max_qubits = kDefaultMaxQubits);

Distribution probabilities(const StateVector& state, const std::vector<circuit::Qubit>& measured);

/// Draws `shots` outcomes, then flips each reported bit independently with
/// probability readout_flip_p. Deterministic for a fixed seed.
/// Throws Error{"InvalidDistribution"} unless probs sum to 1 within 1e-9.
Counts sample(const Distribution& dist, std::uint64_t shots, std::uint64_t seed, double readout_flip_p);
Counts sample(const std::map<std::string, double>& probs, std::uint64_t shots, std::uint64_t seed,
              double readout_flip_p);

/// Seed from system entropy, kept below 2^53 so it survives JSON clients.
std::uint64_t entropy_seed();

/// validate_executable + run + probabilities + sample, timed.
ExecutionResult execute(const circuit::Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                        double readout_flip_p, const std::string& backend_name,
                        unsigned max_qubits = kDefaultMaxQubits);

}  // namespace qfaas::sim
