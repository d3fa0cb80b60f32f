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

#include "qfaas/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qfaas::sim {

using circuit::GateKind;
using circuit::GateOp;
using circuit::Qubit;

Mat2 single_qubit_matrix(const GateOp& op) {
  using namespace std::complex_literals;
  constexpr double r = std::numbers::sqrt2 / 2;
  const double theta = op.angle.value_or(0.0);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  switch (op.kind) {
    case GateKind::H: return {r, r, r, -r};
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y: return {0.0, -1i, 1i, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::S: return {1.0, 0.0, 0.0, 1i};
    case GateKind::T: return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)};
    case GateKind::RX: return {c, -1i * s, -1i * s, c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)};
    default: break;
  }
  throw Error("InvalidCircuit", "no 2x2 matrix for a two-qubit gate");
}

StateVector StateVector::zero(unsigned n) {
  StateVector s;
  s.n = n;
  s.amplitudes.assign(std::size_t{1} << n, Amplitude{0.0, 0.0});
  s.amplitudes[0] = 1.0;
  return s;
}

double StateVector::norm_squared() const {
  double total = 0;
  for (const auto& a : amplitudes) total += std::norm(a);
  return total;
}

std::string Distribution::bitstring(std::uint64_t outcome) const {
  std::string out(bits, '0');
  for (unsigned j = 0; j < bits; ++j) {
    if ((outcome >> j) & 1U) out[bits - 1 - j] = '1';
  }
  return out;
}

std::map<std::string, double> Distribution::to_map() const {
  std::map<std::string, double> out;
  for (std::uint64_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0) out.emplace(bitstring(k), probs[k]);
  }
  return out;
}

void apply_gate(StateVector& state, const GateOp& op, KernelVariant variant) {
  std::span<Amplitude> amps(state.amplitudes);
  const bool par = variant == KernelVariant::Parallel;
  switch (op.kind) {
    case GateKind::CX:
      par ? parallel::apply_cx(amps, op.targets[0], op.targets[1]) : serial::apply_cx(amps, op.targets[0], op.targets[1]);
      return;
    case GateKind::CZ:
      par ? parallel::apply_cz(amps, op.targets[0], op.targets[1]) : serial::apply_cz(amps, op.targets[0], op.targets[1]);
      return;
    case GateKind::SWAP:
      par ? parallel::apply_swap(amps, op.targets[0], op.targets[1])
          : serial::apply_swap(amps, op.targets[0], op.targets[1]);
      return;
    default: {
      const Mat2 m = single_qubit_matrix(op);
      par ? parallel::apply_1q(amps, op.targets[0], m) : serial::apply_1q(amps, op.targets[0], m);
      return;
    }
  }
}

StateVector run(const circuit::Circuit& circuit, KernelVariant variant, unsigned max_qubits) {
  const auto report = circuit::validate(circuit);
  if (!report.ok()) throw Error("InvalidCircuit", report.summary());
  if (circuit.width > max_qubits) {
    throw Error("InvalidCircuit", "circuit width " + std::to_string(circuit.width) + " exceeds simulator cap of " +
                                      std::to_string(max_qubits) + " qubits");
  }
  StateVector state = StateVector::zero(circuit.width);
  for (const auto& op : circuit.ops) apply_gate(state, op, variant);
  return state;
}

Distribution probabilities(const StateVector& state, const std::vector<Qubit>& measured) {
  Distribution dist;
  dist.bits = static_cast<unsigned>(measured.size());
  dist.probs.assign(std::size_t{1} << dist.bits, 0.0);

  bool identity = measured.size() == state.n;
  for (std::size_t j = 0; identity && j < measured.size(); ++j) identity = measured[j] == j;

  const std::int64_t size = static_cast<std::int64_t>(state.amplitudes.size());
  if (identity) {
    const Amplitude* amps = state.amplitudes.data();
    double* out = dist.probs.data();
#pragma omp parallel for schedule(static) if (state.n >= parallel::kMinParallelQubits)
    for (std::int64_t b = 0; b < size; ++b) out[b] = std::norm(amps[b]);
    return dist;
  }
  for (std::int64_t b = 0; b < size; ++b) {
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < measured.size(); ++j) k |= ((static_cast<std::uint64_t>(b) >> measured[j]) & 1U) << j;
    dist.probs[k] += std::norm(state.amplitudes[static_cast<std::size_t>(b)]);
  }
  return dist;
}

Counts sample(const Distribution& dist, std::uint64_t shots, std::uint64_t seed, double readout_flip_p) {
  if (!(readout_flip_p >= 0.0 && readout_flip_p <= 1.0)) {
    throw Error("InvalidDistribution", "readout flip probability must lie in [0, 1]");
  }
  if (dist.probs.empty()) throw Error("InvalidDistribution", "empty distribution");
  std::vector<double> cumulative(dist.probs.size());
  double total = 0;
  for (std::size_t k = 0; k < dist.probs.size(); ++k) {
    if (!(dist.probs[k] >= 0.0)) throw Error("InvalidDistribution", "negative or NaN probability");
    total += dist.probs[k];
    cumulative[k] = total;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("InvalidDistribution", "probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  // Rounding can leave total slightly below 1; draws past it go to the last
  // outcome that carries probability.
  std::size_t last_nonzero = dist.probs.size() - 1;
  while (last_nonzero > 0 && dist.probs[last_nonzero] == 0.0) --last_nonzero;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::bernoulli_distribution flip(readout_flip_p);
  std::map<std::uint64_t, std::uint64_t> tally;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    const double u = uniform(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::uint64_t outcome =
        it == cumulative.end() ? last_nonzero : static_cast<std::uint64_t>(it - cumulative.begin());
    if (readout_flip_p > 0.0) {
      for (unsigned j = 0; j < dist.bits; ++j) {
        if (flip(rng)) outcome ^= std::uint64_t{1} << j;
      }
    }
    ++tally[outcome];
  }

  Counts counts;
  for (const auto& [outcome, n] : tally) counts.emplace(dist.bitstring(outcome), n);
  return counts;
}

Counts sample(const std::map<std::string, double>& probs, std::uint64_t shots, std::uint64_t seed,
              double readout_flip_p) {
  if (probs.empty()) throw Error("InvalidDistribution", "empty distribution");
  const std::size_t bits = probs.begin()->first.size();
  if (bits == 0 || bits > 30) throw Error("InvalidDistribution", "bitstring length must be in [1, 30]");
  Distribution dist;
  dist.bits = static_cast<unsigned>(bits);
  dist.probs.assign(std::size_t{1} << bits, 0.0);
  for (const auto& [key, p] : probs) {
    if (key.size() != bits) throw Error("InvalidDistribution", "bitstrings differ in length");
    std::uint64_t k = 0;
    for (char ch : key) {
      if (ch != '0' && ch != '1') throw Error("InvalidDistribution", "bitstring '" + key + "' is not binary");
      k = (k << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    dist.probs[k] = p;
  }
  return sample(dist, shots, seed, readout_flip_p);
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  const std::uint64_t hi = rd();
  const std::uint64_t lo = rd();
  return ((hi << 32) | lo) & ((std::uint64_t{1} << 53) - 1);
}

ExecutionResult execute(const circuit::Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                        double readout_flip_p, const std::string& backend_name, unsigned max_qubits) {
  const auto start = std::chrono::steady_clock::now();
  const auto report = circuit::validate_executable(circuit);
  if (!report.ok()) throw Error("InvalidCircuit", report.summary());
  if (shots == 0) throw Error("InvalidShots", "shots must be positive");

  const StateVector state = run(circuit, KernelVariant::Parallel, max_qubits);
  const Distribution dist = probabilities(state, circuit.measured);

  ExecutionResult result;
  result.counts = sample(dist, shots, seed, readout_flip_p);
  result.shots = shots;
  result.seed = seed;
  result.backend_name = backend_name;
  result.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace qfaas::sim
