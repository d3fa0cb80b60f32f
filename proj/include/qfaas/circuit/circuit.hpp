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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfaas/error.hpp"

namespace qfaas::circuit {

using Qubit = std::uint32_t;

enum class GateKind { H, X, Y, Z, S, T, RX, RY, RZ, CX, CZ, SWAP };

/// Lower-case mnemonic used by the text format ("h", "rx", "cx", ...).
std::string_view mnemonic(GateKind kind);
std::optional<GateKind> gate_from_mnemonic(std::string_view name);

/// Number of qubits the gate acts on (1 or 2).
std::size_t arity(GateKind kind);
bool is_rotation(GateKind kind);

struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<Qubit> targets;
  std::optional<double> angle;  // radians, RX/RY/RZ only

  bool operator==(const GateOp&) const = default;
};

struct Circuit {
  Qubit width = 1;
  std::vector<GateOp> ops;
  /// Qubits measured at circuit end, ascending and unique.
  std::vector<Qubit> measured;

  bool operator==(const Circuit&) const = default;

  /// Sets `measured` to every qubit 0..width-1.
  void measure_all();
};

enum class Rule {
  ZeroWidth,
  WrongArity,
  IndexOutOfRange,
  DuplicateTargets,
  MissingAngle,
  UnexpectedAngle,
  NonFiniteAngle,
  MeasuredOutOfRange,
  MeasuredNotSorted,
  NoMeasurement,
};

std::string_view rule_name(Rule rule);

struct Violation {
  Rule rule;
  std::optional<std::size_t> op_index;  // absent for circuit-level rules
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Rule rule) const;
  std::string summary() const;
};

/// Checks the structural invariants of every op and of the measured set.
ValidationReport validate(const Circuit& circuit);

/// Like validate(), and additionally requires a nonempty measured set.
ValidationReport validate_executable(const Circuit& circuit);

struct CircuitStats {
  Qubit width = 0;
  std::size_t gate_count = 0;
  std::size_t two_qubit_count = 0;
  std::size_t depth = 0;

  bool operator==(const CircuitStats&) const = default;
};

/// Depth uses greedy left-to-right layering: an op lands one layer after the
/// deepest layer already occupied on any of its qubits.
/// Throws Error{"InvalidCircuit"} when validate() fails.
CircuitStats stats(const Circuit& circuit);

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Line-oriented text form:
///
///     qubits 2
///     h 0
///     rx(1.5707963267948966) 1
///     cx 0 1
///     measure all
///
/// Angles are written in shortest round-trip form so from_text(to_text(c)) == c.
std::string to_text(const Circuit& circuit);

/// Blank lines and `#` comments are ignored. Throws ParseError.
Circuit from_text(std::string_view text);

}  // namespace qfaas::circuit
