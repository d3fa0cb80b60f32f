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

#include "qfaas/circuit/circuit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace qfaas::circuit {

namespace {

struct GateSpec {
  GateKind kind;
  std::string_view name;
  std::size_t arity;
  bool rotation;
};

constexpr std::array<GateSpec, 12> kGates = {{
    {GateKind::H, "h", 1, false},
    {GateKind::X, "x", 1, false},
    {GateKind::Y, "y", 1, false},
    {GateKind::Z, "z", 1, false},
    {GateKind::S, "s", 1, false},
    {GateKind::T, "t", 1, false},
    {GateKind::RX, "rx", 1, true},
    {GateKind::RY, "ry", 1, true},
    {GateKind::RZ, "rz", 1, true},
    {GateKind::CX, "cx", 2, false},
    {GateKind::CZ, "cz", 2, false},
    {GateKind::SWAP, "swap", 2, false},
}};

const GateSpec& spec_of(GateKind kind) { return kGates[static_cast<std::size_t>(kind)]; }

ValidationReport check(const Circuit& circuit, bool require_measurement) {
  ValidationReport report;
  auto add = [&](Rule rule, std::optional<std::size_t> index, std::string message) {
    report.violations.push_back({rule, index, std::move(message)});
  };

  if (circuit.width == 0) add(Rule::ZeroWidth, std::nullopt, "circuit width must be at least 1");

  for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
    const GateOp& op = circuit.ops[i];
    const auto& spec = spec_of(op.kind);
    if (op.targets.size() != spec.arity) {
      add(Rule::WrongArity, i,
          std::string(spec.name) + " takes " + std::to_string(spec.arity) + " target(s), got " +
              std::to_string(op.targets.size()));
    }
    for (Qubit q : op.targets) {
      if (q >= circuit.width) {
        add(Rule::IndexOutOfRange, i,
            "qubit " + std::to_string(q) + " out of range for width " + std::to_string(circuit.width));
        break;
      }
    }
    if (op.targets.size() == 2 && op.targets[0] == op.targets[1]) {
      add(Rule::DuplicateTargets, i, "two-qubit gate targets must be distinct");
    }
    if (spec.rotation && !op.angle) add(Rule::MissingAngle, i, std::string(spec.name) + " requires an angle");
    if (!spec.rotation && op.angle) add(Rule::UnexpectedAngle, i, std::string(spec.name) + " takes no angle");
    if (op.angle && !std::isfinite(*op.angle)) add(Rule::NonFiniteAngle, i, "angle must be finite");
  }

  for (std::size_t k = 0; k < circuit.measured.size(); ++k) {
    if (circuit.measured[k] >= circuit.width) {
      add(Rule::MeasuredOutOfRange, std::nullopt,
          "measured qubit " + std::to_string(circuit.measured[k]) + " out of range");
    }
    if (k > 0 && circuit.measured[k] <= circuit.measured[k - 1]) {
      add(Rule::MeasuredNotSorted, std::nullopt, "measured set must be ascending and unique");
    }
  }
  if (require_measurement && circuit.measured.empty()) {
    add(Rule::NoMeasurement, std::nullopt, "executable circuit must measure at least one qubit");
  }
  return report;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

Qubit parse_index(std::string_view token, std::size_t line) {
  Qubit value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a non-negative qubit index, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string_view mnemonic(GateKind kind) { return spec_of(kind).name; }

std::optional<GateKind> gate_from_mnemonic(std::string_view name) {
  for (const auto& g : kGates) {
    if (g.name == name) return g.kind;
  }
  return std::nullopt;
}

std::size_t arity(GateKind kind) { return spec_of(kind).arity; }
bool is_rotation(GateKind kind) { return spec_of(kind).rotation; }

void Circuit::measure_all() {
  measured.resize(width);
  for (Qubit q = 0; q < width; ++q) measured[q] = q;
}

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::ZeroWidth: return "ZeroWidth";
    case Rule::WrongArity: return "WrongArity";
    case Rule::IndexOutOfRange: return "IndexOutOfRange";
    case Rule::DuplicateTargets: return "DuplicateTargets";
    case Rule::MissingAngle: return "MissingAngle";
    case Rule::UnexpectedAngle: return "UnexpectedAngle";
    case Rule::NonFiniteAngle: return "NonFiniteAngle";
    case Rule::MeasuredOutOfRange: return "MeasuredOutOfRange";
    case Rule::MeasuredNotSorted: return "MeasuredNotSorted";
    case Rule::NoMeasurement: return "NoMeasurement";
  }
  return "Unknown";
}

bool ValidationReport::has(Rule rule) const {
  return std::any_of(violations.begin(), violations.end(), [rule](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    const auto& v = violations[i];
    out << rule_name(v.rule);
    if (v.op_index) out << " at op " << *v.op_index;
    out << ": " << v.message;
  }
  return out.str();
}

ValidationReport validate(const Circuit& circuit) { return check(circuit, false); }
ValidationReport validate_executable(const Circuit& circuit) { return check(circuit, true); }

CircuitStats stats(const Circuit& circuit) {
  const auto report = validate(circuit);
  if (!report.ok()) throw Error("InvalidCircuit", report.summary());

  CircuitStats s;
  s.width = circuit.width;
  s.gate_count = circuit.ops.size();
  std::vector<std::size_t> layer(circuit.width, 0);
  for (const auto& op : circuit.ops) {
    if (op.targets.size() == 2) ++s.two_qubit_count;
    std::size_t at = 0;
    for (Qubit q : op.targets) at = std::max(at, layer[q]);
    ++at;
    for (Qubit q : op.targets) layer[q] = at;
    s.depth = std::max(s.depth, at);
  }
  return s;
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("ParseError", "line " + std::to_string(line) + ": " + message, {{"line", line}}), line_(line) {}

std::string to_text(const Circuit& circuit) {
  std::string out = "qubits " + std::to_string(circuit.width);
  for (const auto& op : circuit.ops) {
    out += '\n';
    out += mnemonic(op.kind);
    if (op.angle) {
      std::array<char, 64> buf{};
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), *op.angle);
      out += '(';
      out.append(buf.data(), res.ptr);
      out += ')';
    }
    for (Qubit q : op.targets) {
      out += ' ';
      out += std::to_string(q);
    }
  }
  if (!circuit.measured.empty()) {
    bool all = circuit.measured.size() == circuit.width;
    for (Qubit q = 0; all && q < circuit.width; ++q) all = circuit.measured[q] == q;
    if (all) {
      out += "\nmeasure all";
    } else {
      out += "\nmeasure";
      for (Qubit q : circuit.measured) out += " " + std::to_string(q);
    }
  }
  return out;
}

Circuit from_text(std::string_view text) {
  Circuit circuit;
  bool have_header = false;
  bool measured = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto tokens = split_ws(line);

    if (!have_header) {
      if (tokens.size() != 2 || tokens[0] != "qubits") throw ParseError(line_no, "expected 'qubits N' header");
      circuit.width = parse_index(tokens[1], line_no);
      if (circuit.width == 0) throw ParseError(line_no, "qubit count must be at least 1");
      have_header = true;
      continue;
    }
    if (measured) throw ParseError(line_no, "nothing may follow the measure line");

    if (tokens[0] == "measure") {
      measured = true;
      if (tokens.size() == 2 && tokens[1] == "all") {
        circuit.measure_all();
        continue;
      }
      if (tokens.size() < 2) throw ParseError(line_no, "measure needs 'all' or qubit indices");
      for (std::size_t i = 1; i < tokens.size(); ++i) circuit.measured.push_back(parse_index(tokens[i], line_no));
      std::sort(circuit.measured.begin(), circuit.measured.end());
      circuit.measured.erase(std::unique(circuit.measured.begin(), circuit.measured.end()), circuit.measured.end());
      continue;
    }

    std::string_view head = tokens[0];
    std::optional<double> angle;
    if (const auto open = head.find('('); open != std::string_view::npos) {
      if (head.back() != ')') throw ParseError(line_no, "unterminated angle in '" + std::string(head) + "'");
      const auto arg = head.substr(open + 1, head.size() - open - 2);
      double value = 0;
      const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
      if (ec != std::errc() || ptr != arg.data() + arg.size()) {
        throw ParseError(line_no, "malformed angle '" + std::string(arg) + "'");
      }
      angle = value;
      head = head.substr(0, open);
    }
    const auto kind = gate_from_mnemonic(head);
    if (!kind) throw ParseError(line_no, "unknown gate '" + std::string(head) + "'");
    if (is_rotation(*kind) != angle.has_value()) {
      throw ParseError(line_no, std::string(head) + (angle ? " takes no angle" : " requires an angle"));
    }
    if (tokens.size() - 1 != arity(*kind)) {
      throw ParseError(line_no, std::string(head) + " takes " + std::to_string(arity(*kind)) + " qubit(s)");
    }
    GateOp op{*kind, {}, angle};
    for (std::size_t i = 1; i < tokens.size(); ++i) op.targets.push_back(parse_index(tokens[i], line_no));
    circuit.ops.push_back(std::move(op));
  }
  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, "missing 'qubits N' header");
  return circuit;
}

}  // namespace qfaas::circuit
