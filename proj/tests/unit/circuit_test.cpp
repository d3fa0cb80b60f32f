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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace qfaas::circuit;
using qfaas::testing::random_circuit;

namespace {

GateOp op(GateKind kind, std::vector<Qubit> targets, std::optional<double> angle = std::nullopt) {
  return {kind, std::move(targets), angle};
}

Circuit bell() {
  Circuit c;
  c.width = 2;
  c.ops = {op(GateKind::H, {0}), op(GateKind::CX, {0, 1})};
  c.measure_all();
  return c;
}

}  // namespace

TEST(circuit, validate_minimal) {
  Circuit c;
  c.width = 1;
  c.ops = {op(GateKind::H, {0})};
  c.measured = {0};
  EXPECT_TRUE(validate(c).ok());
  EXPECT_TRUE(validate_executable(c).ok());
}

TEST(circuit, validate_reports_rule_and_op) {
  Circuit c;
  c.width = 2;
  c.ops = {op(GateKind::CX, {0, 0})};
  auto r = validate(c);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].rule, Rule::DuplicateTargets);
  EXPECT_EQ(r.violations[0].op_index, 0u);

  c.ops = {op(GateKind::H, {2})};
  r = validate(c);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].rule, Rule::IndexOutOfRange);
  EXPECT_EQ(r.violations[0].op_index, 0u);
}

TEST(circuit, validate_every_rule) {
  Circuit c;
  c.width = 0;
  EXPECT_TRUE(validate(c).has(Rule::ZeroWidth));

  c.width = 2;
  c.ops = {op(GateKind::CX, {0})};
  EXPECT_TRUE(validate(c).has(Rule::WrongArity));
  c.ops = {op(GateKind::RX, {0})};
  EXPECT_TRUE(validate(c).has(Rule::MissingAngle));
  c.ops = {op(GateKind::H, {0}, 1.0)};
  EXPECT_TRUE(validate(c).has(Rule::UnexpectedAngle));
  c.ops = {op(GateKind::RZ, {0}, std::numeric_limits<double>::infinity())};
  EXPECT_TRUE(validate(c).has(Rule::NonFiniteAngle));
  c.ops = {};
  c.measured = {3};
  EXPECT_TRUE(validate(c).has(Rule::MeasuredOutOfRange));
  c.measured = {1, 0};
  EXPECT_TRUE(validate(c).has(Rule::MeasuredNotSorted));
  c.measured = {};
  EXPECT_TRUE(validate(c).ok());
  EXPECT_TRUE(validate_executable(c).has(Rule::NoMeasurement));
}

TEST(circuit, validate_detects_injected_mutations) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    Circuit c = random_circuit(rng, 4, 12);
    ASSERT_TRUE(validate(c).ok()) << to_text(c);
    if (c.ops.empty()) c.ops.push_back(op(GateKind::H, {0}));
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, c.ops.size() - 1)(rng);
    const int kind = std::uniform_int_distribution<int>(0, 5)(rng);
    Rule expected{};
    switch (kind) {
      case 0:
        c.ops[i].targets[0] = c.width + std::uniform_int_distribution<Qubit>(0, 5)(rng);
        expected = Rule::IndexOutOfRange;
        break;
      case 1:
        c.ops[i] = op(GateKind::SWAP, {0, 0});
        expected = Rule::DuplicateTargets;
        break;
      case 2:
        c.ops[i] = op(GateKind::RY, {0});
        expected = Rule::MissingAngle;
        break;
      case 3:
        c.ops[i] = op(GateKind::T, {0}, 0.5);
        expected = Rule::UnexpectedAngle;
        break;
      case 4:
        c.ops[i] = op(GateKind::RX, {0}, std::nan(""));
        expected = Rule::NonFiniteAngle;
        break;
      default:
        c.ops[i].targets.push_back(0);
        c.ops[i].targets.push_back(0);
        expected = Rule::WrongArity;
        break;
    }
    const auto report = validate(c);
    ASSERT_TRUE(report.has(expected)) << "rule " << rule_name(expected) << " in\n" << report.summary();
    bool at_index = false;
    for (const auto& v : report.violations) at_index |= v.rule == expected && v.op_index == i;
    EXPECT_TRUE(at_index);
  }
}

TEST(circuit, stats_examples) {
  EXPECT_EQ(stats(bell()), (CircuitStats{2, 2, 1, 2}));

  Circuit qrng;
  qrng.width = 3;
  qrng.ops = {op(GateKind::H, {0}), op(GateKind::H, {1}), op(GateKind::H, {2})};
  const auto s = stats(qrng);
  EXPECT_EQ(s.depth, 1u);
  EXPECT_EQ(s.gate_count, 3u);

  Circuit empty;
  empty.width = 2;
  EXPECT_EQ(stats(empty).depth, 0u);
  EXPECT_EQ(stats(empty).gate_count, 0u);

  Circuit bad;
  bad.width = 1;
  bad.ops = {op(GateKind::H, {4})};
  try {
    stats(bad);
    FAIL();
  } catch (const qfaas::Error& e) {
    EXPECT_EQ(e.code(), "InvalidCircuit");
  }
}

TEST(circuit, depth_properties) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const Circuit c = random_circuit(rng, 5, 20);
    const auto s = stats(c);
    EXPECT_LE(s.depth, s.gate_count);
    std::size_t two = 0;
    for (const auto& o : c.ops) two += o.targets.size() == 2;
    EXPECT_EQ(s.two_qubit_count, two);
  }
  Circuit line;
  line.width = 3;
  for (int i = 0; i < 7; ++i) line.ops.push_back(op(i % 2 ? GateKind::X : GateKind::RZ, {1}, i % 2 ? std::nullopt : std::optional(0.1 * i)));
  EXPECT_EQ(stats(line).depth, line.ops.size());

  Circuit disjoint;
  disjoint.width = 6;
  disjoint.ops = {op(GateKind::CX, {0, 1}), op(GateKind::H, {2}), op(GateKind::SWAP, {3, 5}), op(GateKind::Z, {4})};
  EXPECT_EQ(stats(disjoint).depth, 1u);
}

TEST(circuit, to_text_format) {
  EXPECT_EQ(to_text(bell()), "qubits 2\nh 0\ncx 0 1\nmeasure all");
  Circuit c;
  c.width = 3;
  c.ops = {op(GateKind::RX, {2}, 1.5707963)};
  c.measured = {0, 2};
  EXPECT_EQ(to_text(c), "qubits 3\nrx(1.5707963) 2\nmeasure 0 2");
}

TEST(circuit, from_text_parses_comments_and_measure) {
  const auto c = from_text("# bell\nqubits 2\n\nh 0   # first\ncx 0 1\nmeasure all\n");
  EXPECT_EQ(c, bell());
  EXPECT_EQ(from_text("qubits 3\nmeasure 0 2").measured, (std::vector<Qubit>{0, 2}));
}

TEST(circuit, from_text_errors_carry_line) {
  const auto line_of = [](const char* text) -> std::size_t {
    try {
      from_text(text);
    } catch (const ParseError& e) {
      EXPECT_EQ(e.code(), "ParseError");
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("qubits 1\nfoo 0"), 2u);
  EXPECT_EQ(line_of("qubits 2\nh 0\ncx 0"), 3u);
  EXPECT_EQ(line_of("qubits 2\nh(0.5) 0"), 2u);
  EXPECT_EQ(line_of("qubits 2\nrx 0"), 2u);
  EXPECT_EQ(line_of("qubits 2\nh a"), 2u);
  EXPECT_EQ(line_of("qubits 2\nmeasure all\nh 0"), 3u);
  EXPECT_EQ(line_of("h 0"), 1u);
}

TEST(circuit, text_round_trip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    Circuit c = random_circuit(rng, 6, 25);
    if (trial % 3 == 0) c.measured = {0};
    if (trial % 7 == 0) c.measured.clear();
    EXPECT_EQ(from_text(to_text(c)), c) << to_text(c);
  }
}
