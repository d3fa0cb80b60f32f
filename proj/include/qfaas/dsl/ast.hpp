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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qfaas/circuit/circuit.hpp"

namespace qfaas::dsl {

struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;

  bool operator==(const SourceLoc&) const = default;
};

/// Immutable expression tree with structural equality. Copies share nodes.
class Expr {
 public:
  enum class Op { Int, Real, Pi, Var, Neg, Add, Sub, Mul, Div, Mod };

  /// The integer literal 0.
  Expr();

  static Expr integer(std::int64_t value, SourceLoc loc);
  static Expr real(double value, SourceLoc loc);
  static Expr pi(SourceLoc loc);
  static Expr var(std::string name, SourceLoc loc);
  static Expr negate(Expr operand, SourceLoc loc);
  static Expr binary(Op op, Expr lhs, Expr rhs, SourceLoc loc);

  Op op() const;
  std::int64_t int_value() const;
  double real_value() const;
  const std::string& name() const;
  const Expr& lhs() const;  // also the operand of Neg
  const Expr& rhs() const;
  SourceLoc loc() const;

  bool operator==(const Expr& other) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct GateStmt {
  circuit::GateKind kind = circuit::GateKind::H;
  std::optional<Expr> angle;
  std::vector<Expr> qubits;
  SourceLoc loc;

  bool operator==(const GateStmt&) const = default;
};

struct MeasureStmt {
  bool all = false;
  std::vector<Expr> qubits;
  SourceLoc loc;

  bool operator==(const MeasureStmt&) const = default;
};

struct Statement;

/// `repeat var in from..to { body }` iterates var over [from, to).
struct RepeatStmt {
  std::string var;
  Expr from;
  Expr to;
  std::vector<Statement> body;
  SourceLoc loc;

  bool operator==(const RepeatStmt& other) const;
};

struct Statement {
  std::variant<GateStmt, RepeatStmt, MeasureStmt> node;

  bool operator==(const Statement&) const = default;
};

struct TemplateBlock {
  Expr qubits;
  std::vector<Statement> statements;

  bool operator==(const TemplateBlock&) const = default;
};

struct ParamDecl {
  std::string name;
  std::optional<std::int64_t> min;
  std::optional<std::int64_t> max;
  std::optional<std::int64_t> default_value;
  SourceLoc loc;

  bool operator==(const ParamDecl&) const = default;
};

struct PostStep {
  enum class Kind { Top, ToInt, Mod, Histogram, Identity };

  Kind kind = Kind::Identity;
  std::optional<Expr> modulus;  // Mod only
  SourceLoc loc;

  bool operator==(const PostStep&) const = default;
};

/// SDK flavour the function was written for. Stored and displayed only.
enum class Template { Qiskit, Cirq, QSharp, Braket };

std::string_view template_name(Template t);
std::optional<Template> template_from_name(std::string_view name);

struct FunctionDef {
  std::string name;
  std::optional<Template> template_tag;
  std::vector<ParamDecl> params;
  TemplateBlock circuit;
  std::vector<PostStep> post_pipeline;

  bool operator==(const FunctionDef&) const = default;

  const ParamDecl* find_param(std::string_view param) const;
};

using Bindings = std::map<std::string, std::int64_t>;

}  // namespace qfaas::dsl
