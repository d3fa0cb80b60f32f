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

#include <array>

#include "qfaas/dsl/ast.hpp"

namespace qfaas::dsl {

struct Expr::Node {
  Op op = Op::Int;
  std::int64_t int_value = 0;
  double real_value = 0;
  std::string name;
  std::optional<Expr> lhs;
  std::optional<Expr> rhs;
  SourceLoc loc;
};

Expr::Expr() : Expr(integer(0, {})) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::integer(std::int64_t value, SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->op = Op::Int;
  n->int_value = value;
  n->loc = loc;
  return Expr(std::move(n));
}

Expr Expr::real(double value, SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->op = Op::Real;
  n->real_value = value;
  n->loc = loc;
  return Expr(std::move(n));
}

Expr Expr::pi(SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pi;
  n->loc = loc;
  return Expr(std::move(n));
}

Expr Expr::var(std::string name, SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->name = std::move(name);
  n->loc = loc;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand, SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->lhs = std::move(operand);
  n->loc = loc;
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs, SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->loc = loc;
  return Expr(std::move(n));
}

Expr::Op Expr::op() const { return node_->op; }
std::int64_t Expr::int_value() const { return node_->int_value; }
double Expr::real_value() const { return node_->real_value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return *node_->lhs; }
const Expr& Expr::rhs() const { return *node_->rhs; }
SourceLoc Expr::loc() const { return node_->loc; }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.op == b.op && a.int_value == b.int_value && a.real_value == b.real_value && a.name == b.name &&
         a.loc == b.loc && a.lhs == b.lhs && a.rhs == b.rhs;
}

bool RepeatStmt::operator==(const RepeatStmt& other) const {
  return var == other.var && from == other.from && to == other.to && body == other.body && loc == other.loc;
}

namespace {
constexpr std::array<std::pair<Template, std::string_view>, 4> kTemplates = {{
    {Template::Qiskit, "qiskit"},
    {Template::Cirq, "cirq"},
    {Template::QSharp, "qsharp"},
    {Template::Braket, "braket"},
}};
}  // namespace

std::string_view template_name(Template t) {
  for (const auto& [tag, name] : kTemplates) {
    if (tag == t) return name;
  }
  return "unknown";
}

std::optional<Template> template_from_name(std::string_view name) {
  for (const auto& [tag, n] : kTemplates) {
    if (n == name) return tag;
  }
  return std::nullopt;
}

const ParamDecl* FunctionDef::find_param(std::string_view param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p;
  }
  return nullptr;
}

}  // namespace qfaas::dsl
