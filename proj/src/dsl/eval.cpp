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

#include "eval.hpp"

#include <numbers>

#include "qfaas/dsl/dsl.hpp"

namespace qfaas::dsl::detail {

namespace {

nlohmann::json where(const Expr& e) { return {{"line", e.loc().line}, {"column", e.loc().column}}; }

// Takes the result by reference so it is read after the builtin has written it.
std::int64_t checked(bool overflow, const std::int64_t& value, const Expr& e) {
  if (overflow) throw EvalError("Overflow", "integer overflow in expression", where(e));
  return value;
}

}  // namespace

Value evaluate(const Expr& e, const Env& env) {
  switch (e.op()) {
    case Expr::Op::Int: return e.int_value();
    case Expr::Op::Real: return e.real_value();
    case Expr::Op::Pi: return std::numbers::pi;
    case Expr::Op::Var: {
      const auto it = env.find(e.name());
      if (it == env.end()) throw EvalError("UnboundIdentifier", "no value bound for '" + e.name() + "'", where(e));
      return it->second;
    }
    case Expr::Op::Neg: {
      const Value v = evaluate(e.lhs(), env);
      if (const auto* i = std::get_if<std::int64_t>(&v)) {
        std::int64_t out = 0;
        return checked(__builtin_sub_overflow(std::int64_t{0}, *i, &out), out, e);
      }
      return -std::get<double>(v);
    }
    default: break;
  }

  const Value a = evaluate(e.lhs(), env);
  const Value b = evaluate(e.rhs(), env);
  const auto* ai = std::get_if<std::int64_t>(&a);
  const auto* bi = std::get_if<std::int64_t>(&b);

  if (ai && bi) {
    std::int64_t out = 0;
    switch (e.op()) {
      case Expr::Op::Add: return checked(__builtin_add_overflow(*ai, *bi, &out), out, e);
      case Expr::Op::Sub: return checked(__builtin_sub_overflow(*ai, *bi, &out), out, e);
      case Expr::Op::Mul: return checked(__builtin_mul_overflow(*ai, *bi, &out), out, e);
      case Expr::Op::Div:
      case Expr::Op::Mod:
        if (*bi == 0) throw EvalError("DivisionByZero", "division by zero", where(e));
        if (*ai == INT64_MIN && *bi == -1) throw EvalError("Overflow", "integer overflow in expression", where(e));
        return e.op() == Expr::Op::Div ? *ai / *bi : *ai % *bi;
      default: break;
    }
  }

  const double x = ai ? static_cast<double>(*ai) : std::get<double>(a);
  const double y = bi ? static_cast<double>(*bi) : std::get<double>(b);
  switch (e.op()) {
    case Expr::Op::Add: return x + y;
    case Expr::Op::Sub: return x - y;
    case Expr::Op::Mul: return x * y;
    case Expr::Op::Div:
      if (y == 0.0) throw EvalError("DivisionByZero", "division by zero", where(e));
      return x / y;
    case Expr::Op::Mod:
      throw EvalError("NonIntegerOperand", "'%' needs integer operands", where(e));
    default: break;
  }
  throw EvalError("Internal", "unhandled expression node", where(e));
}

std::int64_t evaluate_int(const Expr& expr, const Env& env, const std::string& rule, const std::string& what) {
  const Value v = evaluate(expr, env);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw EvalError(rule, what + " must be an integer", where(expr));
}

double evaluate_real(const Expr& expr, const Env& env) {
  const Value v = evaluate(expr, env);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

}  // namespace qfaas::dsl::detail
