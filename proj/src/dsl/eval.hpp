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
#include <string>
#include <variant>

#include "qfaas/dsl/ast.hpp"

namespace qfaas::dsl::detail {

using Value = std::variant<std::int64_t, double>;
using Env = std::map<std::string, std::int64_t, std::less<>>;

/// Integer arithmetic is checked; `/` truncates on integers, `%` needs integers.
/// Throws EvalError (DivisionByZero, Overflow, UnboundIdentifier, NonIntegerOperand).
Value evaluate(const Expr& expr, const Env& env);

/// Throws EvalError{rule} when the value is not an integer.
std::int64_t evaluate_int(const Expr& expr, const Env& env, const std::string& rule, const std::string& what);

double evaluate_real(const Expr& expr, const Env& env);

}  // namespace qfaas::dsl::detail
