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

#include <string>
#include <string_view>

#include <json.hpp>

#include "qfaas/circuit/circuit.hpp"
#include "qfaas/dsl/ast.hpp"
#include "qfaas/error.hpp"
#include "qfaas/sim/simulator.hpp"

namespace qfaas::dsl {

/// Syntax error. details(): {"kind", "line", "column"}; kind is e.g.
/// "UnknownGate", "UnexpectedToken", "BadNumber".
class ParseError : public Error {
 public:
  ParseError(std::string kind, SourceLoc loc, const std::string& message);
  const std::string& kind() const noexcept { return kind_; }
  SourceLoc loc() const noexcept { return loc_; }

 private:
  std::string kind_;
  SourceLoc loc_;
};

/// Well-formed source that breaks a static rule. details(): {"rule", "line", "column"}.
class StaticError : public Error {
 public:
  StaticError(std::string rule, SourceLoc loc, const std::string& message);
  const std::string& rule() const noexcept { return rule_; }
  SourceLoc loc() const noexcept { return loc_; }

 private:
  std::string rule_;
  SourceLoc loc_;
};

/// Failure while expanding a template with concrete bindings. details(): {"rule", ...}.
class EvalError : public Error {
 public:
  EvalError(std::string rule, const std::string& message, nlohmann::json extra = nlohmann::json::object());
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

inline constexpr std::size_t kMaxLoopNesting = 4;
inline constexpr circuit::Qubit kMaxTemplateWidth = 4096;
inline constexpr std::size_t kMaxExpandedOps = 1'000'000;

/// Parses a `.qf` function source and checks every static rule.
FunctionDef parse(std::string_view source);

/// Binds raw invocation input to declared parameters. A scalar binds to the
/// sole parameter, an object binds by name, null/absent uses defaults.
/// Integers given as decimal strings are accepted.
/// Throws Error with code MissingParam, RangeViolation or TypeViolation.
Bindings preprocess(const FunctionDef& def, const nlohmann::json& raw_input);

/// Expands the circuit template: loops unrolled, expressions evaluated.
/// The result passes circuit::validate_executable. Throws EvalError.
circuit::Circuit instantiate(const FunctionDef& def, const Bindings& bindings);

/// Bindings used by the deployment smoke build: default, else min, else max, else 0.
Bindings smoke_bindings(const FunctionDef& def);

struct PostResult {
  nlohmann::json data;
  nlohmann::json details;  // {"counts": {...}}
};

/// Applies the pipeline left to right to measured counts. An empty pipeline
/// behaves like `identity`. Throws Error{"PipelineTypeError"} on a step
/// applied to the wrong kind of value, EvalError for a bad modulus, and
/// Error{"InvalidCounts"} for empty or ragged counts.
PostResult postprocess(const sim::Counts& counts, const std::vector<PostStep>& pipeline, const Bindings& bindings);

}  // namespace qfaas::dsl
