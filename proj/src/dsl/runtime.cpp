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

#include <algorithm>
#include <charconv>

#include "eval.hpp"
#include "qfaas/dsl/dsl.hpp"

namespace qfaas::dsl {

namespace {

using nlohmann::json;

std::int64_t coerce(const ParamDecl& p, const json& value) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned() && value.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      throw Error("TypeViolation", "value for '" + p.name + "' does not fit a 64-bit integer", {{"param", p.name}});
    }
    return value.get<std::int64_t>();
  }
  if (value.is_string()) {
    const auto& text = value.get_ref<const std::string&>();
    std::string_view digits = text;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (!digits.empty() && ec == std::errc() && ptr == digits.data() + digits.size()) return out;
  }
  throw Error("TypeViolation", "parameter '" + p.name + "' expects an integer, got " + value.dump(),
              {{"param", p.name}, {"value", value}});
}

void check_range(const ParamDecl& p, std::int64_t v) {
  if ((p.min && v < *p.min) || (p.max && v > *p.max)) {
    json bounds = json::object();
    if (p.min) bounds["min"] = *p.min;
    if (p.max) bounds["max"] = *p.max;
    throw Error("RangeViolation", "parameter '" + p.name + "' = " + std::to_string(v) + " is out of range",
                {{"param", p.name}, {"value", v}, {"bounds", bounds}});
  }
}

class Expander {
 public:
  explicit Expander(const Bindings& bindings) {
    for (const auto& [k, v] : bindings) env_.emplace(k, v);
  }

  circuit::Circuit run(const TemplateBlock& block) {
    const std::int64_t width = detail::evaluate_int(block.qubits, env_, "NonIntegerWidth", "qubit count");
    if (width < 1) {
      throw EvalError("NonPositiveWidth", "qubit count evaluates to " + std::to_string(width) + ", must be >= 1",
                      {{"width", width}});
    }
    if (width > kMaxTemplateWidth) {
      throw EvalError("WidthTooLarge", "qubit count " + std::to_string(width) + " exceeds " +
                                           std::to_string(kMaxTemplateWidth), {{"width", width}});
    }
    out_.width = static_cast<circuit::Qubit>(width);
    expand(block.statements);

    const auto report = circuit::validate_executable(out_);
    if (!report.ok()) {
      const auto& v = report.violations.front();
      json extra = {{"violation", std::string(circuit::rule_name(v.rule))}};
      if (v.op_index) extra["op"] = *v.op_index;
      throw EvalError(std::string(circuit::rule_name(v.rule)), report.summary(), extra);
    }
    return std::move(out_);
  }

 private:
  circuit::Qubit index(const Expr& e) {
    const std::int64_t v = detail::evaluate_int(e, env_, "NonIntegerIndex", "qubit index");
    if (v < 0) {
      throw EvalError("NegativeIndex", "qubit index evaluates to " + std::to_string(v),
                      {{"line", e.loc().line}, {"column", e.loc().column}});
    }
    if (v > static_cast<std::int64_t>(UINT32_MAX)) {
      throw EvalError("IndexOutOfRange", "qubit index " + std::to_string(v) + " out of range");
    }
    return static_cast<circuit::Qubit>(v);
  }

  void expand(const std::vector<Statement>& stmts) {
    for (const auto& s : stmts) {
      if (const auto* g = std::get_if<GateStmt>(&s.node)) {
        if (out_.ops.size() >= kMaxExpandedOps) {
          throw EvalError("TooManyOps", "expanded circuit exceeds " + std::to_string(kMaxExpandedOps) + " gates");
        }
        circuit::GateOp op{g->kind, {}, std::nullopt};
        if (g->angle) op.angle = detail::evaluate_real(*g->angle, env_);
        for (const auto& q : g->qubits) op.targets.push_back(index(q));
        out_.ops.push_back(std::move(op));
      } else if (const auto* m = std::get_if<MeasureStmt>(&s.node)) {
        if (m->all) {
          out_.measure_all();
        } else {
          for (const auto& q : m->qubits) out_.measured.push_back(index(q));
          std::sort(out_.measured.begin(), out_.measured.end());
          out_.measured.erase(std::unique(out_.measured.begin(), out_.measured.end()), out_.measured.end());
        }
      } else {
        const auto& r = std::get<RepeatStmt>(s.node);
        const std::int64_t from = detail::evaluate_int(r.from, env_, "NonIntegerRange", "loop bound");
        const std::int64_t to = detail::evaluate_int(r.to, env_, "NonIntegerRange", "loop bound");
        if (from > to) {
          throw EvalError("InvalidRange", "loop range " + std::to_string(from) + ".." + std::to_string(to) +
                                              " is decreasing",
                          {{"line", r.loc.line}, {"column", r.loc.column}});
        }
        for (std::int64_t v = from; v < to; ++v) {
          env_[r.var] = v;
          expand(r.body);
        }
        env_.erase(r.var);
      }
    }
  }

  detail::Env env_;
  circuit::Circuit out_;
};

// Intermediate values flowing through the post-processing pipeline.
struct Histogram {
  std::map<std::string, double> freq;
};
struct Bitstring {
  std::string bits;
};
using PostValue = std::variant<sim::Counts, Histogram, Bitstring, std::uint64_t>;

std::string kind_name(const PostValue& v) {
  switch (v.index()) {
    case 0: return "counts";
    case 1: return "histogram";
    case 2: return "bitstring";
    default: return "integer";
  }
}

[[noreturn]] void type_error(std::string_view step, const PostValue& v) {
  throw Error("PipelineTypeError", std::string(step) + " cannot be applied to a " + kind_name(v),
              {{"step", step}, {"input", kind_name(v)}});
}

json to_json(const PostValue& v) {
  if (const auto* c = std::get_if<sim::Counts>(&v)) return json(*c);
  if (const auto* h = std::get_if<Histogram>(&v)) return json(h->freq);
  if (const auto* b = std::get_if<Bitstring>(&v)) return b->bits;
  return std::get<std::uint64_t>(v);
}

}  // namespace

Bindings preprocess(const FunctionDef& def, const json& raw_input) {
  Bindings out;
  if (raw_input.is_object()) {
    for (const auto& [key, value] : raw_input.items()) {
      const ParamDecl* p = def.find_param(key);
      if (!p) throw Error("TypeViolation", "unknown parameter '" + key + "'", {{"param", key}});
      if (value.is_null()) continue;
      out[p->name] = coerce(*p, value);
    }
  } else if (!raw_input.is_null()) {
    if (raw_input.is_array() || raw_input.is_boolean()) {
      throw Error("TypeViolation", "input must be a scalar, an object or null, got " + raw_input.dump());
    }
    if (def.params.size() != 1) {
      throw Error("TypeViolation", "scalar input needs exactly one declared parameter, function has " +
                                       std::to_string(def.params.size()));
    }
    out[def.params.front().name] = coerce(def.params.front(), raw_input);
  }

  for (const auto& p : def.params) {
    auto it = out.find(p.name);
    if (it == out.end()) {
      if (!p.default_value) throw Error("MissingParam", "no value for parameter '" + p.name + "'", {{"param", p.name}});
      it = out.emplace(p.name, *p.default_value).first;
    }
    check_range(p, it->second);
  }
  return out;
}

circuit::Circuit instantiate(const FunctionDef& def, const Bindings& bindings) {
  for (const auto& p : def.params) {
    if (!bindings.contains(p.name)) throw Error("MissingParam", "no value for parameter '" + p.name + "'", {{"param", p.name}});
  }
  return Expander(bindings).run(def.circuit);
}

Bindings smoke_bindings(const FunctionDef& def) {
  Bindings out;
  for (const auto& p : def.params) out[p.name] = p.default_value.value_or(p.min.value_or(p.max.value_or(0)));
  return out;
}

PostResult postprocess(const sim::Counts& counts, const std::vector<PostStep>& pipeline, const Bindings& bindings) {
  if (counts.empty()) throw Error("InvalidCounts", "counts are empty");
  const std::size_t width = counts.begin()->first.size();
  std::uint64_t shots = 0;
  for (const auto& [bits, n] : counts) {
    if (bits.size() != width) throw Error("InvalidCounts", "bitstrings differ in length");
    shots += n;
  }

  detail::Env env;
  for (const auto& [k, v] : bindings) env.emplace(k, v);

  PostValue value = counts;
  for (const auto& step : pipeline) {
    switch (step.kind) {
      case PostStep::Kind::Identity: break;
      case PostStep::Kind::Top: {
        const auto* c = std::get_if<sim::Counts>(&value);
        if (!c) type_error("top", value);
        // Counts iterate in lexicographic order, so the first maximum wins ties.
        auto best = c->begin();
        for (auto it = c->begin(); it != c->end(); ++it) {
          if (it->second > best->second) best = it;
        }
        value = Bitstring{best->first};
        break;
      }
      case PostStep::Kind::ToInt: {
        const auto* b = std::get_if<Bitstring>(&value);
        if (!b) type_error("to_int", value);
        if (b->bits.size() > 64) throw Error("PipelineTypeError", "bitstring too long for to_int");
        std::uint64_t n = 0;
        for (char ch : b->bits) n = (n << 1) | static_cast<std::uint64_t>(ch == '1');
        value = n;
        break;
      }
      case PostStep::Kind::Mod: {
        const auto* n = std::get_if<std::uint64_t>(&value);
        if (!n) type_error("mod", value);
        const std::int64_t divisor = detail::evaluate_int(*step.modulus, env, "InvalidModulus", "mod divisor");
        if (divisor < 1) {
          throw EvalError("InvalidModulus", "mod divisor evaluates to " + std::to_string(divisor) + ", must be >= 1");
        }
        value = *n % static_cast<std::uint64_t>(divisor);
        break;
      }
      case PostStep::Kind::Histogram: {
        const auto* c = std::get_if<sim::Counts>(&value);
        if (!c) type_error("histogram", value);
        Histogram h;
        for (const auto& [bits, k] : *c) h.freq[bits] = static_cast<double>(k) / static_cast<double>(shots);
        value = std::move(h);
        break;
      }
    }
  }
  return {to_json(value), json{{"counts", counts}}};
}

}  // namespace qfaas::dsl
