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
#include <array>
#include <cctype>
#include <charconv>
#include <set>

#include "eval.hpp"
#include "qfaas/dsl/dsl.hpp"

namespace qfaas::dsl {

ParseError::ParseError(std::string kind, SourceLoc loc, const std::string& message)
    : Error("ParseError",
            "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) + ": " + message,
            {{"kind", kind}, {"line", loc.line}, {"column", loc.column}}),
      kind_(std::move(kind)),
      loc_(loc) {}

StaticError::StaticError(std::string rule, SourceLoc loc, const std::string& message)
    : Error("StaticError",
            "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) + ": " + message,
            {{"rule", rule}, {"line", loc.line}, {"column", loc.column}}),
      rule_(std::move(rule)),
      loc_(loc) {}

EvalError::EvalError(std::string rule, const std::string& message, nlohmann::json extra)
    : Error("EvalError", message,
            [&] {
              extra["rule"] = rule;
              return extra;
            }()),
      rule_(std::move(rule)) {}

namespace {

enum class Tok {
  Ident, Int, Real,
  LBrace, RBrace, LParen, RParen,
  Semi, Colon, Equals, Pipe, Comma, DotDot,
  Plus, Minus, Star, Slash, Percent,
  Newline, End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t int_value = 0;
  double real_value = 0;
  SourceLoc loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) return out;
    }
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  Token make(Tok kind, SourceLoc loc, std::string text) {
    Token t;
    t.kind = kind;
    t.loc = loc;
    t.text = std::move(text);
    return t;
  }

  Token next() {
    for (;;) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        break;
      }
    }
    const SourceLoc loc{line_, col_};
    if (pos_ >= src_.size()) return make(Tok::End, loc, "");

    const char c = peek();
    if (c == '\n') {
      advance();
      return make(Tok::Newline, loc, "\\n");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string text;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') text += advance();
      return make(Tok::Ident, loc, text);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number(loc);

    advance();
    switch (c) {
      case '{': return make(Tok::LBrace, loc, "{");
      case '}': return make(Tok::RBrace, loc, "}");
      case '(': return make(Tok::LParen, loc, "(");
      case ')': return make(Tok::RParen, loc, ")");
      case ';': return make(Tok::Semi, loc, ";");
      case ':': return make(Tok::Colon, loc, ":");
      case '=': return make(Tok::Equals, loc, "=");
      case '|': return make(Tok::Pipe, loc, "|");
      case ',': return make(Tok::Comma, loc, ",");
      case '+': return make(Tok::Plus, loc, "+");
      case '-': return make(Tok::Minus, loc, "-");
      case '*': return make(Tok::Star, loc, "*");
      case '/': return make(Tok::Slash, loc, "/");
      case '%': return make(Tok::Percent, loc, "%");
      case '.':
        if (peek() == '.') {
          advance();
          return make(Tok::DotDot, loc, "..");
        }
        break;
      default: break;
    }
    throw ParseError("UnexpectedCharacter", loc, std::string("unexpected character '") + c + "'");
  }

  Token number(SourceLoc loc) {
    const std::size_t start = pos_;
    bool is_real = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_real = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t save_pos = pos_;
      const std::size_t save_col = col_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        is_real = true;
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      } else {
        pos_ = save_pos;
        col_ = save_col;
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    Token t = make(is_real ? Tok::Real : Tok::Int, loc, std::string(text));
    const char* first = text.data();
    const char* last = text.data() + text.size();
    std::from_chars_result res{};
    if (is_real) {
      res = std::from_chars(first, last, t.real_value);
    } else {
      res = std::from_chars(first, last, t.int_value);
    }
    if (res.ec != std::errc() || res.ptr != last) {
      throw ParseError("BadNumber", loc, "number '" + std::string(text) + "' is out of range");
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

const std::set<std::string, std::less<>>& reserved_words() {
  static const std::set<std::string, std::less<>> words = [] {
    std::set<std::string, std::less<>> w = {"fn",   "template", "param",   "int",     "min",       "max",
                                            "default", "circuit", "qubits", "repeat", "in",        "measure",
                                            "all",  "post",     "top",     "to_int",  "mod",       "histogram",
                                            "identity", "pi"};
    for (auto k : {"h", "x", "y", "z", "s", "t", "rx", "ry", "rz", "cx", "cz", "swap"}) w.insert(k);
    return w;
  }();
  return words;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  FunctionDef parse_file() {
    FunctionDef def;
    skip_separators();
    const Token& fn = peek();
    if (!is_word(fn, "fn")) throw ParseError("ExpectedFn", fn.loc, "source must start with 'fn <name>'");
    advance();
    def.name = function_name();
    end_item();

    bool have_circuit = false;
    bool have_post = false;
    bool have_template = false;
    for (;;) {
      skip_separators();
      const Token& t = peek();
      if (t.kind == Tok::End) break;
      if (is_word(t, "param")) {
        def.params.push_back(param_decl());
      } else if (is_word(t, "template")) {
        if (have_template) throw StaticError("DuplicateSection", t.loc, "'template' given twice");
        have_template = true;
        advance();
        const Token& tag = expect(Tok::Ident, "template name");
        def.template_tag = template_from_name(tag.text);
        if (!def.template_tag) {
          throw StaticError("UnknownTemplate", tag.loc,
                            "unknown template '" + tag.text + "' (expected qiskit, cirq, qsharp or braket)");
        }
      } else if (is_word(t, "circuit")) {
        if (have_circuit) throw StaticError("DuplicateSection", t.loc, "'circuit' given twice");
        have_circuit = true;
        circuit_loc_ = t.loc;
        advance();
        def.circuit = circuit_block();
      } else if (is_word(t, "post")) {
        if (have_post) throw StaticError("DuplicateSection", t.loc, "'post' given twice");
        have_post = true;
        advance();
        def.post_pipeline = post_pipeline();
      } else {
        throw ParseError("UnexpectedToken", t.loc,
                         "expected 'param', 'template', 'circuit' or 'post', got " + describe(t));
      }
      end_item();
    }
    if (!have_circuit) throw StaticError("MissingCircuit", peek().loc, "function has no 'circuit' block");
    check(def);
    return def;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  static bool is_word(const Token& t, std::string_view word) { return t.kind == Tok::Ident && t.text == word; }
  bool at(Tok kind) const { return peek().kind == kind; }

  const Token& expect(Tok kind, const std::string& what) {
    if (!at(kind)) throw ParseError("UnexpectedToken", peek().loc, "expected " + what + ", got " + describe(peek()));
    return advance();
  }

  void expect_word(std::string_view word) {
    if (!is_word(peek(), word)) {
      throw ParseError("UnexpectedToken", peek().loc,
                       "expected '" + std::string(word) + "', got " + describe(peek()));
    }
    advance();
  }

  void skip_separators() {
    while (at(Tok::Newline) || at(Tok::Semi)) advance();
  }

  void end_item() {
    if (at(Tok::Newline) || at(Tok::Semi) || at(Tok::End)) return;
    throw ParseError("UnexpectedToken", peek().loc, "expected end of line, got " + describe(peek()));
  }

  // Function names follow the registry pattern and may contain '-'.
  std::string function_name() {
    const Token& first = expect(Tok::Ident, "function name");
    std::string name = first.text;
    SourceLoc end{first.loc.line, first.loc.column + first.text.size()};
    while (at(Tok::Minus) && peek().loc == end && (peek(1).kind == Tok::Ident || peek(1).kind == Tok::Int) &&
           peek(1).loc.column == end.column + 1 && peek(1).loc.line == end.line) {
      advance();
      const Token& part = advance();
      name += "-" + part.text;
      end = {part.loc.line, part.loc.column + part.text.size()};
    }
    return name;
  }

  ParamDecl param_decl() {
    advance();  // param
    ParamDecl p;
    const Token& name = expect(Tok::Ident, "parameter name");
    p.name = name.text;
    p.loc = name.loc;
    expect(Tok::Colon, "':'");
    const Token& type = expect(Tok::Ident, "parameter type");
    if (type.text != "int") {
      throw ParseError("UnsupportedType", type.loc, "unsupported parameter type '" + type.text + "' (only int)");
    }
    while (at(Tok::Ident)) {
      const Token& attr = advance();
      std::optional<std::int64_t>* slot = nullptr;
      if (attr.text == "min") slot = &p.min;
      else if (attr.text == "max") slot = &p.max;
      else if (attr.text == "default") slot = &p.default_value;
      else throw ParseError("UnexpectedToken", attr.loc, "unknown parameter attribute '" + attr.text + "'");
      if (slot->has_value()) throw StaticError("DuplicateAttribute", attr.loc, "'" + attr.text + "' given twice");
      expect(Tok::Equals, "'='");
      bool negative = false;
      if (at(Tok::Minus)) {
        advance();
        negative = true;
      }
      const Token& value = expect(Tok::Int, "integer literal");
      *slot = negative ? -value.int_value : value.int_value;
    }
    return p;
  }

  TemplateBlock circuit_block() {
    expect(Tok::LBrace, "'{'");
    skip_separators();
    TemplateBlock block;
    if (!is_word(peek(), "qubits")) {
      throw StaticError("MissingQubits", peek().loc, "circuit block must start with 'qubits <expr>'");
    }
    advance();
    block.qubits = expr();
    statement_end();
    block.statements = statements(0);
    expect(Tok::RBrace, "'}'");
    return block;
  }

  void statement_end() {
    if (at(Tok::Newline) || at(Tok::Semi) || at(Tok::RBrace)) return;
    throw ParseError("UnexpectedToken", peek().loc, "expected end of statement, got " + describe(peek()));
  }

  std::vector<Statement> statements(std::size_t depth) {
    std::vector<Statement> out;
    for (;;) {
      skip_separators();
      if (at(Tok::RBrace) || at(Tok::End)) return out;
      out.push_back(statement(depth));
      statement_end();
    }
  }

  Statement statement(std::size_t depth) {
    const Token& head = peek();
    if (head.kind != Tok::Ident) {
      throw ParseError("UnexpectedToken", head.loc, "expected a statement, got " + describe(head));
    }
    if (head.text == "qubits") {
      throw StaticError("DuplicateQubits", head.loc, "'qubits' may appear only once, first in the circuit block");
    }
    if (head.text == "repeat") {
      if (depth + 1 > kMaxLoopNesting) {
        throw StaticError("NestingTooDeep", head.loc,
                          "repeat loops nest at most " + std::to_string(kMaxLoopNesting) + " deep");
      }
      advance();
      RepeatStmt r;
      r.loc = head.loc;
      r.var = expect(Tok::Ident, "loop variable").text;
      expect_word("in");
      r.from = expr();
      expect(Tok::DotDot, "'..'");
      r.to = expr();
      expect(Tok::LBrace, "'{'");
      r.body = statements(depth + 1);
      expect(Tok::RBrace, "'}'");
      return Statement{std::move(r)};
    }
    if (head.text == "measure") {
      advance();
      MeasureStmt m;
      m.loc = head.loc;
      if (is_word(peek(), "all")) {
        advance();
        m.all = true;
      } else {
        m.qubits = arguments();
        if (m.qubits.empty()) throw ParseError("UnexpectedToken", peek().loc, "measure needs 'all' or qubit indices");
      }
      return Statement{std::move(m)};
    }

    const auto kind = circuit::gate_from_mnemonic(head.text);
    if (!kind) throw ParseError("UnknownGate", head.loc, "unknown gate '" + head.text + "'");
    advance();
    GateStmt g;
    g.kind = *kind;
    g.loc = head.loc;
    if (circuit::is_rotation(*kind)) {
      expect(Tok::LParen, "'(' with a rotation angle");
      g.angle = expr();
      expect(Tok::RParen, "')'");
    }
    g.qubits = arguments();
    if (g.qubits.size() != circuit::arity(*kind)) {
      throw StaticError("WrongArity", head.loc,
                        head.text + " takes " + std::to_string(circuit::arity(*kind)) + " qubit argument(s), got " +
                            std::to_string(g.qubits.size()));
    }
    return Statement{std::move(g)};
  }

  bool starts_expr() const {
    switch (peek().kind) {
      case Tok::Int:
      case Tok::Real:
      case Tok::Ident:
      case Tok::LParen:
      case Tok::Minus: return true;
      default: return false;
    }
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    while (starts_expr()) {
      args.push_back(expr());
      if (at(Tok::Comma)) {
        advance();
        if (!starts_expr()) throw ParseError("UnexpectedToken", peek().loc, "expected an argument after ','");
      }
    }
    return args;
  }

  std::vector<PostStep> post_pipeline() {
    std::vector<PostStep> steps;
    for (;;) {
      const Token& t = expect(Tok::Ident, "post-processing step");
      PostStep step;
      step.loc = t.loc;
      if (t.text == "top") step.kind = PostStep::Kind::Top;
      else if (t.text == "to_int") step.kind = PostStep::Kind::ToInt;
      else if (t.text == "histogram") step.kind = PostStep::Kind::Histogram;
      else if (t.text == "identity") step.kind = PostStep::Kind::Identity;
      else if (t.text == "mod") {
        step.kind = PostStep::Kind::Mod;
        step.modulus = expr();
      } else {
        throw ParseError("UnknownPostStep", t.loc, "unknown post-processing step '" + t.text + "'");
      }
      steps.push_back(std::move(step));
      if (!at(Tok::Pipe)) return steps;
      advance();
    }
  }

  Expr expr() {
    Expr lhs = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const Token& op = advance();
      Expr rhs = term();
      lhs = Expr::binary(op.kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub, lhs, rhs, op.loc);
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      const Token& op = advance();
      Expr rhs = unary();
      const Expr::Op kind = op.kind == Tok::Star ? Expr::Op::Mul : op.kind == Tok::Slash ? Expr::Op::Div : Expr::Op::Mod;
      lhs = Expr::binary(kind, lhs, rhs, op.loc);
    }
    return lhs;
  }

  Expr unary() {
    if (at(Tok::Minus)) {
      const Token& op = advance();
      return Expr::negate(unary(), op.loc);
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: advance(); return Expr::integer(t.int_value, t.loc);
      case Tok::Real: advance(); return Expr::real(t.real_value, t.loc);
      case Tok::Ident:
        advance();
        if (t.text == "pi") return Expr::pi(t.loc);
        return Expr::var(t.text, t.loc);
      case Tok::LParen: {
        advance();
        Expr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default: break;
    }
    throw ParseError("UnexpectedToken", t.loc, "expected an expression, got " + describe(t));
  }

  // ---- static checks ----

  void check(const FunctionDef& def) {
    std::set<std::string, std::less<>> params;
    for (const auto& p : def.params) {
      if (reserved_words().contains(p.name)) {
        throw StaticError("ReservedName", p.loc, "'" + p.name + "' is reserved and cannot name a parameter");
      }
      if (!params.insert(p.name).second) throw StaticError("DuplicateParam", p.loc, "parameter '" + p.name + "' declared twice");
      if (p.min && p.max && *p.min > *p.max) throw StaticError("InvalidBounds", p.loc, "min exceeds max for '" + p.name + "'");
      if (p.default_value && ((p.min && *p.default_value < *p.min) || (p.max && *p.default_value > *p.max))) {
        throw StaticError("DefaultOutOfRange", p.loc, "default of '" + p.name + "' lies outside [min, max]");
      }
    }

    std::vector<std::string> scope(params.begin(), params.end());
    check_expr(def.circuit.qubits, scope);
    check_statements(def.circuit.statements, scope, 0);

    const auto& stmts = def.circuit.statements;
    std::size_t measures = 0;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      if (const auto* m = std::get_if<MeasureStmt>(&stmts[i].node)) {
        ++measures;
        if (measures > 1) throw StaticError("MultipleMeasure", m->loc, "circuit must contain exactly one measure statement");
        if (i + 1 != stmts.size()) throw StaticError("MeasureNotLast", m->loc, "measure must be the last statement");
      }
    }
    if (measures == 0) throw StaticError("MissingMeasure", circuit_loc_, "circuit block has no measure statement");

    for (const auto& step : def.post_pipeline) {
      if (!step.modulus) continue;
      check_expr(*step.modulus, scope);
      if (!mentions_var(*step.modulus)) {
        const auto value = detail::evaluate(*step.modulus, {});
        const auto* n = std::get_if<std::int64_t>(&value);
        if (!n || *n < 1) throw StaticError("InvalidModulus", step.loc, "mod divisor must be an integer >= 1");
      }
    }
  }

  static bool mentions_var(const Expr& e) {
    switch (e.op()) {
      case Expr::Op::Var: return true;
      case Expr::Op::Int:
      case Expr::Op::Real:
      case Expr::Op::Pi: return false;
      case Expr::Op::Neg: return mentions_var(e.lhs());
      default: return mentions_var(e.lhs()) || mentions_var(e.rhs());
    }
  }

  static void check_expr(const Expr& e, const std::vector<std::string>& scope) {
    switch (e.op()) {
      case Expr::Op::Var:
        if (std::find(scope.begin(), scope.end(), e.name()) == scope.end()) {
          throw StaticError("UndeclaredIdentifier", e.loc(), "undeclared identifier '" + e.name() + "'");
        }
        return;
      case Expr::Op::Int:
      case Expr::Op::Real:
      case Expr::Op::Pi: return;
      case Expr::Op::Neg: check_expr(e.lhs(), scope); return;
      default:
        check_expr(e.lhs(), scope);
        check_expr(e.rhs(), scope);
    }
  }

  void check_statements(const std::vector<Statement>& stmts, std::vector<std::string>& scope, std::size_t depth) {
    for (const auto& s : stmts) {
      if (const auto* g = std::get_if<GateStmt>(&s.node)) {
        if (g->angle) check_expr(*g->angle, scope);
        for (const auto& q : g->qubits) check_expr(q, scope);
      } else if (const auto* m = std::get_if<MeasureStmt>(&s.node)) {
        if (depth > 0) throw StaticError("MeasureInLoop", m->loc, "measure may not appear inside a repeat loop");
        for (const auto& q : m->qubits) check_expr(q, scope);
      } else {
        const auto& r = std::get<RepeatStmt>(s.node);
        check_expr(r.from, scope);
        check_expr(r.to, scope);
        if (reserved_words().contains(r.var)) {
          throw StaticError("ReservedName", r.loc, "'" + r.var + "' is reserved and cannot name a loop variable");
        }
        if (std::find(scope.begin(), scope.end(), r.var) != scope.end()) {
          throw StaticError("ShadowedIdentifier", r.loc, "loop variable '" + r.var + "' shadows an outer name");
        }
        scope.push_back(r.var);
        check_statements(r.body, scope, depth + 1);
        scope.pop_back();
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SourceLoc circuit_loc_;
};

}  // namespace

FunctionDef parse(std::string_view source) {
  Parser parser(Lexer(source).tokenize());
  return parser.parse_file();
}

}  // namespace qfaas::dsl
