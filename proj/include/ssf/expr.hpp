// Copyright 2026 the ssf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "ssf/errors.hpp"
#include "ssf/nat.hpp"

namespace ssf {

// ---------------------------------------------------------------------------
// Abstract syntax tree for growth-function expressions.
//
// Grammar (whitespace between tokens is ignored):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' atom)?
//   atom   := integer | 'n'
//           | 'max(' expr ',' expr ')' | 'min(' expr ',' expr ')'
//           | 'log2(' expr ')' | '(' expr ')'
//
// Semantics over the naturals: '-' saturates at 0, '^' is integer power,
// 'log2' is ⌊log2⌋ with log2(0) = 0.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Const, Var, Add, Sub, Mul, Pow, Max, Min, Log2 };

  Kind kind;
  Nat value;      // Kind::Const only
  ExprPtr left;   // unary ops use `left` only
  ExprPtr right;

  static ExprPtr constant(Nat v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->value = std::move(v);
    return e;
  }
  static ExprPtr var() {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    return e;
  }
  static ExprPtr node(Kind k, ExprPtr l, ExprPtr r = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
  }
};

/// Structural equality.
inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const:
      return a.value == b.value;
    case Expr::Kind::Var:
      return true;
    case Expr::Kind::Log2:
      return expr_equal(*a.left, *b.left);
    default:
      return expr_equal(*a.left, *b.left) && expr_equal(*a.right, *b.right);
  }
}

/// Evaluate at n.  Every value is a natural; subtraction saturates at 0 and
/// a 0 result is *not* an error at this layer (growth functions add the
/// positivity requirement on top).
inline Nat eval_expr(const Expr& e, const Nat& n) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value;
    case Expr::Kind::Var:
      return n;
    case Expr::Kind::Add:
      return eval_expr(*e.left, n) + eval_expr(*e.right, n);
    case Expr::Kind::Sub:
      return saturating_sub(eval_expr(*e.left, n), eval_expr(*e.right, n));
    case Expr::Kind::Mul:
      return eval_expr(*e.left, n) * eval_expr(*e.right, n);
    case Expr::Kind::Pow: {
      Nat base = eval_expr(*e.left, n);
      Nat exp = eval_expr(*e.right, n);
      if (exp == 0) return 1;
      if (base == 0) return 0;
      if (base == 1) return 1;
      // Cap the exponent so a runaway expression cannot exhaust memory;
      // 2^26 still leaves comfortable slack over the evaluation horizon.
      if (exp > Nat(1) << 26) {
        throw ResourceError("power exponent too large: " + exp.str());
      }
      return boost::multiprecision::pow(base, exp.convert_to<unsigned>());
    }
    case Expr::Kind::Max: {
      Nat l = eval_expr(*e.left, n), r = eval_expr(*e.right, n);
      return l >= r ? l : r;
    }
    case Expr::Kind::Min: {
      Nat l = eval_expr(*e.left, n), r = eval_expr(*e.right, n);
      return l <= r ? l : r;
    }
    case Expr::Kind::Log2:
      return floor_log2(eval_expr(*e.left, n));
  }
  throw ConsistencyError("unreachable expression kind");
}

/// Canonical printer.  Output is fully parenthesized so that
/// parse(print(e)) reproduces e exactly.
inline std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value.str();
    case Expr::Kind::Var:
      return "n";
    case Expr::Kind::Add:
      return "(" + to_string(*e.left) + "+" + to_string(*e.right) + ")";
    case Expr::Kind::Sub:
      return "(" + to_string(*e.left) + "-" + to_string(*e.right) + ")";
    case Expr::Kind::Mul:
      return "(" + to_string(*e.left) + "*" + to_string(*e.right) + ")";
    case Expr::Kind::Pow:
      return "(" + to_string(*e.left) + "^" + to_string(*e.right) + ")";
    case Expr::Kind::Max:
      return "max(" + to_string(*e.left) + "," + to_string(*e.right) + ")";
    case Expr::Kind::Min:
      return "min(" + to_string(*e.left) + "," + to_string(*e.right) + ")";
    case Expr::Kind::Log2:
      return "log2(" + to_string(*e.left) + ")";
  }
  throw ConsistencyError("unreachable expression kind");
}

namespace detail {

/// Recursive-descent parser.  Offsets in errors are 1-based byte positions.
class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("syntax error: " + msg, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) {
      fail(std::string("expected '") + c + "'");
    }
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      if (consume('+')) {
        e = Expr::node(Expr::Kind::Add, e, parse_term());
      } else if (consume('-')) {
        e = Expr::node(Expr::Kind::Sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (consume('*')) {
      e = Expr::node(Expr::Kind::Mul, e, parse_factor());
    }
    return e;
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_atom();
    if (consume('^')) {
      return Expr::node(Expr::Kind::Pow, base, parse_atom());
    }
    return base;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) {
      fail("expected integer, 'n', function call or '('");
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      return Expr::constant(Nat(std::string(text_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      std::string_view name = text_.substr(start, pos_ - start);
      if (name == "n") {
        return Expr::var();
      }
      if (name == "max" || name == "min") {
        expect('(');
        ExprPtr l = parse_expr();
        expect(',');
        ExprPtr r = parse_expr();
        expect(')');
        return Expr::node(name == "max" ? Expr::Kind::Max : Expr::Kind::Min,
                          l, r);
      }
      if (name == "log2") {
        expect('(');
        ExprPtr a = parse_expr();
        expect(')');
        return Expr::node(Expr::Kind::Log2, a);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      expect(')');
      return e;
    }
    fail("expected integer, 'n', function call or '('");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse an expression; throws ParseError with a 1-based byte offset.
inline ExprPtr parse_expression(std::string_view text) {
  return detail::ExprParser(text).parse();
}

}  // namespace ssf
