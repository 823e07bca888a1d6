#include "pmsdr/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "pmsdr/error.hpp"

namespace pmsdr {

struct Expression::Node {
  enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  Op op = Op::Number;
  double value = 0.0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double u) const {
    switch (op) {
      case Op::Number: return value;
      case Op::Var: return u;
      case Op::Neg: return -args[0]->eval(u);
      case Op::Add: return args[0]->eval(u) + args[1]->eval(u);
      case Op::Sub: return args[0]->eval(u) - args[1]->eval(u);
      case Op::Mul: return args[0]->eval(u) * args[1]->eval(u);
      case Op::Div: return args[0]->eval(u) / args[1]->eval(u);
      case Op::Pow: return std::pow(args[0]->eval(u), args[1]->eval(u));
      case Op::Call: {
        const double a = args[0]->eval(u);
        if (fn == "exp") return std::exp(a);
        if (fn == "log") return std::log(a);
        if (fn == "log1p") return std::log1p(a);
        if (fn == "sqrt") return std::sqrt(a);
        if (fn == "abs") return std::abs(a);
        const double b = args[1]->eval(u);
        if (fn == "pow") return std::pow(a, b);
        if (fn == "max") return std::max(a, b);
        return std::min(a, b);
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

std::size_t arity(std::string_view fn) {
  if (fn == "exp" || fn == "log" || fn == "log1p" || fn == "sqrt" || fn == "abs") return 1;
  if (fn == "pow" || fn == "max" || fn == "min") return 2;
  return 0;
}

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0, std::string fn = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  n->fn = std::move(fn);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("cli", "custom loss expression: " + what + " at position " +
                                std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("malformed number");
      pos_ = static_cast<std::size_t>(ptr - s_.data());
      return make(Op::Number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      if (name == "u") return make(Op::Var);
      if (name == "pi") return make(Op::Number, {}, std::numbers::pi);
      const std::size_t n = arity(name);
      if (n == 0) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      std::vector<NodePtr> args{expr()};
      while (args.size() < n) {
        if (!accept(',')) fail(name + " takes " + std::to_string(n) + " arguments");
        args.push_back(expr());
      }
      if (!accept(')')) fail("expected ')'");
      return make(Op::Call, std::move(args), 0.0, name);
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  return Expression(std::string(text), Parser(text).parse());
}

double Expression::operator()(double u) const { return root_->eval(u); }

}  // namespace pmsdr
