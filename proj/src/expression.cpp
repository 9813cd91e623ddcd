#include "thetafix/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace thetafix {

struct Expression::Node {
  enum class Op { Const, VarT, VarX, Neg, Add, Sub, Mul, Div, Pow, Call } op = Op::Const;
  double value = 0.0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double t, double x) const {
    switch (op) {
      case Op::Const: return value;
      case Op::VarT: return t;
      case Op::VarX: return x;
      case Op::Neg: return -args[0]->eval(t, x);
      case Op::Add: return args[0]->eval(t, x) + args[1]->eval(t, x);
      case Op::Sub: return args[0]->eval(t, x) - args[1]->eval(t, x);
      case Op::Mul: return args[0]->eval(t, x) * args[1]->eval(t, x);
      case Op::Div: return args[0]->eval(t, x) / args[1]->eval(t, x);
      case Op::Pow: return std::pow(args[0]->eval(t, x), args[1]->eval(t, x));
      case Op::Call: {
        const double a = args[0]->eval(t, x);
        if (fn == "abs") return std::fabs(a);
        if (fn == "exp") return std::exp(a);
        if (fn == "log") return std::log(a);
        if (fn == "sqrt") return std::sqrt(a);
        if (fn == "sin") return std::sin(a);
        if (fn == "cos") return std::cos(a);
        const double b = args[1]->eval(t, x);
        if (fn == "min") return std::min(a, b);
        return std::max(a, b);
      }
    }
    return 0.0;
  }

  bool uses(Op var) const {
    if (op == var) return true;
    for (const auto& a : args)
      if (a->uses(var)) return true;
    return false;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make_const(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->value = v;
  return n;
}

NodePtr make(Op op, std::vector<NodePtr> args, std::string fn = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  n->fn = std::move(fn);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
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
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (c == '|') {
      ++pos_;
      NodePtr e = expr();
      if (!accept('|')) fail("expected closing '|'");
      return make(Op::Call, {e}, "abs");
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "t") return make(Op::VarT, {});
      if (id == "x") return make(Op::VarX, {});
      if (id == "e") return make_const(std::numbers::e);
      if (id == "pi") return make_const(std::numbers::pi);
      const bool unary_fn = id == "abs" || id == "exp" || id == "log" || id == "sqrt" || id == "sin" || id == "cos";
      const bool binary_fn = id == "min" || id == "max";
      if (!unary_fn && !binary_fn) {
        pos_ = start;
        fail("unknown identifier '" + id + "'");
      }
      if (!accept('(')) fail("expected '(' after " + id);
      std::vector<NodePtr> args{expr()};
      if (binary_fn) {
        if (!accept(',')) fail("expected ',' in " + id);
        args.push_back(expr());
      }
      if (!accept(')')) fail("expected ')'");
      return make(Op::Call, std::move(args), id);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expression::Expression() : root_(make_const(0.0)), text_("0") {}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse_all();
  e.text_ = text;
  return e;
}

Expression Expression::constant(double v) {
  Expression e;
  e.root_ = make_const(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  e.text_ = buf;
  return e;
}

double Expression::operator()(double t, double x) const { return root_->eval(t, x); }

bool Expression::uses_t() const { return root_->uses(Op::VarT); }
bool Expression::uses_x() const { return root_->uses(Op::VarX); }

double parse_real(const std::string& text) {
  const Expression e = Expression::parse(text);
  if (e.uses_t() || e.uses_x()) throw std::invalid_argument("expression '" + text + "' must be constant");
  const double v = e(0.0, 0.0);
  if (!std::isfinite(v)) throw std::invalid_argument("expression '" + text + "' is not finite");
  return v;
}

}  // namespace thetafix
