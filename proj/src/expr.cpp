#include "coexist/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace coexist {

namespace {

enum class Op {
  Const, Var,
  Add, Sub, Mul, Div, Pow, Neg,
  Lt, Le, Gt, Ge,
  Exp, Sqrt, Sin, Abs,
  Min, Max, Piecewise,
};

}  // namespace

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  int var = -1;
  std::vector<Node> kids;

  double eval(const double* v) const {
    switch (op) {
      case Op::Const: return value;
      case Op::Var: return v[var];
      case Op::Add: return kids[0].eval(v) + kids[1].eval(v);
      case Op::Sub: return kids[0].eval(v) - kids[1].eval(v);
      case Op::Mul: return kids[0].eval(v) * kids[1].eval(v);
      case Op::Div: return kids[0].eval(v) / kids[1].eval(v);
      case Op::Pow: return std::pow(kids[0].eval(v), kids[1].eval(v));
      case Op::Neg: return -kids[0].eval(v);
      case Op::Lt: return kids[0].eval(v) < kids[1].eval(v) ? 1.0 : 0.0;
      case Op::Le: return kids[0].eval(v) <= kids[1].eval(v) ? 1.0 : 0.0;
      case Op::Gt: return kids[0].eval(v) > kids[1].eval(v) ? 1.0 : 0.0;
      case Op::Ge: return kids[0].eval(v) >= kids[1].eval(v) ? 1.0 : 0.0;
      case Op::Exp: return std::exp(kids[0].eval(v));
      case Op::Sqrt: return std::sqrt(kids[0].eval(v));
      case Op::Sin: return std::sin(kids[0].eval(v));
      case Op::Abs: return std::abs(kids[0].eval(v));
      case Op::Min: return std::min(kids[0].eval(v), kids[1].eval(v));
      case Op::Max: return std::max(kids[0].eval(v), kids[1].eval(v));
      case Op::Piecewise: {
        size_t i = 0;
        for (; i + 1 < kids.size(); i += 2)
          if (kids[i].eval(v) > 0.5) return kids[i + 1].eval(v);
        if (i < kids.size()) return kids[i].eval(v);
        return 0.0;
      }
    }
    return 0.0;
  }
};

namespace {

using Node = Expr::Node;

}  // namespace

// The parser lives inside Expr via a friend-free static helper.
namespace {

class Parser {
public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : s_(text), vars_(vars) {}

  Node parse() {
    Node n = comparison();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

private:
  const std::string& s_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "expression error at position " << pos_ << ": " << msg << " in \"" << s_ << "\"";
    throw ExprError(os.str());
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(uint8_t(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  static Node make(Op op, std::vector<Node> kids) {
    Node n;
    n.op = op;
    n.kids = std::move(kids);
    return n;
  }

  Node comparison() {
    Node lhs = sum();
    skip_ws();
    if (pos_ < s_.size() && (s_[pos_] == '<' || s_[pos_] == '>')) {
      const char c = s_[pos_++];
      const bool eq = pos_ < s_.size() && s_[pos_] == '=';
      if (eq) ++pos_;
      const Op op = c == '<' ? (eq ? Op::Le : Op::Lt) : (eq ? Op::Ge : Op::Gt);
      return make(op, {std::move(lhs), sum()});
    }
    return lhs;
  }

  Node sum() {
    Node lhs = product();
    for (;;) {
      if (eat('+')) lhs = make(Op::Add, {std::move(lhs), product()});
      else if (eat('-')) lhs = make(Op::Sub, {std::move(lhs), product()});
      else return lhs;
    }
  }

  Node product() {
    Node lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make(Op::Mul, {std::move(lhs), unary()});
      else if (eat('/')) lhs = make(Op::Div, {std::move(lhs), unary()});
      else return lhs;
    }
  }

  Node unary() {
    if (eat('-')) return make(Op::Neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  Node power() {
    Node base = primary();
    if (eat('^')) return make(Op::Pow, {std::move(base), unary()});  // right assoc
    return base;
  }

  Node primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(uint8_t(c)) || c == '.') return number();
    if (std::isalpha(uint8_t(c)) || c == '_') return identifier();
    if (eat('(')) {
      Node n = comparison();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Node number() {
    size_t end = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &end);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += end;
    Node n;
    n.value = v;
    return n;
  }

  Node identifier() {
    const size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(uint8_t(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (peek() == '(') return call(name);
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) {
        Node n;
        n.op = Op::Var;
        n.var = int(i);
        return n;
      }
    if (name == "pi") { Node n; n.value = M_PI; return n; }
    if (name == "e") { Node n; n.value = M_E; return n; }
    fail("unknown variable '" + name + "'");
  }

  Node call(const std::string& name) {
    eat('(');
    std::vector<Node> args;
    if (peek() != ')') {
      args.push_back(comparison());
      while (eat(',')) args.push_back(comparison());
    }
    if (!eat(')')) fail("expected ')' after arguments of " + name);

    auto arity = [&](size_t k) {
      if (args.size() != k)
        fail(name + " expects " + std::to_string(k) + " argument(s), got " +
             std::to_string(args.size()));
    };
    if (name == "exp") { arity(1); return make(Op::Exp, std::move(args)); }
    if (name == "sqrt") { arity(1); return make(Op::Sqrt, std::move(args)); }
    if (name == "sin") { arity(1); return make(Op::Sin, std::move(args)); }
    if (name == "abs") { arity(1); return make(Op::Abs, std::move(args)); }
    if (name == "pow") { arity(2); return make(Op::Pow, std::move(args)); }
    if (name == "min") { arity(2); return make(Op::Min, std::move(args)); }
    if (name == "max") { arity(2); return make(Op::Max, std::move(args)); }
    if (name == "piecewise") {
      if (args.size() < 2) fail("piecewise expects at least a condition and a value");
      return make(Op::Piecewise, std::move(args));
    }
    fail("unknown function '" + name + "'");
  }
};

}  // namespace

Expr Expr::parse(const std::string& text, const std::vector<std::string>& variables) {
  Expr e;
  e.root_ = std::make_shared<const Node>(Parser(text, variables).parse());
  e.text_ = text;
  return e;
}

double Expr::eval(const double* values) const {
  if (!root_) throw ExprError("empty expression");
  return root_->eval(values);
}

}  // namespace coexist
