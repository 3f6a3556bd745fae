#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "selfadj/ab_family.hpp"
#include "selfadj/errors.hpp"

namespace selfadj::detail {

struct TauExpr {
  enum class Op { Number, P, Neg, Add, Sub, Mul, Div, Pow, Call };
  Op op = Op::Number;
  double number = 0.0;
  std::string fn;
  std::vector<std::shared_ptr<const TauExpr>> args;
};

namespace {

using Node = std::shared_ptr<const TauExpr>;

Node make(TauExpr::Op op, std::vector<Node> args = {}) {
  auto n = std::make_shared<TauExpr>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

int arity(const std::string& fn) {
  if (fn == "atan2") return 2;
  if (fn == "atan" || fn == "sin" || fn == "cos" || fn == "tan" || fn == "tanh" || fn == "exp" || fn == "log" ||
      fn == "sqrt" || fn == "abs")
    return 1;
  return -1;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Node parse() {
    Node e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::Validation, "tau expression: " + what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (eat('+')) {
        lhs = make(TauExpr::Op::Add, {lhs, term()});
      } else if (eat('-')) {
        lhs = make(TauExpr::Op::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }
  Node term() {
    Node lhs = unary();
    for (;;) {
      if (eat('*')) {
        lhs = make(TauExpr::Op::Mul, {lhs, unary()});
      } else if (eat('/')) {
        lhs = make(TauExpr::Op::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }
  Node unary() {
    if (eat('-')) return make(TauExpr::Op::Neg, {unary()});
    if (eat('+')) return unary();
    Node base = primary();
    if (eat('^')) return make(TauExpr::Op::Pow, {base, unary()});
    return base;
  }
  Node primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const char c = s_[pos_];
    if (eat('(')) {
      Node e = expr();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(rest, &used);
      } catch (const std::exception&) {
        error("malformed number");
      }
      pos_ += used;
      auto n = std::make_shared<TauExpr>();
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
      const std::string name(s_.substr(pos_, end - pos_));
      pos_ = end;
      if (name == "p") return make(TauExpr::Op::P);
      if (name == "pi") {
        auto n = std::make_shared<TauExpr>();
        n->number = std::numbers::pi;
        return n;
      }
      const int k = arity(name);
      if (k < 0) error("unknown name '" + name + "'");
      if (!eat('(')) error("expected '(' after " + name);
      std::vector<Node> args{expr()};
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) error("expected ')'");
      if (static_cast<int>(args.size()) != k) error(name + " takes " + std::to_string(k) + " argument(s)");
      auto n = std::make_shared<TauExpr>();
      n->op = TauExpr::Op::Call;
      n->fn = name;
      n->args = std::move(args);
      return n;
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::shared_ptr<const TauExpr> compile_tau_expression(std::string_view source) { return Parser(source).parse(); }

double evaluate_tau_expression(const TauExpr& e, double p) {
  auto arg = [&](std::size_t i) { return evaluate_tau_expression(*e.args[i], p); };
  switch (e.op) {
    case TauExpr::Op::Number: return e.number;
    case TauExpr::Op::P: return p;
    case TauExpr::Op::Neg: return -arg(0);
    case TauExpr::Op::Add: return arg(0) + arg(1);
    case TauExpr::Op::Sub: return arg(0) - arg(1);
    case TauExpr::Op::Mul: return arg(0) * arg(1);
    case TauExpr::Op::Div: return arg(0) / arg(1);
    case TauExpr::Op::Pow: return std::pow(arg(0), arg(1));
    case TauExpr::Op::Call: break;
  }
  const std::string& f = e.fn;
  if (f == "atan2") return std::atan2(arg(0), arg(1));
  const double x = arg(0);
  if (f == "atan") return std::atan(x);
  if (f == "sin") return std::sin(x);
  if (f == "cos") return std::cos(x);
  if (f == "tan") return std::tan(x);
  if (f == "tanh") return std::tanh(x);
  if (f == "exp") return std::exp(x);
  if (f == "log") return std::log(x);
  if (f == "sqrt") return std::sqrt(x);
  return std::abs(x);
}

}  // namespace selfadj::detail
