#include "biform/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace biform {

struct Expression::Node {
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, IntPow, Call };
  Kind kind;
  double number = 0;
  int index = 0;  // variable index, integer exponent, or function id
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

const char* const kFunctions[] = {"sin", "cos", "exp", "log", "sqrt", "tanh", "atan"};

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("expression: " + what + " at column " + std::to_string(pos_ + 1) + " in \"" +
                std::string(s_) + "\"");
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

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+')) n = make(Kind::Add, n, term());
      else if (eat('-')) n = make(Kind::Sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Kind::Mul, n, unary());
      else if (eat('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (!eat('^')) return base;
    NodePtr ex = unary();
    if (ex->kind == Kind::Number && ex->number == std::floor(ex->number) &&
        std::abs(ex->number) <= 16) {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::IntPow;
      n->index = static_cast<int>(ex->number);
      n->a = base;
      return n;
    }
    return make(Kind::Pow, base, ex);
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0;
      const auto* begin = s_.data() + pos_;
      const auto [end, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Variable;
          n->index = static_cast<int>(i);
          return n;
        }
      for (int f = 0; f < static_cast<int>(std::size(kFunctions)); ++f)
        if (name == kFunctions[f]) {
          if (!eat('(')) fail("expected '(' after " + name);
          NodePtr arg = expr();
          if (!eat(')')) fail("expected ')'");
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Call;
          n->index = f;
          n->a = arg;
          return n;
        }
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      if (name == "pi") n->number = std::numbers::pi;
      else if (name == "e") n->number = std::numbers::e;
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      return n;
    }
    fail("unexpected character");
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

template <class T>
T call(int f, const T& x) {
  using std::atan, std::cos, std::exp, std::log, std::sin, std::sqrt, std::tanh;
  switch (f) {
    case 0: return sin(x);
    case 1: return cos(x);
    case 2: return exp(x);
    case 3: return log(x);
    case 4: return sqrt(x);
    case 5: return tanh(x);
    default: return atan(x);
  }
}

template <class T>
T evaluate(const Expression::Node& n, std::span<const T> vars) {
  using std::exp, std::log;
  switch (n.kind) {
    case Kind::Number: return T(n.number);
    case Kind::Variable: return vars[static_cast<std::size_t>(n.index)];
    case Kind::Neg: return -evaluate(*n.a, vars);
    case Kind::Add: return evaluate(*n.a, vars) + evaluate(*n.b, vars);
    case Kind::Sub: return evaluate(*n.a, vars) - evaluate(*n.b, vars);
    case Kind::Mul: return evaluate(*n.a, vars) * evaluate(*n.b, vars);
    case Kind::Div: return evaluate(*n.a, vars) / evaluate(*n.b, vars);
    case Kind::IntPow: {
      const T base = evaluate(*n.a, vars);
      T r(1.0);
      for (int k = 0; k < std::abs(n.index); ++k) r = r * base;
      return n.index < 0 ? T(1.0) / r : r;
    }
    case Kind::Pow: {
      const T base = evaluate(*n.a, vars);
      const T ex = evaluate(*n.b, vars);
      return exp(ex * log(base));
    }
    case Kind::Call: return call(n.index, evaluate(*n.a, vars));
  }
  return T(0.0);
}

}  // namespace

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Expression e;
  e.text_ = std::string(text);
  e.variables_ = std::move(variables);
  e.root_ = Parser(e.text_, e.variables_).parse();
  return e;
}

Jet Expression::eval(std::span<const Jet> vars) const {
  if (vars.size() != variables_.size()) throw ArityError("expression: wrong variable count");
  return evaluate<Jet>(*root_, vars);
}

double Expression::eval(std::span<const double> vars) const {
  if (vars.size() != variables_.size()) throw ArityError("expression: wrong variable count");
  return evaluate<double>(*root_, vars);
}

}  // namespace biform
