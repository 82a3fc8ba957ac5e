#include "mulcalc/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace mulcalc::cli {

namespace {

struct Dual {
  double v;
  double d;
};

Dual operator+(Dual x, Dual y) { return {x.v + y.v, x.d + y.d}; }
Dual operator-(Dual x, Dual y) { return {x.v - y.v, x.d - y.d}; }
Dual operator*(Dual x, Dual y) { return {x.v * y.v, x.d * y.v + x.v * y.d}; }
Dual operator/(Dual x, Dual y) { return {x.v / y.v, (x.d * y.v - x.v * y.d) / (y.v * y.v)}; }

Dual power(Dual x, Dual y) {
  if (y.d == 0.0) {
    // Constant exponent: valid for negative bases too.
    const double v = std::pow(x.v, y.v);
    const double d = y.v == 0.0 ? 0.0 : y.v * std::pow(x.v, y.v - 1.0) * x.d;
    return {v, d};
  }
  const double v = std::pow(x.v, y.v);
  return {v, v * (y.d * std::log(x.v) + y.v * x.d / x.v)};
}

struct Node {
  virtual ~Node() = default;
  virtual Dual eval(double t) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Constant final : Node {
  explicit Constant(double value) : value(value) {}
  Dual eval(double) const override { return {value, 0.0}; }
  double value;
};

struct Variable final : Node {
  Dual eval(double t) const override { return {t, 1.0}; }
};

struct Binary final : Node {
  Binary(char op, NodePtr lhs, NodePtr rhs) : op(op), lhs(std::move(lhs)), rhs(std::move(rhs)) {}
  Dual eval(double t) const override {
    const Dual x = lhs->eval(t);
    const Dual y = rhs->eval(t);
    switch (op) {
      case '+': return x + y;
      case '-': return x - y;
      case '*': return x * y;
      case '/': return x / y;
      default: return power(x, y);
    }
  }
  char op;
  NodePtr lhs;
  NodePtr rhs;
};

struct Call final : Node {
  Call(std::string name, NodePtr arg) : name(std::move(name)), arg(std::move(arg)) {}
  Dual eval(double t) const override {
    const Dual x = arg->eval(t);
    if (name == "exp") {
      const double v = std::exp(x.v);
      return {v, v * x.d};
    }
    if (name == "log") return {std::log(x.v), x.d / x.v};
    if (name == "sqrt") {
      const double v = std::sqrt(x.v);
      return {v, 0.5 * x.d / v};
    }
    if (name == "sin") return {std::sin(x.v), std::cos(x.v) * x.d};
    return {std::cos(x.v), -std::sin(x.v) * x.d};
  }
  std::string name;
  NodePtr arg;
};

struct Negate final : Node {
  explicit Negate(NodePtr arg) : arg(std::move(arg)) {}
  Dual eval(double t) const override {
    const Dual x = arg->eval(t);
    return {-x.v, -x.d};
  }
  NodePtr arg;
};

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
// atom   := number | 't' | 'pi' | 'e' | name '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr node = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("expression '" + std::string(text_) + "': " + what + " at position " +
                      std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr node = term();
    for (;;) {
      if (accept('+')) {
        node = std::make_shared<Binary>('+', node, term());
      } else if (accept('-')) {
        node = std::make_shared<Binary>('-', node, term());
      } else {
        return node;
      }
    }
  }

  NodePtr term() {
    NodePtr node = unary();
    for (;;) {
      if (accept('*')) {
        node = std::make_shared<Binary>('*', node, unary());
      } else if (accept('/')) {
        node = std::make_shared<Binary>('/', node, unary());
      } else {
        return node;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return std::make_shared<Negate>(unary());
    if (accept('+')) return unary();
    return power_expr();
  }

  NodePtr power_expr() {
    NodePtr base = atom();
    if (accept('^')) return std::make_shared<Binary>('^', base, unary());
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "t") return std::make_shared<Variable>();
      if (name == "pi") return std::make_shared<Constant>(std::numbers::pi);
      if (name == "e") return std::make_shared<Constant>(std::numbers::e);
      if (name == "exp" || name == "log" || name == "sqrt" || name == "sin" || name == "cos") {
        if (!accept('(')) fail("expected '(' after " + name);
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return std::make_shared<Call>(name, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected character");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    return std::make_shared<Constant>(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

DifferentiableMap parse_expression(std::string_view text) {
  NodePtr root = Parser(text).parse();
  return {[root](double t) { return root->eval(t).v; },
          [root](double t) { return root->eval(t).d; }};
}

}  // namespace mulcalc::cli
