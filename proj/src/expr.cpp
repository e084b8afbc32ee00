#include "curveforge/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace curveforge::expr {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Arccos, Arctan };

struct FuncName {
  const char* name;
  Func func;
};

constexpr std::array<FuncName, 9> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
    {"arccos", Func::Arccos},
    {"arctan", Func::Arctan},
}};

const char* func_name(Func f) {
  for (const auto& entry : kFunctions) {
    if (entry.func == f) return entry.name;
  }
  return "?";
}

struct Node {
  enum class Kind { Number, Pi, E, Variable, Negate, Call, Binary };

  Kind kind = Kind::Number;
  double value = 0.0;
  Func func = Func::Sin;
  char op = '+';
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->value = v;
  return n;
}

NodePtr make_leaf(Node::Kind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

NodePtr make_negate(NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Negate;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_call(Func f, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Call;
  n->func = f;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_binary(char op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

const std::vector<std::string> kAtomStart{"number", "'pi'", "'e'", "'s'", "function", "'('"};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ >= text_.size()) fail({"expression"}, "empty expression");
    NodePtr root = parse_expr();
    skip_space();
    if (pos_ < text_.size()) fail({"operator", "end of input"}, "unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
    std::string msg = "syntax error at offset " + std::to_string(pos_) + ": " + what + "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += ", ";
      msg += expected[i];
    }
    throw ParseError(pos_, std::move(expected), msg);
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

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) return lhs;
      const char c = text_[pos_];
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      lhs = make_binary(c, lhs, parse_term());
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) return lhs;
      const char c = text_[pos_];
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      lhs = make_binary(c, lhs, parse_factor());
    }
  }

  NodePtr parse_factor() {
    if (accept('-')) return make_negate(parse_power());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make_binary('^', base, parse_factor());
    return base;
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail(kAtomStart, "unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) fail({"')'"}, "unbalanced parenthesis");
      return inner;
    }
    fail(kAtomStart, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail({"digit"}, "malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      // Only an exponent if digits follow; otherwise leave 'e' for the next token.
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    const double v = std::strtod(literal.c_str(), nullptr);
    if (!std::isfinite(v)) {
      pos_ = start;
      fail({"finite number"}, "numeric literal out of range");
    }
    return make_number(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "s") return make_leaf(Node::Kind::Variable);
    if (name == "pi") return make_leaf(Node::Kind::Pi);
    if (name == "e") return make_leaf(Node::Kind::E);
    for (const auto& entry : kFunctions) {
      if (name == entry.name) {
        if (!accept('(')) fail({"'('"}, std::string("function '") + entry.name + "' needs an argument");
        NodePtr arg = parse_expr();
        if (!accept(')')) fail({"')'"}, "unbalanced parenthesis");
        return make_call(entry.func, std::move(arg));
      }
    }
    throw UnknownIdentifierError(start, std::string(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void domain_failure(const char* node, double arg, const char* why) {
  throw DomainError(node, arg,
                    std::string("domain error in ") + node + ": argument " + format_double(arg) + " " + why);
}

double checked(const char* node, double arg, double result) {
  if (!std::isfinite(result)) domain_failure(node, arg, "gives a non-finite result");
  return result;
}

double evaluate(const Node& n, double s) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.value;
    case Node::Kind::Pi:
      return std::numbers::pi;
    case Node::Kind::E:
      return std::numbers::e;
    case Node::Kind::Variable:
      return s;
    case Node::Kind::Negate:
      return -evaluate(*n.lhs, s);
    case Node::Kind::Call: {
      const double x = evaluate(*n.lhs, s);
      const char* name = func_name(n.func);
      switch (n.func) {
        case Func::Sin: return checked(name, x, std::sin(x));
        case Func::Cos: return checked(name, x, std::cos(x));
        case Func::Tan: return checked(name, x, std::tan(x));
        case Func::Exp: return checked(name, x, std::exp(x));
        case Func::Log:
          if (!(x > 0.0)) domain_failure(name, x, "is not positive");
          return std::log(x);
        case Func::Sqrt:
          if (x < 0.0) domain_failure(name, x, "is negative");
          return std::sqrt(x);
        case Func::Abs: return std::abs(x);
        case Func::Arccos:
          if (x < -1.0 || x > 1.0) domain_failure(name, x, "is outside [-1, 1]");
          return std::acos(x);
        case Func::Arctan: return std::atan(x);
      }
      return 0.0;
    }
    case Node::Kind::Binary: {
      const double a = evaluate(*n.lhs, s);
      const double b = evaluate(*n.rhs, s);
      switch (n.op) {
        case '+': return checked("+", a, a + b);
        case '-': return checked("-", a, a - b);
        case '*': return checked("*", a, a * b);
        case '/':
          if (b == 0.0) domain_failure("/", b, "is a zero divisor");
          return checked("/", a, a / b);
        case '^': {
          const double r = std::pow(a, b);
          if (std::isnan(r)) domain_failure("^", a, "cannot be raised to a non-integer power");
          return checked("^", a, r);
        }
      }
      return 0.0;
    }
  }
  return 0.0;
}

void render(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Number: out += format_double(n.value); return;
    case Node::Kind::Pi: out += "pi"; return;
    case Node::Kind::E: out += "e"; return;
    case Node::Kind::Variable: out += "s"; return;
    case Node::Kind::Negate:
      out += "(-";
      render(*n.lhs, out);
      out += ")";
      return;
    case Node::Kind::Call:
      out += func_name(n.func);
      out += "(";
      render(*n.lhs, out);
      out += ")";
      return;
    case Node::Kind::Binary:
      out += "(";
      render(*n.lhs, out);
      out += n.op;
      render(*n.rhs, out);
      out += ")";
      return;
  }
}

}  // namespace

double Expression::operator()(double s) const { return eval(*this, s); }

std::string Expression::to_string() const { return print(*this); }

Expression parse(std::string_view text) {
  Parser parser(text);
  return Expression(parser.parse_all());
}

double eval(const Expression& expr, double s) {
  if (expr.root_ == nullptr) throw DomainError("<empty>", s, "evaluation of an empty expression");
  return evaluate(*expr.root_, s);
}

std::string print(const Expression& expr) {
  std::string out;
  if (expr.root_) render(*expr.root_, out);
  return out;
}

}  // namespace curveforge::expr
