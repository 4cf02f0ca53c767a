#include "parastep/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

#include "parastep/errors.hpp"

namespace parastep {

namespace {

constexpr std::size_t kMaxStack = 256;

using NodePtr = std::shared_ptr<const Expr::Node>;

int arity(Expr::Op op) {
  switch (op) {
    case Expr::Op::Const:
    case Expr::Op::Var:
    case Expr::Op::Pi:
      return 0;
    case Expr::Op::Neg:
    case Expr::Op::Abs:
    case Expr::Op::Log:
    case Expr::Op::Exp:
      return 1;
    default:
      return 2;
  }
}

NodePtr make_node(Expr::Op op, double value, std::vector<NodePtr> args) {
  return std::make_shared<const Expr::Node>(Expr::Node{op, value, std::move(args)});
}

bool equal_nodes(const Expr::Node& a, const Expr::Node& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  if (a.op == Expr::Op::Const && a.value != b.value) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!equal_nodes(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

// Binding strength used by the printer; mirrors the grammar levels.
int precedence(const Expr::Node& n) {
  switch (n.op) {
    case Expr::Op::Add:
    case Expr::Op::Sub:
      return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div:
      return 2;
    case Expr::Op::Neg:
      return 3;
    case Expr::Op::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const Expr::Node& n, std::string& out);

void print_child(const Expr::Node& n, int min_prec, std::string& out) {
  if (precedence(n) < min_prec) {
    out += '(';
    print_node(n, out);
    out += ')';
  } else {
    print_node(n, out);
  }
}

void print_node(const Expr::Node& n, std::string& out) {
  switch (n.op) {
    case Expr::Op::Const: {
      std::array<char, 64> buf{};
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
      out.append(buf.data(), res.ptr);
      return;
    }
    case Expr::Op::Var:
      out += 't';
      return;
    case Expr::Op::Pi:
      out += "pi";
      return;
    case Expr::Op::Add:
    case Expr::Op::Sub:
    case Expr::Op::Mul:
    case Expr::Op::Div: {
      const int p = precedence(n);
      print_child(*n.args[0], p, out);
      out += n.op == Expr::Op::Add ? '+' : n.op == Expr::Op::Sub ? '-' : n.op == Expr::Op::Mul ? '*' : '/';
      print_child(*n.args[1], p + 1, out);
      return;
    }
    case Expr::Op::Pow:
      print_child(*n.args[0], 5, out);
      out += '^';
      print_child(*n.args[1], 3, out);
      return;
    case Expr::Op::Neg:
      out += '-';
      print_child(*n.args[0], 3, out);
      return;
    case Expr::Op::Abs:
    case Expr::Op::Log:
    case Expr::Op::Exp:
      out += n.op == Expr::Op::Abs ? "abs(" : n.op == Expr::Op::Log ? "log(" : "exp(";
      print_node(*n.args[0], out);
      out += ')';
      return;
  }
}

NodePtr reflect_node(const NodePtr& n) {
  if (n->op == Expr::Op::Neg && n->args[0]->op == Expr::Op::Var) return n->args[0];
  if (n->op == Expr::Op::Var) {
    return make_node(Expr::Op::Neg, 0.0, {n});
  }
  if (n->args.empty()) return n;
  std::vector<NodePtr> args;
  args.reserve(n->args.size());
  for (const auto& a : n->args) args.push_back(reflect_node(a));
  return make_node(n->op, n->value, std::move(args));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    NodePtr e = expression(0);
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void check_depth(int depth) const {
    if (depth > 200) fail("expression nested too deeply");
  }

  NodePtr expression(int depth) {
    check_depth(depth);
    NodePtr lhs = term(depth + 1);
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      NodePtr rhs = term(depth + 1);
      lhs = make_node(c == '+' ? Expr::Op::Add : Expr::Op::Sub, 0.0, {lhs, rhs});
    }
    return lhs;
  }

  NodePtr term(int depth) {
    NodePtr lhs = unary(depth + 1);
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      NodePtr rhs = unary(depth + 1);
      lhs = make_node(c == '*' ? Expr::Op::Mul : Expr::Op::Div, 0.0, {lhs, rhs});
    }
    return lhs;
  }

  NodePtr unary(int depth) {
    check_depth(depth);
    if (peek() == '-') {
      ++pos_;
      return make_node(Expr::Op::Neg, 0.0, {unary(depth + 1)});
    }
    return power(depth + 1);
  }

  NodePtr power(int depth) {
    NodePtr base = primary(depth + 1);
    if (peek() == '^') {
      ++pos_;
      NodePtr exponent = unary(depth + 1);
      return make_node(Expr::Op::Pow, 0.0, {base, exponent});
    }
    return base;
  }

  NodePtr primary(int depth) {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expression(depth + 1);
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "t") return make_node(Expr::Op::Var, 0.0, {});
      if (name == "pi") return make_node(Expr::Op::Pi, 0.0, {});
      Expr::Op op;
      if (name == "abs") {
        op = Expr::Op::Abs;
      } else if (name == "log") {
        op = Expr::Op::Log;
      } else if (name == "exp") {
        op = Expr::Op::Exp;
      } else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      expect('(');
      NodePtr arg = expression(depth + 1);
      expect(')');
      return make_node(op, 0.0, {arg});
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail("malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = mark;
        fail("malformed exponent");
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
      pos_ = start;
      fail("number out of range");
    }
    return make_node(Expr::Op::Const, value, {});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : Expr(make_node(Op::Const, 0.0, {})) {}

Expr::Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {
  std::size_t depth = 0;
  std::size_t max_depth = 0;
  auto emit = [&](auto&& self, const Node& n) -> void {
    for (const auto& a : n.args) self(self, *a);
    if (n.op == Op::Var) uses_variable_ = true;
    const int k = arity(n.op);
    depth = depth + 1 - static_cast<std::size_t>(k);
    max_depth = std::max(max_depth, depth);
    program_.push_back({n.op, n.op == Op::Pi ? std::numbers::pi : n.value});
  };
  emit(emit, *root_);
  if (max_depth > kMaxStack) throw DomainError("expression too deep to evaluate");
}

Expr Expr::constant(double c) {
  if (!std::isfinite(c)) throw DomainError("non-finite constant in expression");
  if (c < 0.0 || (c == 0.0 && std::signbit(c))) {
    return Expr(make_node(Op::Neg, 0.0, {make_node(Op::Const, -c, {})}));
  }
  return Expr(make_node(Op::Const, c, {}));
}

Expr Expr::variable() { return Expr(make_node(Op::Var, 0.0, {})); }

Expr Expr::pi() { return Expr(make_node(Op::Pi, 0.0, {})); }

Expr Expr::unary(Op op, const Expr& a) {
  if (arity(op) != 1) throw DomainError("Expr::unary: operator is not unary");
  return Expr(make_node(op, 0.0, {a.root_}));
}

Expr Expr::binary(Op op, const Expr& a, const Expr& b) {
  if (arity(op) != 2) throw DomainError("Expr::binary: operator is not binary");
  return Expr(make_node(op, 0.0, {a.root_, b.root_}));
}

double Expr::operator()(double t) const {
  std::array<double, kMaxStack> stack;
  std::size_t top = 0;
  for (const Instr& in : program_) {
    double r;
    switch (in.op) {
      case Op::Const:
      case Op::Pi:
        stack[top++] = in.value;
        continue;
      case Op::Var:
        stack[top++] = t;
        continue;
      case Op::Neg:
        stack[top - 1] = -stack[top - 1];
        continue;
      case Op::Abs:
        stack[top - 1] = std::abs(stack[top - 1]);
        continue;
      case Op::Log:
        if (!(stack[top - 1] > 0.0)) throw EvalError("log of a non-positive number");
        r = std::log(stack[top - 1]);
        stack[top - 1] = r;
        continue;
      case Op::Exp:
        r = std::exp(stack[top - 1]);
        if (!std::isfinite(r)) throw EvalError("non-finite result in exp");
        stack[top - 1] = r;
        continue;
      case Op::Add:
        r = stack[top - 2] + stack[top - 1];
        break;
      case Op::Sub:
        r = stack[top - 2] - stack[top - 1];
        break;
      case Op::Mul:
        r = stack[top - 2] * stack[top - 1];
        break;
      case Op::Div:
        if (stack[top - 1] == 0.0) throw EvalError("division by zero");
        r = stack[top - 2] / stack[top - 1];
        break;
      case Op::Pow:
        r = std::pow(stack[top - 2], stack[top - 1]);
        break;
    }
    if (!std::isfinite(r)) throw EvalError("non-finite intermediate result");
    --top;
    stack[top - 1] = r;
  }
  return stack[0];
}

Expr Expr::operand(std::size_t i) const {
  if (i >= root_->args.size()) throw DomainError("Expr::operand: index out of range");
  return Expr(root_->args[i]);
}

Expr Expr::reflected() const { return Expr(reflect_node(root_)); }

std::string Expr::str() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  return a.root_ == b.root_ || equal_nodes(*a.root_, *b.root_);
}

Expr parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

double parse_constant(std::string_view text) {
  const Expr e = parse(text);
  if (e.uses_variable()) throw SyntaxError("constant expression must not use 't'", 0);
  return e(0.0);
}

}  // namespace parastep
