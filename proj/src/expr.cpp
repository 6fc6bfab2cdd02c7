#include "ltbm/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ltbm/errors.hpp"

namespace ltbm {

namespace {

constexpr std::array<std::pair<std::string_view, UnaryOp>, 8> kFunctions{{
    {"sin", UnaryOp::Sin},
    {"cos", UnaryOp::Cos},
    {"sinh", UnaryOp::Sinh},
    {"cosh", UnaryOp::Cosh},
    {"exp", UnaryOp::Exp},
    {"log", UnaryOp::Log},
    {"sqrt", UnaryOp::Sqrt},
    {"abs", UnaryOp::Abs},
}};

[[noreturn]] void domain_error(const char* what, double arg) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s (argument %.17g)", what, arg);
  fail(ErrorCode::Domain, buf);
}

double apply_unary(UnaryOp op, double a) {
  switch (op) {
    case UnaryOp::Neg: return -a;
    case UnaryOp::Sin: return std::sin(a);
    case UnaryOp::Cos: return std::cos(a);
    case UnaryOp::Sinh: return std::sinh(a);
    case UnaryOp::Cosh: return std::cosh(a);
    case UnaryOp::Exp: return std::exp(a);
    case UnaryOp::Log:
      if (!(a > 0.0)) domain_error("log of non-positive value", a);
      return std::log(a);
    case UnaryOp::Sqrt:
      if (a < 0.0) domain_error("sqrt of negative value", a);
      return std::sqrt(a);
    case UnaryOp::Abs: return std::abs(a);
  }
  return 0.0;
}

double apply_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div:
      if (b == 0.0) domain_error("division by zero", a);
      return a / b;
    case BinaryOp::Pow: return std::pow(a, b);
  }
  return 0.0;
}

void print_node(const ExprNode& node, std::string& out) {
  switch (node.kind) {
    case ExprNode::Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", node.value);
      if (node.value < 0.0) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case ExprNode::Kind::Coordinate:
      out += 'x';
      out += std::to_string(node.coordinate);
      return;
    case ExprNode::Kind::Unary:
      if (node.unary == UnaryOp::Neg) {
        out += "(-";
        print_node(*node.lhs, out);
        out += ')';
      } else {
        out += unary_name(node.unary);
        out += '(';
        print_node(*node.lhs, out);
        out += ')';
      }
      return;
    case ExprNode::Kind::Binary:
      out += '(';
      print_node(*node.lhs, out);
      out += ' ';
      out += binary_symbol(node.binary);
      out += ' ';
      print_node(*node.rhs, out);
      out += ')';
      return;
  }
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Constant: return a.value == b.value;
    case ExprNode::Kind::Coordinate: return a.coordinate == b.coordinate;
    case ExprNode::Kind::Unary: return a.unary == b.unary && nodes_equal(*a.lhs, *b.lhs);
    case ExprNode::Kind::Binary:
      return a.binary == b.binary && nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
  }
  return false;
}

ExprNodePtr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Constant;
  n->value = v;
  return n;
}

ExprNodePtr make_coordinate(int i) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Coordinate;
  n->coordinate = i;
  return n;
}

ExprNodePtr make_unary(UnaryOp op, ExprNodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Unary;
  n->unary = op;
  n->lhs = std::move(a);
  return n;
}

ExprNodePtr make_binary(BinaryOp op, ExprNodePtr a, ExprNodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->binary = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

// Recursive descent with one function per precedence level.
class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  ExprNodePtr parse() {
    auto e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprNodePtr parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_unary() {
    if (accept('-')) return make_unary(UnaryOp::Neg, parse_unary());
    return parse_power();
  }

  ExprNodePtr parse_power() {
    auto base = parse_primary();
    if (accept('^')) return make_binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  ExprNodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_sum();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprNodePtr parse_number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (ec != std::errc()) throw SyntaxError("malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return make_constant(v);
  }

  ExprNodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name == "pi") return make_constant(std::numbers::pi);

    for (const auto& [fname, op] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) throw SyntaxError("expected '(' after function name", pos_);
        auto arg = parse_sum();
        if (!accept(')')) throw SyntaxError("expected ')'", pos_);
        return make_unary(op, arg);
      }
    }

    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      int index = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (index < dim_) return make_coordinate(index);
    }
    fail(ErrorCode::UnknownSymbol,
         "unknown symbol '" + std::string(name) + "' at offset " + std::to_string(start));
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "neg";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Abs: return "abs";
  }
  return "?";
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

Expr::Expr() : Expr(make_constant(0.0)) {}

Expr::Expr(ExprNodePtr root) : root_(std::move(root)) { compile(); }

Expr Expr::constant(double v) { return Expr(make_constant(v)); }
Expr Expr::coordinate(int index) { return Expr(make_coordinate(index)); }
Expr Expr::unary(UnaryOp op, const Expr& a) { return Expr(make_unary(op, a.root_)); }
Expr Expr::binary(BinaryOp op, const Expr& a, const Expr& b) {
  return Expr(make_binary(op, a.root_, b.root_));
}

bool Expr::is_zero() const {
  return root_->kind == ExprNode::Kind::Constant && root_->value == 0.0;
}

void Expr::compile() {
  program_.clear();
  max_coord_ = -1;
  int depth = 0;
  int max_depth = 0;
  // Post-order walk; operand order matches the recursive definition.
  auto emit = [&](auto&& self, const ExprNode& node) -> void {
    switch (node.kind) {
      case ExprNode::Kind::Constant:
        program_.push_back({node.kind, 0, 0, node.value});
        max_depth = std::max(max_depth, ++depth);
        break;
      case ExprNode::Kind::Coordinate:
        program_.push_back({node.kind, 0, node.coordinate, 0.0});
        max_coord_ = std::max(max_coord_, node.coordinate);
        max_depth = std::max(max_depth, ++depth);
        break;
      case ExprNode::Kind::Unary:
        self(self, *node.lhs);
        program_.push_back({node.kind, static_cast<std::uint8_t>(node.unary), 0, 0.0});
        break;
      case ExprNode::Kind::Binary:
        self(self, *node.lhs);
        self(self, *node.rhs);
        program_.push_back({node.kind, static_cast<std::uint8_t>(node.binary), 0, 0.0});
        --depth;
        break;
    }
  };
  emit(emit, *root_);
  stack_depth_ = max_depth;
}

double Expr::eval(std::span<const double> point) const {
  if (max_coord_ >= static_cast<int>(point.size()))
    fail(ErrorCode::InvalidArgument, "point has fewer coordinates than the expression uses");

  constexpr int kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap_stack;
  double* stack = inline_stack;
  if (stack_depth_ > kInline) {
    heap_stack.resize(static_cast<std::size_t>(stack_depth_));
    stack = heap_stack.data();
  }

  int sp = 0;
  for (const Instr& in : program_) {
    switch (in.kind) {
      case ExprNode::Kind::Constant: stack[sp++] = in.value; break;
      case ExprNode::Kind::Coordinate:
        stack[sp++] = point[static_cast<std::size_t>(in.coordinate)];
        break;
      case ExprNode::Kind::Unary:
        stack[sp - 1] = apply_unary(static_cast<UnaryOp>(in.op), stack[sp - 1]);
        break;
      case ExprNode::Kind::Binary:
        stack[sp - 2] = apply_binary(static_cast<BinaryOp>(in.op), stack[sp - 2], stack[sp - 1]);
        --sp;
        break;
    }
  }
  const double result = stack[0];
  if (!std::isfinite(result)) domain_error("non-finite expression value", result);
  return result;
}

std::string Expr::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::structurally_equal(const Expr& other) const {
  return nodes_equal(*root_, *other.root_);
}

Expr parse_expr(std::string_view source, int dim) { return Expr(Parser(source, dim).parse()); }

}  // namespace ltbm
