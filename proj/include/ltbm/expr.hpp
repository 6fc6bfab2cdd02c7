#pragma once

// Scalar expressions of chart coordinates x0..x{n-1}, used for metric
// components and weights in run configurations.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltbm {

enum class UnaryOp : std::uint8_t { Neg, Sin, Cos, Sinh, Cosh, Exp, Log, Sqrt, Abs };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

std::string_view unary_name(UnaryOp op);
char binary_symbol(BinaryOp op);

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind : std::uint8_t { Constant, Coordinate, Unary, Binary };

  Kind kind = Kind::Constant;
  double value = 0.0;       // Constant
  int coordinate = 0;       // Coordinate
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
  ExprNodePtr lhs;          // operand of unary, left of binary
  ExprNodePtr rhs;
};

/// Immutable expression tree with a flattened evaluation program.
///
/// Evaluation is pure; a single Expr may be evaluated from several threads.
/// Domain violations (division by zero, log or sqrt outside their domain,
/// non-finite results) raise ErrorCode::Domain instead of producing NaN.
class Expr {
 public:
  Expr();  // constant 0
  explicit Expr(ExprNodePtr root);

  static Expr constant(double v);
  static Expr coordinate(int index);
  static Expr unary(UnaryOp op, const Expr& a);
  static Expr binary(BinaryOp op, const Expr& a, const Expr& b);

  const ExprNodePtr& root() const { return root_; }

  double eval(std::span<const double> point) const;

  /// Largest coordinate index referenced, or -1 for none.
  int max_coordinate() const { return max_coord_; }
  bool is_constant() const { return max_coord_ < 0; }
  bool is_zero() const;

  /// Fully parenthesized text that parses back to the same tree.
  std::string print() const;

  bool structurally_equal(const Expr& other) const;

 private:
  struct Instr {
    ExprNode::Kind kind;
    std::uint8_t op;
    int coordinate;
    double value;
  };

  void compile();

  ExprNodePtr root_;
  std::vector<Instr> program_;
  int max_coord_ = -1;
  int stack_depth_ = 0;
};

/// Parses infix text. Coordinates are named x0..x{dim-1}; `pi` is the only
/// named constant. Precedence: ^ (right-assoc) > unary minus > * / > + -.
Expr parse_expr(std::string_view source, int dim);

}  // namespace ltbm
