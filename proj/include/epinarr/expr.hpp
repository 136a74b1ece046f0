#ifndef EPINARR_EXPR_HPP
#define EPINARR_EXPR_HPP

#include <memory>
#include <set>
#include <string>
#include <unordered_map>

namespace epinarr {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
using Env = std::unordered_map<std::string, double>;

/// Immutable arithmetic expression tree. Shared freely; never mutated after
/// construction. Unary negation is represented as Sub(0, x).
struct Expr {
  enum class Op { Number, Symbol, Add, Sub, Mul, Div, Pow };

  Op op = Op::Number;
  double number = 0.0;   // Op::Number only
  std::string symbol;    // Op::Symbol only
  ExprPtr lhs, rhs;      // binary ops only

  static ExprPtr make_number(double value);
  static ExprPtr make_symbol(std::string name);
  static ExprPtr make_binary(Op op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr negate(ExprPtr operand);  // Sub(0, operand)

  bool is_number() const { return op == Op::Number; }
  bool is_symbol() const { return op == Op::Symbol; }
  bool is_binary() const { return !is_number() && !is_symbol(); }
  /// True for Sub(0, x), the canonical unary-minus encoding.
  bool is_negation() const;
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Arithmetic evaluation with symbols looked up in env.
/// Throws UnboundSymbol, DivisionByZero, NonFiniteResult.
double eval_expr(const ExprPtr& expr, const Env& env);

/// Every Symbol name appearing in the tree.
std::set<std::string> free_symbols(const ExprPtr& expr);

/// Canonical infix with single spaces around operators and the minimal
/// parentheses needed to reparse to the identical tree.
std::string expr_to_infix(const ExprPtr& expr);

/// Order-insensitive structural key: associative +/* chains are flattened
/// and their operands sorted, so a*b and b*a compare equal. Used by the
/// model differ, nowhere else.
std::string expr_canonical_key(const ExprPtr& expr);

}  // namespace epinarr

#endif
