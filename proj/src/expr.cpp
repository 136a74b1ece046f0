#include "epinarr/expr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "epinarr/errors.hpp"
#include "epinarr/numfmt.hpp"

namespace epinarr {

ExprPtr Expr::make_number(double value) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Number;
  e->number = value;
  return e;
}

ExprPtr Expr::make_symbol(std::string name) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Symbol;
  e->symbol = std::move(name);
  return e;
}

ExprPtr Expr::make_binary(Op op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr Expr::negate(ExprPtr operand) {
  return make_binary(Op::Sub, make_number(0.0), std::move(operand));
}

bool Expr::is_negation() const {
  return op == Op::Sub && lhs && lhs->is_number() && lhs->number == 0.0;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Expr::Op::Number:
      // Bitwise-exact on purpose: equal models come from identical text.
      return a->number == b->number ||
             (std::isnan(a->number) && std::isnan(b->number));
    case Expr::Op::Symbol:
      return a->symbol == b->symbol;
    default:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

double eval_expr(const ExprPtr& expr, const Env& env) {
  switch (expr->op) {
    case Expr::Op::Number:
      return expr->number;
    case Expr::Op::Symbol: {
      auto it = env.find(expr->symbol);
      if (it == env.end()) throw UnboundSymbol(expr->symbol);
      return it->second;
    }
    default: {
      const double l = eval_expr(expr->lhs, env);
      const double r = eval_expr(expr->rhs, env);
      double v = 0.0;
      switch (expr->op) {
        case Expr::Op::Add: v = l + r; break;
        case Expr::Op::Sub: v = l - r; break;
        case Expr::Op::Mul: v = l * r; break;
        case Expr::Op::Div:
          if (r == 0.0) throw DivisionByZero();
          v = l / r;
          break;
        case Expr::Op::Pow: v = std::pow(l, r); break;
        default: break;
      }
      if (!std::isfinite(v)) throw NonFiniteResult();
      return v;
    }
  }
}

namespace {

void collect_symbols(const ExprPtr& expr, std::set<std::string>& out) {
  if (!expr) return;
  if (expr->is_symbol()) {
    out.insert(expr->symbol);
  } else if (expr->is_binary()) {
    collect_symbols(expr->lhs, out);
    collect_symbols(expr->rhs, out);
  }
}

// Operator precedence while printing. Unary minus sits between Mul and Pow,
// matching the parser ("^" binds tighter than unary "-").
int precedence(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add:
    case Expr::Op::Sub: return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div: return 2;
    case Expr::Op::Pow: return 4;
    default: return 5;  // leaves never need parentheses
  }
}

constexpr int kNegationPrec = 3;

const char* op_token(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add: return "+";
    case Expr::Op::Sub: return "-";
    case Expr::Op::Mul: return "*";
    case Expr::Op::Div: return "/";
    case Expr::Op::Pow: return "^";
    default: return "?";
  }
}

int print_prec(const Expr& e) {
  if (e.is_negation()) return kNegationPrec;
  return precedence(e.op);
}

void print_infix(const Expr& e, std::string& out) {
  if (e.is_number()) {
    out += format_double(e.number);
    return;
  }
  if (e.is_symbol()) {
    out += e.symbol;
    return;
  }
  if (e.is_negation()) {
    out.push_back('-');
    const Expr& operand = *e.rhs;
    if (print_prec(operand) < kNegationPrec) {
      out.push_back('(');
      print_infix(operand, out);
      out.push_back(')');
    } else {
      print_infix(operand, out);
    }
    return;
  }

  const int prec = precedence(e.op);
  const bool right_assoc = e.op == Expr::Op::Pow;

  // Left child: parenthesize on lower precedence; for right-associative ^
  // also on equal precedence, so (a^b)^c keeps its shape.
  const int lp = print_prec(*e.lhs);
  bool lparen = lp < prec || (right_assoc && lp == prec);
  // Right child: equal precedence needs parentheses for left-associative
  // operators (a - (b - c), a * (b * c)), not for ^.
  const int rp = print_prec(*e.rhs);
  bool rparen = rp < prec || (!right_assoc && rp == prec);

  if (lparen) out.push_back('(');
  print_infix(*e.lhs, out);
  if (lparen) out.push_back(')');
  out.push_back(' ');
  out += op_token(e.op);
  out.push_back(' ');
  if (rparen) out.push_back('(');
  print_infix(*e.rhs, out);
  if (rparen) out.push_back(')');
}

void flatten_chain(const ExprPtr& e, Expr::Op op, std::vector<ExprPtr>& out) {
  if (e->op == op) {
    flatten_chain(e->lhs, op, out);
    flatten_chain(e->rhs, op, out);
  } else {
    out.push_back(e);
  }
}

}  // namespace

std::set<std::string> free_symbols(const ExprPtr& expr) {
  std::set<std::string> out;
  collect_symbols(expr, out);
  return out;
}

std::string expr_to_infix(const ExprPtr& expr) {
  std::string out;
  print_infix(*expr, out);
  return out;
}

std::string expr_canonical_key(const ExprPtr& expr) {
  switch (expr->op) {
    case Expr::Op::Number:
      return "n:" + format_double(expr->number);
    case Expr::Op::Symbol:
      return "s:" + expr->symbol;
    case Expr::Op::Add:
    case Expr::Op::Mul: {
      std::vector<ExprPtr> operands;
      flatten_chain(expr, expr->op, operands);
      std::vector<std::string> keys;
      keys.reserve(operands.size());
      for (const auto& o : operands) keys.push_back(expr_canonical_key(o));
      std::sort(keys.begin(), keys.end());
      std::string out = expr->op == Expr::Op::Add ? "(+ " : "(* ";
      for (const auto& k : keys) {
        out += k;
        out.push_back(' ');
      }
      out.push_back(')');
      return out;
    }
    default: {
      std::string out = "(";
      out += op_token(expr->op);
      out.push_back(' ');
      out += expr_canonical_key(expr->lhs);
      out.push_back(' ');
      out += expr_canonical_key(expr->rhs);
      out.push_back(')');
      return out;
    }
  }
}

}  // namespace epinarr
