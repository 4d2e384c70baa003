#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "noether/expr.hpp"

namespace noether {

/// Error raised when a raw tree divides by something that is not a constant
/// monomial (rationals, i, and named constants are the only admissible divisors).
struct NonConstantDivision : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raw, uncanonicalized arithmetic over canonical atoms.
class Tree {
public:
  enum class Op { Leaf, Add, Sub, Mul, Div, Neg, Pow };

  static Tree leaf(Expr e) { return Tree(Op::Leaf, std::move(e), {}, 0); }
  static Tree add(Tree a, Tree b) { return binary(Op::Add, std::move(a), std::move(b)); }
  static Tree sub(Tree a, Tree b) { return binary(Op::Sub, std::move(a), std::move(b)); }
  static Tree mul(Tree a, Tree b) { return binary(Op::Mul, std::move(a), std::move(b)); }
  static Tree div(Tree a, Tree b) { return binary(Op::Div, std::move(a), std::move(b)); }
  static Tree neg(Tree a) { return Tree(Op::Neg, {}, {std::move(a)}, 0); }
  static Tree pow(Tree a, int n) { return Tree(Op::Pow, {}, {std::move(a)}, n); }

  Op op() const { return op_; }
  const Expr& value() const { return leaf_; }
  const std::vector<Tree>& children() const { return children_; }
  int exponent() const { return exponent_; }

private:
  Tree(Op op, Expr leaf, std::vector<Tree> children, int exponent)
      : op_(op), leaf_(std::move(leaf)), children_(std::move(children)), exponent_(exponent) {}
  static Tree binary(Op op, Tree a, Tree b) {
    std::vector<Tree> c;
    c.reserve(2);
    c.push_back(std::move(a));
    c.push_back(std::move(b));
    return Tree(op, {}, std::move(c), 0);
  }

  Op op_;
  Expr leaf_;
  std::vector<Tree> children_;
  int exponent_;
};

/// Inverse of a single-term expression whose monomial holds constants only.
inline Expr invert_constant(const Expr& d) {
  if (d.size() != 1) throw NonConstantDivision("division by a non-monomial expression");
  const auto& [mono, coeff] = *d.terms().begin();
  Monomial inv;
  for (const auto& [sym, power] : mono.factors()) {
    if (sym.kind != SymbolKind::Constant) throw NonConstantDivision("division by a non-constant expression");
    inv = inv * Monomial(sym, -power);
  }
  return Expr(inv, coeff.inverse());
}

inline Expr pow_expr(const Expr& base, int n) {
  if (n >= 0) return base.pow(static_cast<unsigned>(n));
  return invert_constant(base).pow(static_cast<unsigned>(-n));
}

inline Expr canonicalize(const Tree& t) {
  switch (t.op()) {
    case Tree::Op::Leaf: return t.value();
    case Tree::Op::Add: return canonicalize(t.children()[0]) + canonicalize(t.children()[1]);
    case Tree::Op::Sub: return canonicalize(t.children()[0]) - canonicalize(t.children()[1]);
    case Tree::Op::Mul: return canonicalize(t.children()[0]) * canonicalize(t.children()[1]);
    case Tree::Op::Div: {
      Expr den = canonicalize(t.children()[1]);
      if (den.is_zero()) throw NonConstantDivision("division by zero");
      return canonicalize(t.children()[0]) * invert_constant(den);
    }
    case Tree::Op::Neg: return -canonicalize(t.children()[0]);
    case Tree::Op::Pow: return pow_expr(canonicalize(t.children()[0]), t.exponent());
  }
  return {};
}

}  // namespace noether
