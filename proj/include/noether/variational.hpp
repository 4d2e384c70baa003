#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "noether/calculus.hpp"
#include "noether/field_system.hpp"

namespace noether {

/// Euler operator of arbitrary finite order:
///   E_f(L) = sum_J (-1)^{|J|} D_J (dL / d f_J)
/// over every jet f_J of `f` that occurs in L. The order is read off the
/// expression; no normalization is applied.
inline Expr euler_expression(const Expr& lagrangian, const FieldRef& f) {
  Expr out;
  for (const auto& s : lagrangian.symbols(SymbolKind::Jet)) {
    if (s.field != f) continue;
    Expr term = total_derivative(partial(lagrangian, s), s.orders);
    if (total_order(s.orders) % 2 == 0)
      out += term;
    else
      out -= term;
  }
  return out;
}

inline Expr euler_expression(const FieldSystem& sys, const FieldRef& f) {
  if (!sys.declares(f)) throw std::invalid_argument("field " + f.display() + " is not declared in " + sys.name);
  return euler_expression(sys.lagrangian, f);
}

/// One Euler expression per declared field, in declaration order.
inline std::vector<std::pair<FieldRef, Expr>> euler_record(const FieldSystem& sys) {
  std::vector<std::pair<FieldRef, Expr>> out;
  for (const auto& f : sys.field_refs()) out.emplace_back(f, euler_expression(sys.lagrangian, f));
  return out;
}

/// Kernel-of-the-Euler-operator test: true iff every Euler expression of `e`
/// vanishes identically. Parameters and constants behave as constants.
inline bool is_total_divergence(const Expr& e) {
  for (const auto& f : e.fields())
    if (!euler_expression(e, f).is_zero()) return false;
  return true;
}

struct MismatchedSystems : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Divergence-equivalence of two Lagrangians over the same fields. When they
/// are equivalent the Euler expressions are cross-checked field by field.
inline bool lagrangians_equivalent(const FieldSystem& a, const FieldSystem& b) {
  auto fa = a.field_refs();
  auto fb = b.field_refs();
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) throw MismatchedSystems("mismatched field sets: " + a.name + " vs " + b.name);
  if (a.dim != b.dim || a.flavor != b.flavor) throw MismatchedSystems("mismatched dimension or flavor");

  bool equivalent = is_total_divergence(a.lagrangian - b.lagrangian);
  if (equivalent) {
    for (const auto& f : fa)
      if (!(euler_expression(a.lagrangian, f) == euler_expression(b.lagrangian, f)))
        throw std::logic_error("divergence-equivalent Lagrangians with different Euler expressions");
  }
  return equivalent;
}

}  // namespace noether
