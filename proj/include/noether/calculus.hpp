#pragma once

#include <map>
#include <stdexcept>

#include "noether/expr.hpp"

namespace noether {

/// D_axis: Leibniz rule over every factor. Jets gain one order along the axis,
/// explicit coordinates differentiate to Kronecker deltas, parameters and
/// constants are inert.
inline Expr total_derivative(const Expr& e, int axis) {
  if (axis < 0 || axis >= kMaxAxes) throw std::out_of_range("total_derivative: axis out of range");
  Expr out;
  for (const auto& [mono, coeff] : e.terms()) {
    for (const auto& [sym, power] : mono.factors()) {
      if (sym.kind == SymbolKind::Jet) {
        Monomial rest = mono.with_power(sym, power - 1);
        Symbol next = sym.derived(axis);
        Monomial m = rest * Monomial(next);
        out.add_term(m, coeff * Coeff(power));
      } else if (sym.kind == SymbolKind::Coordinate && sym.axis == axis) {
        out.add_term(mono.with_power(sym, power - 1), coeff * Coeff(power));
      }
    }
  }
  return out;
}

/// D_J for a multi-index J; axes are applied time first, order-independent anyway.
inline Expr total_derivative(Expr e, const Orders& multi) {
  for (int ax = 0; ax < kMaxAxes; ++ax)
    for (int k = 0; k < multi[static_cast<std::size_t>(ax)]; ++k) e = total_derivative(e, ax);
  return e;
}

/// Formal partial derivative treating `v` as an independent indeterminate.
inline Expr partial(const Expr& e, const Symbol& v) {
  Expr out;
  for (const auto& [mono, coeff] : e.terms()) {
    int p = mono.power_of(v);
    if (p == 0) continue;
    out.add_term(mono.with_power(v, p - 1), coeff * Coeff(p));
  }
  return out;
}

inline Expr jet_partial(const Expr& e, const Symbol& jet) { return partial(e, jet); }

/// Ring involution: i -> -i and psi <-> psi* at every jet order; real symbols fixed.
inline Expr conj(const Expr& e) {
  Expr out;
  for (const auto& [mono, coeff] : e.terms()) {
    Monomial m;
    for (const auto& [sym, power] : mono.factors()) {
      Symbol s = sym;
      if (s.kind == SymbolKind::Jet) s.field = s.field.conj();
      m = m * Monomial(s, power);
    }
    out.add_term(m, coeff.conj());
  }
  return out;
}

/// Drop every monomial of parameter degree two or more.
inline Expr truncate_first_order(const Expr& e) {
  Expr out;
  for (const auto& [mono, coeff] : e.terms())
    if (mono.parameter_degree() <= 1) out.add_term(mono, coeff);
  return out;
}

using Bindings = std::map<FieldRef, Expr>;

/// Replace every jet of a bound field by the matching total derivative of its
/// binding. A binding for a complex field implies the conjugate binding unless
/// one is given explicitly.
inline Expr substitute(const Expr& e, const Bindings& bindings) {
  Bindings full = bindings;
  for (const auto& [f, b] : bindings)
    if (f.kind != FieldKind::Real && !full.contains(f.conj())) full.emplace(f.conj(), conj(b));

  std::map<Symbol, Expr> cache;
  auto image = [&](const Symbol& s) -> const Expr& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    return cache.emplace(s, total_derivative(full.at(s.field), s.orders)).first->second;
  };

  Expr out;
  for (const auto& [mono, coeff] : e.terms()) {
    Expr term(Monomial{}, coeff);
    Monomial kept;
    for (const auto& [sym, power] : mono.factors()) {
      if (sym.kind == SymbolKind::Jet && full.contains(sym.field)) {
        term *= image(sym).pow(static_cast<unsigned>(power));
      } else {
        kept = kept * Monomial(sym, power);
      }
    }
    out += term.times(kept);
  }
  return out;
}

}  // namespace noether
