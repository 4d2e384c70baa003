#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noether/coeff.hpp"

namespace noether {

/// Axis 0 is time (x^0 for relativistic systems), axes 1..3 are spatial.
inline constexpr int kMaxAxes = 4;

/// Per-axis derivative counts of a jet variable; orders[0] is the time order.
using Orders = std::array<std::uint8_t, kMaxAxes>;

inline int total_order(const Orders& o) {
  int s = 0;
  for (auto v : o) s += v;
  return s;
}

inline Orders unit_orders(int axis) {
  Orders o{};
  o.at(static_cast<std::size_t>(axis)) = 1;
  return o;
}

enum class FieldKind : std::uint8_t { Real, Complex, Conjugate };

/// A dependent variable. A complex field psi and its partner psi* share the name
/// and differ in kind; real fields are their own conjugates.
struct FieldRef {
  std::string name;
  FieldKind kind = FieldKind::Real;

  auto operator<=>(const FieldRef&) const = default;

  FieldRef conj() const {
    switch (kind) {
      case FieldKind::Complex: return {name, FieldKind::Conjugate};
      case FieldKind::Conjugate: return {name, FieldKind::Complex};
      case FieldKind::Real: break;
    }
    return *this;
  }

  std::string display() const { return kind == FieldKind::Conjugate ? "conj(" + name + ")" : name; }
};

inline FieldRef real_field(std::string name) { return {std::move(name), FieldKind::Real}; }
inline FieldRef complex_field(std::string name) { return {std::move(name), FieldKind::Complex}; }

enum class SymbolKind : std::uint8_t { Jet, Coordinate, Parameter, Constant };

/// Indeterminate of the polynomial ring. Declaration order of the members fixes
/// the monomial order: jets (by field, time order, spatial multi-index), then
/// coordinates, then parameters, then constants.
struct Symbol {
  SymbolKind kind = SymbolKind::Constant;
  FieldRef field;
  Orders orders{};
  std::uint8_t axis = 0;
  std::string name;

  auto operator<=>(const Symbol&) const = default;

  static Symbol jet(FieldRef f, Orders o = {}) {
    Symbol s;
    s.kind = SymbolKind::Jet;
    s.field = std::move(f);
    s.orders = o;
    return s;
  }
  static Symbol coordinate(int axis) {
    if (axis < 0 || axis >= kMaxAxes) throw std::out_of_range("coordinate axis out of range");
    Symbol s;
    s.kind = SymbolKind::Coordinate;
    s.axis = static_cast<std::uint8_t>(axis);
    return s;
  }
  static Symbol parameter(std::string n) {
    Symbol s;
    s.kind = SymbolKind::Parameter;
    s.name = std::move(n);
    return s;
  }
  static Symbol constant(std::string n) {
    Symbol s;
    s.kind = SymbolKind::Constant;
    s.name = std::move(n);
    return s;
  }

  bool is_jet() const { return kind == SymbolKind::Jet; }
  int jet_order() const { return is_jet() ? total_order(orders) : 0; }

  Symbol derived(int ax) const {
    Symbol s = *this;
    s.orders.at(static_cast<std::size_t>(ax)) += 1;
    return s;
  }
};

/// Power product of symbols, stored sorted with nonzero exponents. Only
/// constants may carry negative exponents.
class Monomial {
public:
  using Factor = std::pair<Symbol, int>;

  Monomial() = default;
  explicit Monomial(const Symbol& s, int power = 1) {
    if (power != 0) factors_.emplace_back(s, power);
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  auto operator<=>(const Monomial&) const = default;

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
        r.factors_.push_back(*i++);
      } else if (i == a.factors_.end() || j->first < i->first) {
        r.factors_.push_back(*j++);
      } else {
        int p = i->second + j->second;
        if (p != 0) r.factors_.emplace_back(i->first, p);
        ++i;
        ++j;
      }
    }
    return r;
  }

  int power_of(const Symbol& s) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), s,
                               [](const Factor& f, const Symbol& key) { return f.first < key; });
    return (it != factors_.end() && it->first == s) ? it->second : 0;
  }

  /// Same monomial with the exponent of `s` replaced by `power`.
  Monomial with_power(const Symbol& s, int power) const {
    Monomial r;
    bool placed = false;
    for (const auto& f : factors_) {
      if (!placed && s < f.first) {
        if (power != 0) r.factors_.emplace_back(s, power);
        placed = true;
      }
      if (f.first == s) {
        if (power != 0) r.factors_.emplace_back(s, power);
        placed = true;
        continue;
      }
      r.factors_.push_back(f);
    }
    if (!placed && power != 0) r.factors_.emplace_back(s, power);
    return r;
  }

  template <class Pred>
  Monomial filter(Pred keep) const {
    Monomial r;
    for (const auto& f : factors_)
      if (keep(f.first)) r.factors_.push_back(f);
    return r;
  }

  Monomial of_kind(SymbolKind k) const {
    return filter([k](const Symbol& s) { return s.kind == k; });
  }

  int degree_of_kind(SymbolKind k) const {
    int d = 0;
    for (const auto& [s, p] : factors_)
      if (s.kind == k) d += p;
    return d;
  }

  int field_degree() const { return degree_of_kind(SymbolKind::Jet); }
  int parameter_degree() const { return degree_of_kind(SymbolKind::Parameter); }
  int coordinate_degree() const { return degree_of_kind(SymbolKind::Coordinate); }

  int max_jet_order() const {
    int m = 0;
    for (const auto& [s, p] : factors_)
      if (s.is_jet()) m = std::max(m, s.jet_order());
    return m;
  }

  /// Sum of jet orders counted with multiplicity.
  int weighted_jet_order() const {
    int m = 0;
    for (const auto& [s, p] : factors_)
      if (s.is_jet()) m += s.jet_order() * p;
    return m;
  }

private:
  std::vector<Factor> factors_;
};

/// Canonical polynomial: monomial -> exact coefficient, never storing zeros.
/// Equality of values is equality of term maps.
class Expr {
public:
  using Terms = std::map<Monomial, Coeff>;

  Expr() = default;
  Expr(long v) { add_term(Monomial{}, Coeff(v)); }  // NOLINT
  Expr(const Coeff& c) { add_term(Monomial{}, c); }  // NOLINT
  Expr(const Monomial& m, const Coeff& c) { add_term(m, c); }

  static Expr of(const Symbol& s, int power = 1) { return Expr(Monomial(s, power), Coeff(1)); }
  static Expr jet(const FieldRef& f, Orders o = {}) { return of(Symbol::jet(f, o)); }
  static Expr coordinate(int axis) { return of(Symbol::coordinate(axis)); }
  static Expr parameter(const std::string& n) { return of(Symbol::parameter(n)); }
  static Expr constant(const std::string& n, int power = 1) { return of(Symbol::constant(n), power); }
  static Expr imag() { return Expr(Coeff::imag_unit()); }
  static Expr rational(long num, long den) { return Expr(Coeff::fraction(num, den)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const Coeff& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Expr& operator+=(const Expr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Expr& operator-=(const Expr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  Expr operator-() const {
    Expr r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }

  friend Expr operator*(const Expr& a, const Expr& b) {
    Expr r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }

  Expr scaled(const Coeff& c) const {
    if (c.is_zero()) return {};
    Expr r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
  }

  Expr times(const Monomial& mono) const {
    Expr r;
    for (const auto& [m, c] : terms_) r.add_term(m * mono, c);
    return r;
  }

  Expr pow(unsigned n) const {
    Expr r(1);
    for (unsigned k = 0; k < n; ++k) r *= *this;
    return r;
  }

  friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

  /// True when every monomial satisfies the predicate.
  template <class Pred>
  bool all_monomials(Pred p) const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) { return p(t.first); });
  }

  bool is_constant_only() const {
    return all_monomials([](const Monomial& m) {
      return m.degree_of_kind(SymbolKind::Jet) == 0 && m.of_kind(SymbolKind::Coordinate).is_one() &&
             m.of_kind(SymbolKind::Parameter).is_one();
    });
  }

  int max_jet_order() const {
    int o = 0;
    for (const auto& [m, c] : terms_) o = std::max(o, m.max_jet_order());
    return o;
  }
  int max_coordinate_degree() const {
    int o = 0;
    for (const auto& [m, c] : terms_) o = std::max(o, m.coordinate_degree());
    return o;
  }
  int max_parameter_degree() const {
    int o = 0;
    for (const auto& [m, c] : terms_) o = std::max(o, m.parameter_degree());
    return o;
  }

  /// Distinct symbols of the given kind appearing anywhere in the expression.
  std::vector<Symbol> symbols(SymbolKind k) const {
    std::vector<Symbol> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [s, p] : m.factors())
        if (s.kind == k) out.push_back(s);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<FieldRef> fields() const {
    std::vector<FieldRef> out;
    for (const auto& s : symbols(SymbolKind::Jet)) out.push_back(s.field);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

private:
  Terms terms_;
};

}  // namespace noether
