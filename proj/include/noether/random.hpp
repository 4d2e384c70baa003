#pragma once

#include <random>
#include <string>
#include <vector>

#include "noether/calculus.hpp"
#include "noether/expr.hpp"
#include "noether/field_system.hpp"

namespace noether {

/// Seeded generator of random polynomial expressions for property checks.
class RandomExprs {
public:
  explicit RandomExprs(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Coeff coeff() {
    Coeff re = Coeff::fraction(uniform(-5, 5), uniform(1, 4));
    if (uniform(0, 2) == 0) return re + Coeff::fraction(uniform(-3, 3), uniform(1, 3)) * Coeff::imag_unit();
    return re.is_zero() ? Coeff(1) : re;
  }

  /// A system with 1..3 fields (mixed real and complex) in `dim` space dimensions.
  FieldSystem system(int dim) {
    FieldSystem s;
    s.name = "random";
    s.dim = dim;
    const int n = uniform(1, 3);
    for (int k = 0; k < n; ++k)
      s.fields.push_back({"f" + std::to_string(k), uniform(0, 1) ? FieldType::Complex : FieldType::Real});
    s.constants.declare("c");
    return s;
  }

  Symbol jet(const FieldSystem& s, int max_order) {
    auto refs = s.field_refs();
    Orders o{};
    const int order = uniform(0, max_order);
    for (int k = 0; k < order; ++k) o[static_cast<std::size_t>(uniform(0, s.dim))] += 1;
    return Symbol::jet(refs[static_cast<std::size_t>(uniform(0, static_cast<int>(refs.size()) - 1))], o);
  }

  /// Sum of up to `terms` monomials of field degree 1..max_degree.
  Expr expr(const FieldSystem& s, int max_order, int terms = 4, int max_degree = 2, bool with_coords = true) {
    Expr e;
    const int n = uniform(1, terms);
    for (int t = 0; t < n; ++t) {
      Monomial m;
      const int deg = uniform(1, max_degree);
      for (int k = 0; k < deg; ++k) m = m * Monomial(jet(s, max_order));
      if (with_coords && uniform(0, 2) == 0) m = m * Monomial(Symbol::coordinate(uniform(0, s.dim)));
      if (uniform(0, 3) == 0) m = m * Monomial(Symbol::constant("c"), uniform(-1, 2));
      e.add_term(m, coeff());
    }
    return e;
  }

  /// D_mu Lambda^mu for a random Lambda.
  Expr total_divergence(const FieldSystem& s, int max_order) {
    Expr d;
    for (int mu = 0; mu <= s.dim; ++mu) d += total_derivative(expr(s, max_order - 1), mu);
    return d;
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace noether
