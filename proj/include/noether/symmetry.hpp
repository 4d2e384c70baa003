#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "noether/calculus.hpp"
#include "noether/field_system.hpp"
#include "noether/linear.hpp"
#include "noether/variational.hpp"

namespace noether {

/// Infinitesimal internal transformation psi_k -> psi_k + delta psi_k, linear in
/// the real parameters. Fields without an entry are left unchanged. When
/// `paired` is false, psi and psi* are varied independently (a variation of
/// psi* alone is then allowed).
struct Transformation {
  std::string name;
  std::vector<std::string> parameters;
  std::map<FieldRef, Expr> variations;
  bool paired = true;

  bool operator==(const Transformation&) const = default;

  Expr variation(const FieldRef& f) const {
    auto it = variations.find(f);
    if (it != variations.end()) return it->second;
    if (paired && f.kind != FieldKind::Real) {
      auto partner = variations.find(f.conj());
      if (partner != variations.end()) return conj(partner->second);
    }
    return {};
  }

  /// d(delta f)/d(eps_a)
  Expr generator(const FieldRef& f, const std::string& param) const {
    return partial(variation(f), Symbol::parameter(param));
  }

  /// Fills in missing conjugate entries so that delta psi* = conj(delta psi).
  Transformation completed() const {
    Transformation t = *this;
    if (!paired) return t;
    for (const auto& [f, v] : variations)
      if (f.kind != FieldKind::Real && !t.variations.contains(f.conj())) t.variations.emplace(f.conj(), conj(v));
    return t;
  }

  void validate(const FieldSystem& sys) const {
    std::set<std::string> declared(parameters.begin(), parameters.end());
    if (declared.size() != parameters.size()) throw std::invalid_argument("duplicate parameter in " + name);
    for (const auto& [f, v] : variations) {
      if (!sys.declares(f)) throw std::invalid_argument("variation of undeclared field " + f.display());
      for (const auto& [mono, c] : v.terms()) {
        if (mono.parameter_degree() != 1) throw std::invalid_argument("variation of " + f.display() + " is not linear in the parameters");
        for (const auto& [s, p] : mono.factors())
          if (s.kind == SymbolKind::Parameter && !declared.contains(s.name))
            throw std::invalid_argument("undeclared parameter " + s.name);
      }
      if (paired && f.kind != FieldKind::Real) {
        auto partner = variations.find(f.conj());
        if (partner != variations.end() && !(partner->second == conj(v)))
          throw std::invalid_argument("conjugate-pair inconsistency for " + f.name);
      }
    }
  }
};

/// Lambda^mu for mu = 0..dim (component 0 is Lambda^0).
struct DivergenceWitness {
  std::vector<Expr> components;

  bool operator==(const DivergenceWitness&) const = default;

  bool is_zero() const {
    return std::all_of(components.begin(), components.end(), [](const Expr& e) { return e.is_zero(); });
  }
  static DivergenceWitness zero(int axes) { return {std::vector<Expr>(static_cast<std::size_t>(axes))}; }
};

struct Strict {};
struct Quasi {
  DivergenceWitness witness;
};
struct NonNoetherian {
  Expr residual;
};
using Classification = std::variant<Strict, Quasi, NonNoetherian>;

inline std::string tag_name(const Classification& c) {
  if (std::holds_alternative<Strict>(c)) return "Strict";
  if (std::holds_alternative<Quasi>(c)) return "Quasi";
  return "NonNoetherian";
}

struct AnsatzExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// delta L = L(psi + delta psi) - L(psi), truncated to first order in the parameters.
inline Expr first_variation(const FieldSystem& sys, const Transformation& t) {
  Bindings shifted;
  for (const auto& [f, v] : t.completed().variations) {
    if (!sys.declares(f)) throw std::invalid_argument("variation of undeclared field " + f.display());
    shifted.emplace(f, Expr::jet(f) + v);
  }
  if (!t.paired)
    for (const auto& f : sys.field_refs())
      if (f.kind != FieldKind::Real && !shifted.contains(f)) shifted.emplace(f, Expr::jet(f));
  return truncate_first_order(substitute(sys.lagrangian, shifted) - sys.lagrangian);
}

/// deltaL - D_mu Lambda^mu; zero certifies quasi-invariance.
inline Expr verify_witness(const Expr& delta_l, const DivergenceWitness& w) {
  Expr r = delta_l;
  for (std::size_t mu = 0; mu < w.components.size(); ++mu) r -= total_derivative(w.components[mu], static_cast<int>(mu));
  return r;
}

namespace detail {

// All jets of the system's fields with total order <= max_order on the first `axes` axes.
inline std::vector<Symbol> jets_up_to(const FieldSystem& sys, int axes, int max_order) {
  std::vector<Orders> indices{Orders{}};
  for (int o = 1; o <= max_order; ++o) {
    std::vector<Orders> next;
    for (const auto& idx : indices) {
      if (total_order(idx) != o - 1) continue;
      // extend only along axes >= the last used one to enumerate multisets once
      int start = 0;
      for (int ax = 0; ax < axes; ++ax)
        if (idx[static_cast<std::size_t>(ax)] > 0) start = ax;
      for (int ax = start; ax < axes; ++ax) {
        Orders n = idx;
        n[static_cast<std::size_t>(ax)] += 1;
        next.push_back(n);
      }
    }
    indices.insert(indices.end(), next.begin(), next.end());
  }
  std::vector<Symbol> out;
  for (const auto& f : sys.field_refs())
    for (const auto& idx : indices) out.push_back(Symbol::jet(f, idx));
  std::sort(out.begin(), out.end());
  return out;
}

// Monomials in the given symbols of exactly the given degree.
inline std::vector<Monomial> monomials_of_degree(const std::vector<Symbol>& syms, int degree) {
  std::vector<Monomial> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from, int left, Monomial acc) -> void {
    if (left == 0) {
      out.push_back(std::move(acc));
      return;
    }
    for (std::size_t i = from; i < syms.size(); ++i) self(self, i, left - 1, acc * Monomial(syms[i]));
  };
  rec(rec, 0, degree, Monomial{});
  return out;
}

}  // namespace detail

/// Searches a bounded polynomial ansatz for Lambda with
/// deltaL = D_t Lambda^0 + sum_i D_i Lambda^i. Returns nullopt when deltaL is
/// not a total divergence. Columns are visited by (coordinate degree, jet
/// order, component, monomial); the first representation found uses the
/// earliest independent columns, which fixes the gauge deterministically.
inline std::optional<DivergenceWitness> find_witness(const FieldSystem& sys, const Expr& delta_l) {
  const int axes = sys.axis_count();
  if (!is_total_divergence(delta_l)) return std::nullopt;
  DivergenceWitness witness = DivergenceWitness::zero(axes);
  if (delta_l.is_zero()) return witness;

  // D_mu never touches parameters or constants: solve per (parameter, constant) tag.
  std::map<Monomial, Expr> groups;
  for (const auto& [mono, c] : delta_l.terms()) {
    Monomial tag = mono.filter([](const Symbol& s) {
      return s.kind == SymbolKind::Parameter || s.kind == SymbolKind::Constant;
    });
    Monomial body = mono.filter([](const Symbol& s) {
      return s.kind == SymbolKind::Jet || s.kind == SymbolKind::Coordinate;
    });
    groups[tag].add_term(body, c);
  }

  const int max_order = delta_l.max_jet_order();
  std::vector<Symbol> coords;
  for (int ax = 0; ax < axes; ++ax) coords.push_back(Symbol::coordinate(ax));

  for (const auto& [tag, target] : groups) {
    std::set<int> degrees;
    for (const auto& [m, c] : target.terms()) degrees.insert(m.field_degree());
    const int max_cdeg = target.max_coordinate_degree() + 1;
    const auto jets = detail::jets_up_to(sys, axes, max_order);

    using Basis = EchelonBasis<Monomial, Coeff>;
    Basis basis;
    Basis::Vector rhs(target.terms().begin(), target.terms().end());
    std::vector<std::pair<int, Monomial>> columns;
    std::optional<Basis::Reduction> solved;

    for (int cdeg = 0; cdeg <= max_cdeg && !solved; ++cdeg) {
      auto cmonos = detail::monomials_of_degree(coords, cdeg);
      for (int order = 0; order <= max_order && !solved; ++order) {
        std::vector<Monomial> level;
        for (int fdeg : degrees) {
          for (const auto& jm : detail::monomials_of_degree(jets, fdeg)) {
            if (jm.max_jet_order() != order) continue;
            for (const auto& cm : cmonos) level.push_back(jm * cm);
          }
        }
        std::sort(level.begin(), level.end());
        for (int mu = 0; mu < axes; ++mu) {
          for (const auto& m : level) {
            Expr img = total_derivative(Expr(m, Coeff(1)), mu);
            columns.emplace_back(mu, m);
            basis.insert(Basis::Vector(img.terms().begin(), img.terms().end()), columns.size() - 1);
          }
        }
        auto red = basis.reduce(rhs);
        if (red.remainder.empty()) solved = std::move(red);
      }
    }
    if (!solved) throw AnsatzExhausted("divergence witness not found within the bounded ansatz");
    for (const auto& [col, c] : solved->combination) {
      const auto& [mu, m] = columns[col];
      witness.components[static_cast<std::size_t>(mu)].add_term(m * tag, c);
    }
  }

  if (!verify_witness(delta_l, witness).is_zero()) throw std::logic_error("witness search produced an unsound witness");
  return witness;
}

inline Classification classify(const FieldSystem& sys, const Transformation& t) {
  t.validate(sys);
  Expr dl = first_variation(sys, t);
  if (dl.is_zero()) return Strict{};
  if (auto w = find_witness(sys, dl)) return Quasi{std::move(*w)};
  return NonNoetherian{std::move(dl)};
}

}  // namespace noether
