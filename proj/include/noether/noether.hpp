#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "noether/calculus.hpp"
#include "noether/field_system.hpp"
#include "noether/linear.hpp"
#include "noether/symmetry.hpp"
#include "noether/variational.hpp"

namespace noether {

/// Conserved current for one real parameter. components[0] is the density,
/// components[1..dim] the spatial current (j^mu in the relativistic case).
struct NoetherCurrent {
  std::string parameter;
  std::vector<Expr> components;

  const Expr& rho() const { return components.at(0); }
  const Expr& j(int axis) const { return components.at(static_cast<std::size_t>(axis)); }
  bool operator==(const NoetherCurrent&) const = default;
};

struct NotNoetherian : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotSolvable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Moves D_J Q * B into divergence form: D_J Q * B = D_mu S^mu + Q * (-1)^|J| D_J B.
inline void integrate_by_parts(Expr q_derivs_base, Orders order, Expr b, std::vector<Expr>& s) {
  while (total_order(order) > 0) {
    int mu = 0;
    while (order[static_cast<std::size_t>(mu)] == 0) ++mu;
    order[static_cast<std::size_t>(mu)] -= 1;
    Expr lower = total_derivative(q_derivs_base, order);
    s[static_cast<std::size_t>(mu)] += lower * b;
    b = -total_derivative(b, mu);
  }
}

}  // namespace detail

/// One current per parameter of t:
///   j^mu_a = sum over jets of the integrated-by-parts dL/df_J * D_J(d delta f/d eps_a)
///            - d Lambda^mu / d eps_a.
/// For first-order Lagrangians this is the textbook rho = dL/d(f_t) Q - dLambda^0/d eps.
inline std::vector<NoetherCurrent> noether_currents(const FieldSystem& sys, const Transformation& t,
                                                    const DivergenceWitness& w) {
  const int axes = sys.axis_count();
  if (!w.components.empty() && static_cast<int>(w.components.size()) != axes)
    throw std::invalid_argument("witness has the wrong number of components");
  const Transformation full = t.completed();
  const auto jets = sys.lagrangian.symbols(SymbolKind::Jet);
  std::vector<NoetherCurrent> out;
  for (const auto& p : t.parameters) {
    NoetherCurrent c{p, std::vector<Expr>(static_cast<std::size_t>(axes))};
    for (const auto& s : jets) {
      Expr q = full.generator(s.field, p);
      if (q.is_zero()) continue;
      detail::integrate_by_parts(q, s.orders, partial(sys.lagrangian, s), c.components);
    }
    if (!w.components.empty())
      for (int mu = 0; mu < axes; ++mu)
        c.components[static_cast<std::size_t>(mu)] -= partial(w.components[static_cast<std::size_t>(mu)], Symbol::parameter(p));
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<NoetherCurrent> noether_currents(const FieldSystem& sys, const Transformation& t,
                                                    const Classification& cls) {
  if (std::holds_alternative<NonNoetherian>(cls))
    throw NotNoetherian("transformation " + t.name + " is not quasi-invariant; no current exists");
  if (const auto* q = std::get_if<Quasi>(&cls)) return noether_currents(sys, t, q->witness);
  return noether_currents(sys, t, DivergenceWitness::zero(sys.axis_count()));
}

/// D_t rho + div j, off shell.
inline Expr continuity_residual(const NoetherCurrent& c) {
  Expr r;
  for (std::size_t mu = 0; mu < c.components.size(); ++mu) r += total_derivative(c.components[mu], static_cast<int>(mu));
  return r;
}

/// continuity_residual + sum_k (d delta f_k / d eps) E_k. Vanishes identically
/// for every current built by noether_currents.
inline Expr noether_identity_defect(const FieldSystem& sys, const Transformation& t, const NoetherCurrent& c) {
  Expr r = continuity_residual(c);
  const Transformation full = t.completed();
  for (const auto& f : sys.field_refs()) {
    Expr q = full.generator(f, c.parameter);
    if (!q.is_zero()) r += q * euler_expression(sys.lagrangian, f);
  }
  return r;
}

namespace detail {

// Splits a monomial into its (jets, coordinates) body and its constant part.
inline std::pair<Monomial, Monomial> split_constants(const Monomial& m) {
  return {m.filter([](const Symbol& s) { return s.kind != SymbolKind::Constant; }),
          m.filter([](const Symbol& s) { return s.kind == SymbolKind::Constant; })};
}

// Vector over body monomials with constant-Laurent-monomial coefficients.
inline std::map<Monomial, Expr> as_constant_vector(const Expr& e) {
  std::map<Monomial, Expr> v;
  for (const auto& [m, c] : e.terms()) {
    auto [body, consts] = split_constants(m);
    v[body].add_term(consts, c);
  }
  std::erase_if(v, [](const auto& kv) { return kv.second.is_zero(); });
  return v;
}

template <class Map>
Expr from_constant_vector(const Map& v) {
  Expr e;
  for (const auto& [body, c] : v) e += c.times(body);
  return e;
}

inline int max_time_order(const Monomial& m) {
  int best = 0;
  for (const auto& [s, p] : m.factors())
    if (s.is_jet()) best = std::max<int>(best, s.orders[0]);
  return best;
}

// Ranking: highest time derivative first, then total jet order, then canonical order.
struct ShellRanking {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int ta = max_time_order(a), tb = max_time_order(b);
    if (ta != tb) return ta < tb;
    const int oa = a.max_jet_order(), ob = b.max_jet_order();
    if (oa != ob) return oa < ob;
    return a < b;
  }
};

inline std::vector<Orders> multi_indices(int axes, int max_order) {
  std::vector<Orders> out;
  Orders cur{};
  auto rec = [&](auto&& self, int ax, int left) -> void {
    if (ax == axes) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[static_cast<std::size_t>(ax)] = static_cast<std::uint8_t>(k);
      self(self, ax + 1, left - k);
    }
    cur[static_cast<std::size_t>(ax)] = 0;
  };
  rec(rec, 0, max_order);
  return out;
}

inline std::vector<Monomial> coordinate_monomials(int axes, int max_degree) {
  std::vector<Symbol> coords;
  for (int ax = 0; ax < axes; ++ax) coords.push_back(Symbol::coordinate(ax));
  std::vector<Monomial> out;
  for (int d = 0; d <= max_degree; ++d) {
    auto level = monomials_of_degree(coords, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace detail

/// Normal form of e modulo the span of m * D_J E_k (polynomial multipliers m,
/// bounded by the degrees of e). Leading terms are ranked by time-derivative
/// order, so the highest time derivatives are eliminated first. Zero means e
/// vanishes on shell.
inline Expr reduce_on_shell(const Expr& e, const FieldSystem& sys) {
  if (e.is_zero()) return e;
  const int axes = sys.axis_count();
  const int order = e.max_jet_order();
  const int cdeg = e.max_coordinate_degree();
  int fdeg = 0;
  for (const auto& [m, c] : e.terms()) fdeg = std::max(fdeg, m.field_degree());

  using Basis = EchelonBasis<Monomial, Expr, detail::ShellRanking>;
  Basis basis;
  std::size_t id = 0;
  const auto coords = detail::coordinate_monomials(axes, cdeg);
  const auto derivs = detail::multi_indices(axes, order);
  try {
    for (const auto& [f, euler] : euler_record(sys)) {
      if (euler.is_zero()) continue;
      int emin = 1 << 20;
      for (const auto& [m, c] : euler.terms()) emin = std::min(emin, m.field_degree());
      const int mult_deg = fdeg - emin;
      if (mult_deg < 0) continue;
      std::vector<Monomial> jet_mults{Monomial{}};
      if (mult_deg > 0) {
        auto jets = detail::jets_up_to(sys, axes, order);
        for (int d = 1; d <= mult_deg; ++d) {
          auto level = detail::monomials_of_degree(jets, d);
          jet_mults.insert(jet_mults.end(), level.begin(), level.end());
        }
      }
      for (const auto& J : derivs) {
        Expr dj = total_derivative(euler, J);
        for (const auto& jm : jet_mults)
          for (const auto& cm : coords) {
            auto v = detail::as_constant_vector(dj.times(jm * cm));
            basis.insert(Basis::Vector(v.begin(), v.end()), id++);
          }
      }
    }
    auto v = detail::as_constant_vector(e);
    return detail::from_constant_vector(basis.reduce(Basis::Vector(v.begin(), v.end())).remainder);
  } catch (const NonConstantDivision& ex) {
    throw NotSolvable(std::string("equations of motion cannot be solved for a leading jet: ") + ex.what());
  }
}

/// Outcome of writing a continuity residual as sum_k c_k E_k with c_k
/// polynomial in the coordinates.
struct CoincidenceReport {
  bool representable = false;                 // residual == sum c_k E_k exactly
  std::vector<std::pair<FieldRef, Expr>> coefficients;  // nonzero c_k only
  Expr remainder;                             // irreducible part when not representable
  bool coincides = false;                     // a single Euler expression times one term
  bool constant_coefficient = false;          // ... and that term has no coordinates
};

inline CoincidenceReport coincides_with_eom(const Expr& residual, const FieldSystem& sys) {
  CoincidenceReport rep;
  const int axes = sys.axis_count();
  const auto record = euler_record(sys);
  const auto coords = detail::coordinate_monomials(axes, residual.max_coordinate_degree());

  using Basis = EchelonBasis<Monomial, Expr, detail::ShellRanking>;
  Basis basis;
  std::vector<std::pair<std::size_t, Monomial>> rows;
  for (std::size_t k = 0; k < record.size(); ++k) {
    if (record[k].second.is_zero()) continue;
    for (const auto& cm : coords) {
      auto v = detail::as_constant_vector(record[k].second.times(cm));
      rows.emplace_back(k, cm);
      basis.insert(Basis::Vector(v.begin(), v.end()), rows.size() - 1);
    }
  }
  auto target = detail::as_constant_vector(residual);
  auto red = basis.reduce(Basis::Vector(target.begin(), target.end()));
  rep.remainder = detail::from_constant_vector(red.remainder);
  rep.representable = rep.remainder.is_zero();
  if (!rep.representable) return rep;

  std::map<std::size_t, Expr> coeff;
  for (const auto& [row, c] : red.combination) coeff[rows[row].first] += c.times(rows[row].second);
  for (const auto& [k, c] : coeff)
    if (!c.is_zero()) rep.coefficients.emplace_back(record[k].first, c);
  if (rep.coefficients.size() == 1 && rep.coefficients[0].second.size() == 1) {
    rep.coincides = true;
    rep.constant_coefficient = rep.coefficients[0].second.is_constant_only();
  }
  return rep;
}

inline CoincidenceReport coincides_with_eom(const NoetherCurrent& c, const FieldSystem& sys) {
  return coincides_with_eom(continuity_residual(c), sys);
}

}  // namespace noether
