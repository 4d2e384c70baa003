#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "noether/calculus.hpp"
#include "noether/field_system.hpp"
#include "noether/noether.hpp"
#include "noether/symmetry.hpp"

namespace noether {

/// A conserved quantity Q = integral of `integrand` over space. `combination`
/// expresses the integrand through the Noether densities of `transformation`:
/// integrand == sum_p combination[p] * rho_p.
struct ChargeDef {
  std::string name;
  Expr integrand;
  std::string decay_requirement;
  std::string transformation;
  std::map<std::string, Expr> combination;
};

struct CatalogEntry {
  std::string name;
  std::string label;
  FieldSystem system;
  std::vector<Transformation> transformations;
  std::vector<ChargeDef> charges;

  const Transformation& transformation(const std::string& t) const {
    for (const auto& x : transformations)
      if (x.name == t) return x;
    throw std::out_of_range("unknown transformation '" + t + "' for " + name);
  }
  const ChargeDef& charge(const std::string& c) const {
    for (const auto& x : charges)
      if (x.name == c) return x;
    throw std::out_of_range("unknown charge '" + c + "' for " + name);
  }
};

struct ExpectedCoincidence {
  bool representable = true;
  bool coincides = false;
  bool constant_coefficient = false;
  std::optional<std::vector<std::pair<FieldRef, Expr>>> coefficients;
};

/// Hand-derived regression values for one (system, transformation) pair.
struct Expected {
  std::string system;
  std::string transformation;
  std::string tag;
  std::string source;
  std::optional<DivergenceWitness> witness;
  std::optional<Expr> residual;
  std::map<std::string, std::vector<Expr>> currents;
  std::map<std::string, ExpectedCoincidence> coincidence;
};

/// A claimed value that the engine does not reproduce.
struct Discrepancy {
  std::string system;
  std::string transformation;
  std::string quantity;
  std::string claimed_text;
  std::optional<DivergenceWitness> claimed_witness;
  std::string note;
};

namespace build {

inline Expr hbar(int p = 1) { return Expr::constant("hbar", p); }
inline Expr mass(int p = 1) { return Expr::constant("m", p); }
inline Expr half() { return Expr::rational(1, 2); }
inline Expr I() { return Expr::imag(); }
inline Expr x(int axis) { return Expr::coordinate(axis); }
inline Expr par(const std::string& n) { return Expr::parameter(n); }

/// D_{a1} D_{a2} ... f as a single jet.
inline Expr d(const FieldRef& f, std::initializer_list<int> axes = {}) {
  Orders o{};
  for (int a : axes) o.at(static_cast<std::size_t>(a)) += 1;
  return Expr::jet(f, o);
}

inline FieldRef psi() { return complex_field("psi"); }
inline FieldRef psis() { return complex_field("psi").conj(); }
inline FieldRef psiR() { return real_field("psi_R"); }
inline FieldRef psiI() { return real_field("psi_I"); }
inline FieldRef A(int mu) { return real_field(FieldSystem::component_name("A", mu)); }

inline ConstantTable schrodinger_constants() {
  ConstantTable c;
  c.declare("hbar");
  c.declare("m");
  return c;
}

inline Expr hh_over_2m() { return half() * hbar(2) * mass(-1); }

inline Expr grad_dot(const Expr& a_base, const FieldRef& fa, const FieldRef& fb, int dim) {
  Expr s;
  for (int k = 1; k <= dim; ++k) s += d(fa, {k}) * d(fb, {k});
  return a_base * s;
}

inline Expr lap(const FieldRef& f, int dim) {
  Expr s;
  for (int k = 1; k <= dim; ++k) s += d(f, {k, k});
  return s;
}

// Kinetic and time terms from which the Schrodinger densities are assembled.
inline Expr kinetic_standard(int dim) { return -hh_over_2m() * grad_dot(1, psis(), psi(), dim); }
inline Expr kinetic_lap_conj(int dim) { return hh_over_2m() * Expr::jet(psi()) * lap(psis(), dim); }
inline Expr kinetic_lap_psi(int dim) { return hh_over_2m() * Expr::jet(psis()) * lap(psi(), dim); }
inline Expr time_symmetric() {
  return I() * half() * hbar() * (Expr::jet(psis()) * d(psi(), {0}) - d(psis(), {0}) * Expr::jet(psi()));
}
inline Expr time_conj() { return -I() * hbar() * d(psis(), {0}) * Expr::jet(psi()); }

inline FieldSystem complex_schrodinger(const std::string& name, const Expr& lagrangian, int dim = 3) {
  return FieldSystem{name, dim, Flavor::NonRelativistic, {{"psi", FieldType::Complex}}, schrodinger_constants(), lagrangian};
}

inline Expr F_lower(int mu, int nu) { return d(A(nu), {mu}) - d(A(mu), {nu}); }
inline Expr F_upper(int mu, int nu) { return Expr(static_cast<long>(metric(mu) * metric(nu))) * F_lower(mu, nu); }
inline Expr A_upper(int mu) { return Expr(static_cast<long>(metric(mu))) * Expr::jet(A(mu)); }
inline long eta(int mu, int nu) { return mu == nu ? metric(mu) : 0; }

inline std::string tensor_param(int s, int r) { return "eps_" + std::to_string(s) + std::to_string(r); }

// eps_{mu nu} with the antisymmetric completion of the independent eps_{s<r}.
inline Expr eps_lower(int mu, int nu) {
  if (mu == nu) return {};
  if (mu < nu) return par(tensor_param(mu, nu));
  return -par(tensor_param(nu, mu));
}
inline Expr eps_upper(int mu, int nu) { return Expr(static_cast<long>(metric(mu) * metric(nu))) * eps_lower(mu, nu); }

inline std::string lin_param(char part, int l) { return std::string("eps_") + part + "_" + std::to_string(l); }

}  // namespace build

namespace detail {

inline CatalogEntry make_complex_entry(const std::string& name, const std::string& label, const Expr& lagrangian,
                                       bool full_set) {
  using namespace build;
  const int dim = 3;
  CatalogEntry e{name, label, complex_schrodinger(name, lagrangian, dim), {}, {}};

  Expr eps = par("eps_R") + I() * par("eps_I");
  e.transformations.push_back({"shift", {"eps_R", "eps_I"}, {{psi(), eps}}});
  e.transformations.push_back({"phase", {"theta"}, {{psi(), I() * par("theta") * Expr::jet(psi())}}});
  e.transformations.push_back({"scale", {"gamma"}, {{psi(), par("gamma") * Expr::jet(psi())}}});
  e.transformations.push_back(
      {"conj_shift", {"eps_R", "eps_I"}, {{psis(), par("eps_R") - I() * par("eps_I")}}, false});
  if (full_set) {
    Transformation lin{"linear_x", {}, {}};
    Expr v;
    for (int l = 1; l <= dim; ++l) {
      lin.parameters.push_back(lin_param('R', l));
      lin.parameters.push_back(lin_param('I', l));
      v += (par(lin_param('R', l)) + I() * par(lin_param('I', l))) * x(l);
    }
    lin.variations.emplace(psi(), v);
    e.transformations.push_back(lin);
  }

  // rho_R = i hbar (psi* - psi), rho_I = -hbar (psi + psi*), rho_theta = -hbar psi* psi.
  const Expr a = I() * half() * hbar(-1);
  const Expr b = -half() * hbar(-1);
  e.charges.push_back({"Q", Expr::jet(psi()), "|grad psi| falls off faster than |x|^-2", "shift",
                       {{"eps_R", a}, {"eps_I", b}}});
  e.charges.push_back({"norm", Expr::jet(psis()) * Expr::jet(psi()), "psi square integrable", "phase",
                       {{"theta", -hbar(-1)}}});
  if (full_set)
    for (int k = 1; k <= dim; ++k)
      e.charges.push_back({"Q_" + std::to_string(k), Expr::jet(psi()) * x(k), "current falls off fast enough",
                           "linear_x", {{lin_param('R', k), a}, {lin_param('I', k), b}}});
  return e;
}

inline CatalogEntry make_primed() {
  using namespace build;
  const int dim = 3;
  Expr l = -hh_over_2m() * (grad_dot(1, psiR(), psiR(), dim) + grad_dot(1, psiI(), psiI(), dim)) +
           Expr(2) * hbar() * d(psiR(), {0}) * Expr::jet(psiI());
  CatalogEntry e{"schrodinger_primed",
                 "real-field Schrodinger density with the added time derivative",
                 FieldSystem{"schrodinger_primed", dim, Flavor::NonRelativistic,
                             {{"psi_R", FieldType::Real}, {"psi_I", FieldType::Real}}, schrodinger_constants(), l},
                 {},
                 {}};
  e.transformations.push_back({"shift", {"eps_R", "eps_I"}, {{psiR(), par("eps_R")}, {psiI(), par("eps_I")}}});
  Transformation lin{"linear_x", {}, {}};
  Expr vr, vi;
  for (int l2 = 1; l2 <= dim; ++l2) {
    lin.parameters.push_back(lin_param('R', l2));
    lin.parameters.push_back(lin_param('I', l2));
    vr += par(lin_param('R', l2)) * x(l2);
    vi += par(lin_param('I', l2)) * x(l2);
  }
  lin.variations = {{psiR(), vr}, {psiI(), vi}};
  e.transformations.push_back(lin);
  e.transformations.push_back(
      {"phase", {"theta"}, {{psiR(), -par("theta") * Expr::jet(psiI())}, {psiI(), par("theta") * Expr::jet(psiR())}}});
  e.transformations.push_back(
      {"scale", {"gamma"}, {{psiR(), par("gamma") * Expr::jet(psiR())}, {psiI(), par("gamma") * Expr::jet(psiI())}}});

  // rho_R = 2 hbar psi_I, rho_I = -2 hbar psi_R.
  const Expr c = half() * hbar(-1);
  const std::string decay = "|grad psi_R|, |grad psi_I| fall off faster than |x|^-2";
  e.charges.push_back({"Q_R", Expr::jet(psiR()), decay, "shift", {{"eps_I", -c}}});
  e.charges.push_back({"Q_I", Expr::jet(psiI()), decay, "shift", {{"eps_R", c}}});
  e.charges.push_back({"Q", Expr::jet(psiR()) + I() * Expr::jet(psiI()), decay, "shift",
                       {{"eps_R", I() * c}, {"eps_I", -c}}});
  for (int k = 1; k <= dim; ++k)
    e.charges.push_back({"Q_" + std::to_string(k), (Expr::jet(psiR()) + I() * Expr::jet(psiI())) * x(k),
                         "current falls off fast enough", "linear_x",
                         {{lin_param('R', k), I() * c}, {lin_param('I', k), -c}}});
  e.charges.push_back({"norm", Expr::jet(psiR()).pow(2) + Expr::jet(psiI()).pow(2), "psi square integrable", "phase",
                       {{"theta", -hbar(-1)}}});
  return e;
}

inline CatalogEntry make_scalar() {
  using namespace build;
  FieldRef phi = real_field("phi");
  Expr l = half() * d(phi, {0}).pow(2);
  for (int i = 1; i <= 3; ++i) l -= half() * d(phi, {i}).pow(2);
  CatalogEntry e{"massless_scalar", "massless real scalar field",
                 FieldSystem{"massless_scalar", 3, Flavor::Relativistic, {{"phi", FieldType::Real}}, {}, l}, {}, {}};
  e.transformations.push_back({"shift", {"eps"}, {{phi, par("eps")}}});
  e.charges.push_back({"Q", d(phi, {0}), "grad phi falls off faster than |x|^-2", "shift", {{"eps", 1}}});
  return e;
}

inline CatalogEntry make_maxwell() {
  using namespace build;
  Expr l;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) l -= Expr::rational(1, 4) * F_lower(mu, nu) * F_upper(mu, nu);
  CatalogEntry e{"maxwell_free", "source-free electromagnetic field",
                 FieldSystem{"maxwell_free", 3, Flavor::Relativistic, {{"A", FieldType::Covector4}}, {}, l}, {}, {}};

  Transformation shift{"A_shift", {}, {}};
  for (int mu = 0; mu < 4; ++mu) {
    shift.parameters.push_back("eps_" + std::to_string(mu));
    shift.variations.emplace(A(mu), par("eps_" + std::to_string(mu)));
  }
  e.transformations.push_back(shift);

  Transformation tensor{"tensor_shift", {}, {}};
  for (int s = 0; s < 4; ++s)
    for (int r = s + 1; r < 4; ++r) tensor.parameters.push_back(tensor_param(s, r));
  for (int mu = 0; mu < 4; ++mu) {
    Expr v;
    for (int nu = 0; nu < 4; ++nu) v += half() * eps_lower(nu, mu) * x(nu);
    if (!v.is_zero()) tensor.variations.emplace(A(mu), v);
  }
  e.transformations.push_back(tensor);

  // A_mu -> A_mu + eps d_mu chi with chi = x^0 x^1.
  e.transformations.push_back({"gauge", {"eps"}, {{A(0), par("eps") * x(1)}, {A(1), par("eps") * x(0)}}});

  // rho for eps_i is F^{i0} = E^i.
  for (int i = 1; i <= 3; ++i)
    e.charges.push_back({"E_" + std::to_string(i), F_lower(0, i), "B -> 0 as |x| -> infinity", "A_shift",
                         {{"eps_" + std::to_string(i), 1}}});
  return e;
}

inline std::vector<CatalogEntry> make_catalog() {
  using namespace build;
  std::vector<CatalogEntry> c;
  c.push_back(make_complex_entry("schrodinger_standard", "standard free Schrodinger density",
                                 kinetic_standard(3) + time_symmetric(), true));
  c.push_back(make_primed());
  c.push_back(make_complex_entry("schrodinger_tilde", "second-order density with conjugate time term",
                                 kinetic_lap_conj(3) + time_conj(), true));
  c.push_back(make_complex_entry("schrodinger_bar", "second-order density with symmetric time term",
                                 kinetic_lap_conj(3) + time_symmetric(), true));
  c.push_back(make_complex_entry("schrodinger_hat", "first-order density with conjugate time term",
                                 kinetic_standard(3) + time_conj(), true));
  c.push_back(make_complex_entry("schrodinger_barstar", "variant: psi* lap psi with symmetric time term",
                                 kinetic_lap_psi(3) + time_symmetric(), false));
  c.push_back(make_complex_entry("schrodinger_tildestar", "variant: psi* lap psi with conjugate time term",
                                 kinetic_lap_psi(3) + time_conj(), false));
  c.push_back(make_scalar());
  c.push_back(make_maxwell());
  return c;
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = detail::make_catalog();
  return entries;
}

inline std::vector<std::string> entry_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.name);
  return out;
}

inline const CatalogEntry& get_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw std::out_of_range("unknown catalog entry '" + name + "'");
}

/// Names of the Schrodinger densities that are pairwise divergence-equivalent.
inline std::vector<std::string> schrodinger_family() {
  return {"schrodinger_standard", "schrodinger_tilde",    "schrodinger_bar",      "schrodinger_hat",
          "schrodinger_barstar",  "schrodinger_tildestar"};
}

/// Rewrites every complex field psi through psi = psi_R + i psi_I. Real-field
/// systems are returned unchanged.
inline FieldSystem real_imag_decompose(const FieldSystem& sys) {
  bool any = false;
  FieldSystem out = sys;
  out.fields.clear();
  Bindings b;
  for (const auto& f : sys.fields) {
    if (f.type != FieldType::Complex) {
      out.fields.push_back(f);
      continue;
    }
    any = true;
    out.fields.push_back({f.name + "_R", FieldType::Real});
    out.fields.push_back({f.name + "_I", FieldType::Real});
    b.emplace(complex_field(f.name),
              Expr::jet(real_field(f.name + "_R")) + Expr::imag() * Expr::jet(real_field(f.name + "_I")));
  }
  if (!any) return sys;
  out.name = sys.name + "_ri";
  out.lagrangian = substitute(sys.lagrangian, b);
  return out;
}

/// The image of a transformation under real_imag_decompose:
/// delta psi_R = (delta psi + delta psi*)/2, delta psi_I = (delta psi - delta psi*)/(2i).
inline Transformation real_imag_decompose(const Transformation& t, const FieldSystem& sys) {
  Transformation out{t.name, t.parameters, {}, true};
  Bindings b;
  for (const auto& f : sys.fields)
    if (f.type == FieldType::Complex)
      b.emplace(complex_field(f.name),
                Expr::jet(real_field(f.name + "_R")) + Expr::imag() * Expr::jet(real_field(f.name + "_I")));
  for (const auto& f : sys.fields) {
    if (f.type == FieldType::Complex) {
      Expr v = t.variation(complex_field(f.name));
      Expr vs = t.variation(complex_field(f.name).conj());
      Expr re = substitute(build::half() * (v + vs), b);
      Expr im = substitute(-build::half() * build::I() * (v - vs), b);
      if (!re.is_zero()) out.variations.emplace(real_field(f.name + "_R"), re);
      if (!im.is_zero()) out.variations.emplace(real_field(f.name + "_I"), im);
    } else {
      for (const auto& r : FieldSystem{"", 1, Flavor::NonRelativistic, {f}, {}, {}}.field_refs()) {
        Expr v = t.variation(r);
        if (!v.is_zero()) out.variations.emplace(r, v);
      }
    }
  }
  return out;
}

/// Hand-derived expectations. Every value here is regenerated by the engine
/// in the test suite and by `verify-all`.
inline std::vector<Expected> expected_results(const std::string& name) {
  using namespace build;
  const auto& entry = get_entry(name);
  std::vector<Expected> out;
  auto W = [](std::vector<Expr> c) { return DivergenceWitness{std::move(c)}; };
  const Expr hm = hbar(2) * mass(-1);

  if (name == "schrodinger_primed") {
    const Expr R = Expr::jet(psiR()), Im = Expr::jet(psiI());
    Expected shift{name, "shift", "Quasi", "first symmetry, primed density"};
    shift.witness = W({Expr(2) * hbar() * par("eps_I") * R, {}, {}, {}});
    shift.currents["eps_R"] = {Expr(2) * hbar() * Im, -hm * d(psiR(), {1}), -hm * d(psiR(), {2}), -hm * d(psiR(), {3})};
    shift.currents["eps_I"] = {Expr(-2) * hbar() * R, -hm * d(psiI(), {1}), -hm * d(psiI(), {2}), -hm * d(psiI(), {3})};
    shift.coincidence["eps_R"] = {true, true, true, std::vector<std::pair<FieldRef, Expr>>{{psiR(), Expr(-1)}}};
    shift.coincidence["eps_I"] = {true, true, true, std::vector<std::pair<FieldRef, Expr>>{{psiI(), Expr(-1)}}};
    out.push_back(shift);

    Expected lin{name, "linear_x", "Quasi", "second symmetry, primed density"};
    std::vector<Expr> w(4);
    for (int l = 1; l <= 3; ++l) {
      w[0] += Expr(2) * hbar() * R * par(lin_param('I', l)) * x(l);
      w[static_cast<std::size_t>(l)] = -hm * (R * par(lin_param('R', l)) + Im * par(lin_param('I', l)));
    }
    lin.witness = W(w);
    for (int l = 1; l <= 3; ++l) {
      std::vector<Expr> jr{Expr(2) * hbar() * Im * x(l)}, ji{Expr(-2) * hbar() * R * x(l)};
      for (int k = 1; k <= 3; ++k) {
        jr.push_back(-hm * (d(psiR(), {k}) * x(l) - (k == l ? R : Expr())));
        ji.push_back(-hm * (d(psiI(), {k}) * x(l) - (k == l ? Im : Expr())));
      }
      lin.currents[lin_param('R', l)] = jr;
      lin.currents[lin_param('I', l)] = ji;
      lin.coincidence[lin_param('R', l)] = {true, true, false, std::vector<std::pair<FieldRef, Expr>>{{psiR(), -x(l)}}};
      lin.coincidence[lin_param('I', l)] = {true, true, false, std::vector<std::pair<FieldRef, Expr>>{{psiI(), -x(l)}}};
    }
    out.push_back(lin);

    Expected phase{name, "phase", "Quasi", "global phase on real fields"};
    phase.witness = W({hbar() * par("theta") * (R.pow(2) - Im.pow(2)), {}, {}, {}});
    std::vector<Expr> jp{-hbar() * (R.pow(2) + Im.pow(2))};
    for (int k = 1; k <= 3; ++k) jp.push_back(hm * (d(psiR(), {k}) * Im - d(psiI(), {k}) * R));
    phase.currents["theta"] = jp;
    phase.coincidence["theta"] = {false, false, false, std::nullopt};
    out.push_back(phase);

    Expected scale{name, "scale", "NonNoetherian", "multiplication by a real constant"};
    scale.residual = Expr(2) * par("gamma") * entry.system.lagrangian;
    out.push_back(scale);
    return out;
  }

  if (name.rfind("schrodinger_", 0) == 0) {
    const Expr p = Expr::jet(psi()), ps = Expr::jet(psis());
    const bool lap_conj = name == "schrodinger_tilde" || name == "schrodinger_bar";
    const bool lap_psi = name == "schrodinger_barstar" || name == "schrodinger_tildestar";
    const bool conj_time = name == "schrodinger_tilde" || name == "schrodinger_hat" || name == "schrodinger_tildestar";

    // Shift: time part and spatial part of the witness, by density.
    Expected shift{name, "shift", "Quasi", "complex shift psi -> psi + eps"};
    std::vector<Expr> w(4);
    if (conj_time)
      w[0] = -I() * hbar() * (par("eps_R") + I() * par("eps_I")) * ps;
    else
      w[0] = I() * half() * hbar() * par("eps_R") * (p - ps) + half() * hbar() * par("eps_I") * (p + ps);
    for (int k = 1; k <= 3; ++k) {
      if (lap_conj)
        w[static_cast<std::size_t>(k)] = hh_over_2m() * (par("eps_R") + I() * par("eps_I")) * d(psis(), {k});
      else if (lap_psi)
        w[static_cast<std::size_t>(k)] = hh_over_2m() * (par("eps_R") - I() * par("eps_I")) * d(psi(), {k});
    }
    shift.witness = W(w);
    if (name == "schrodinger_standard") {
      std::vector<Expr> jr{I() * hbar() * (ps - p)}, ji{-hbar() * (p + ps)};
      for (int k = 1; k <= 3; ++k) {
        jr.push_back(-hh_over_2m() * (d(psis(), {k}) + d(psi(), {k})));
        ji.push_back(-I() * hh_over_2m() * (d(psis(), {k}) - d(psi(), {k})));
      }
      shift.currents["eps_R"] = jr;
      shift.currents["eps_I"] = ji;
      shift.coincidence["eps_R"] = {true, false, false,
                                    std::vector<std::pair<FieldRef, Expr>>{{psi(), Expr(-1)}, {psis(), Expr(-1)}}};
      shift.coincidence["eps_I"] = {true, false, false,
                                    std::vector<std::pair<FieldRef, Expr>>{{psi(), -I()}, {psis(), I()}}};
    }
    out.push_back(shift);

    // Every term is bilinear in (psi, psi*), so the phase leaves each density unchanged.
    Expected phase{name, "phase", "Strict", "global phase"};
    if (name == "schrodinger_standard") {
      std::vector<Expr> jp{-hbar() * ps * p};
      for (int k = 1; k <= 3; ++k) jp.push_back(-I() * hh_over_2m() * (d(psis(), {k}) * p - ps * d(psi(), {k})));
      phase.currents["theta"] = jp;
      phase.coincidence["theta"] = {false, false, false, std::nullopt};
    }
    out.push_back(phase);

    Expected scale{name, "scale", "NonNoetherian", "multiplication by a real constant"};
    scale.residual = Expr(2) * par("gamma") * entry.system.lagrangian;
    out.push_back(scale);

    // Shifting psi* alone leaves densities without undifferentiated psi* invariant.
    out.push_back({name, "conj_shift", conj_time && !lap_psi ? "Strict" : "Quasi", "shift of psi* alone"});

    if (!lap_psi)
      out.push_back({name, "linear_x", "Quasi", "linear shift psi -> psi + eps.x"});
    return out;
  }

  if (name == "massless_scalar") {
    FieldRef phi = real_field("phi");
    Expected shift{name, "shift", "Strict", "shift of a massless scalar"};
    shift.witness = DivergenceWitness::zero(4);
    shift.currents["eps"] = {d(phi, {0}), -d(phi, {1}), -d(phi, {2}), -d(phi, {3})};
    shift.coincidence["eps"] = {true, true, true, std::vector<std::pair<FieldRef, Expr>>{{phi, Expr(-1)}}};
    out.push_back(shift);
    return out;
  }

  if (name == "maxwell_free") {
    Expected shift{name, "A_shift", "Strict", "constant shift of the potential"};
    for (int nu = 0; nu < 4; ++nu) {
      std::vector<Expr> j;
      for (int mu = 0; mu < 4; ++mu) j.push_back(-F_upper(mu, nu));
      const std::string p = "eps_" + std::to_string(nu);
      shift.currents[p] = j;
      shift.coincidence[p] = {true, true, true, std::vector<std::pair<FieldRef, Expr>>{{A(nu), Expr(-1)}}};
    }
    out.push_back(shift);

    Expected tensor{name, "tensor_shift", "Quasi", "constant shift of the field strength"};
    std::vector<Expr> w(4);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) w[static_cast<std::size_t>(mu)] -= Expr::jet(A(nu)) * eps_upper(mu, nu);
    tensor.witness = W(w);
    for (int s = 0; s < 4; ++s)
      for (int r = s + 1; r < 4; ++r) {
        std::vector<Expr> j;
        for (int mu = 0; mu < 4; ++mu)
          j.push_back(-half() * F_upper(mu, r) * x(s) + half() * F_upper(mu, s) * x(r) +
                      Expr(eta(mu, s)) * A_upper(r) - Expr(eta(mu, r)) * A_upper(s));
        tensor.currents[tensor_param(s, r)] = j;
        tensor.coincidence[tensor_param(s, r)] = {
            true, false, false, std::vector<std::pair<FieldRef, Expr>>{{A(s), half() * x(r)}, {A(r), -half() * x(s)}}};
      }
    out.push_back(tensor);

    Expected gauge{name, "gauge", "Strict", "gauge transformation with chi = x0 x1"};
    gauge.coincidence["eps"] = {true, false, false,
                                std::vector<std::pair<FieldRef, Expr>>{{A(0), -x(1)}, {A(1), -x(0)}}};
    out.push_back(gauge);
    return out;
  }
  return out;
}

/// Euler expressions of the two reference densities, written out by hand.
inline std::vector<std::pair<FieldRef, Expr>> expected_euler(const std::string& name) {
  using namespace build;
  if (name == "schrodinger_standard") {
    Expr lap_s, lap_p;
    for (int k = 1; k <= 3; ++k) {
      lap_s += d(psis(), {k, k});
      lap_p += d(psi(), {k, k});
    }
    return {{psi(), hh_over_2m() * lap_s - I() * hbar() * d(psis(), {0})},
            {psis(), hh_over_2m() * lap_p + I() * hbar() * d(psi(), {0})}};
  }
  if (name == "schrodinger_primed") {
    const Expr hm = hbar(2) * mass(-1);
    Expr lap_r, lap_i;
    for (int k = 1; k <= 3; ++k) {
      lap_r += d(psiR(), {k, k});
      lap_i += d(psiI(), {k, k});
    }
    return {{psiI(), Expr(2) * hbar() * d(psiR(), {0}) + hm * lap_i},
            {psiR(), Expr(-2) * hbar() * d(psiI(), {0}) + hm * lap_r}};
  }
  throw std::out_of_range("no hand-written Euler expressions for '" + name + "'");
}

inline std::vector<Discrepancy> discrepancies() {
  using namespace build;
  std::vector<Expr> w(4);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) w[static_cast<std::size_t>(mu)] += Expr::rational(1, 4) * Expr::jet(A(nu)) * eps_upper(mu, nu);
  return {
      {"maxwell_free", "tensor_shift", "witness", "Lambda^mu = 1/4 A_nu eps^{mu nu}", DivergenceWitness{w},
       "does not satisfy deltaL = d_mu Lambda^mu; the engine finds Lambda^mu = -A_nu eps^{mu nu}"},
      {"maxwell_free", "A_shift", "current", "j^{mu nu} = -1/4 F^{mu nu}", std::nullopt,
       "dL/d(d_mu A_sigma) = -F^{mu sigma}; the engine emits -F^{mu nu}"},
      {"maxwell_free", "tensor_shift", "current",
       "j^{mu sigma rho} = 1/2 F^{mu rho} x^sigma - 1/2 F^{mu sigma} x^rho - eta^{mu sigma} A^rho + eta^{mu rho} A^sigma",
       std::nullopt, "overall sign opposite to the engine output; continuity coefficients flip sign accordingly"},
  };
}

}  // namespace noether
