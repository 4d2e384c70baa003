#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "noether/catalog.hpp"
#include "noether/dsl.hpp"
#include "noether/noether.hpp"
#include "noether/random.hpp"

namespace noether::verify {

/// One regenerated expectation. `criterion` groups checks for reporting
/// (0 = general catalog consistency).
struct Check {
  int criterion = 0;
  std::string name;
  bool ok = false;
  std::string detail;
};

using Checks = std::vector<Check>;

inline bool all_ok(const Checks& cs) {
  for (const auto& c : cs)
    if (!c.ok) return false;
  return true;
}

namespace detail {

inline std::map<FieldRef, Expr> as_map(const std::vector<std::pair<FieldRef, Expr>>& v) {
  std::map<FieldRef, Expr> m;
  for (const auto& [f, e] : v)
    if (!e.is_zero()) m[f] = e;
  return m;
}

inline std::string show(const Expr& e, Flavor f) { return print_expr(e, f); }

// Runs f and turns exceptions into a failed check.
inline void guarded(Checks& out, int criterion, const std::string& name, const std::function<void(Check&)>& f) {
  Check c{criterion, name, false, {}};
  try {
    f(c);
  } catch (const std::exception& ex) {
    c.ok = false;
    c.detail = std::string("exception: ") + ex.what();
  }
  out.push_back(std::move(c));
}

}  // namespace detail

/// Euler expressions of the reference densities, and the combinations of the
/// real-field equations that give back the complex ones.
inline Checks euler_checks() {
  Checks out;
  for (const std::string name : {"schrodinger_standard", "schrodinger_primed"}) {
    const int crit = name == "schrodinger_standard" ? 1 : 2;
    detail::guarded(out, crit, name + " euler expressions", [&](Check& c) {
      auto got = detail::as_map(euler_record(get_entry(name).system));
      auto want = detail::as_map(expected_euler(name));
      c.ok = got == want;
      if (!c.ok) c.detail = "engine output differs from the hand-written equations";
    });
  }
  detail::guarded(out, 2, "schrodinger_primed combinations give the complex equations", [&](Check& c) {
    using namespace build;
    auto er = detail::as_map(euler_record(get_entry("schrodinger_primed").system));
    auto es = detail::as_map(euler_record(get_entry("schrodinger_standard").system));
    Bindings b{{psi(), Expr::jet(psiR()) + I() * Expr::jet(psiI())}};
    const Expr ER = er[psiR()], EI = er[psiI()];
    bool plus = ER + I() * EI == Expr(2) * substitute(es[psis()], b);
    bool minus = ER - I() * EI == Expr(2) * substitute(es[psi()], b);
    c.ok = plus && minus;
    if (!c.ok) c.detail = "E_R +- i E_I is not twice the complex Euler expression";
  });
  return out;
}

/// Pairwise divergence-equivalence of every Schrodinger density, with the
/// real-field density compared against the decomposed complex ones.
inline Checks equivalence_checks() {
  Checks out;
  const auto fam = schrodinger_family();
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i + 1; j < fam.size(); ++j)
      detail::guarded(out, 3, fam[i] + " ~ " + fam[j], [&](Check& c) {
        const auto& a = get_entry(fam[i]).system;
        const auto& b = get_entry(fam[j]).system;
        c.ok = lagrangians_equivalent(a, b) && detail::as_map(euler_record(a)) == detail::as_map(euler_record(b));
      });
  const auto& primed = get_entry("schrodinger_primed").system;
  for (const auto& n : fam)
    detail::guarded(out, 3, "schrodinger_primed ~ " + n, [&](Check& c) {
      const auto ri = real_imag_decompose(get_entry(n).system);
      c.ok = lagrangians_equivalent(ri, primed) && detail::as_map(euler_record(ri)) == detail::as_map(euler_record(primed));
    });
  detail::guarded(out, 3, "decompose(standard) + D_t(hbar psi_R psi_I) == primed", [&](Check& c) {
    using namespace build;
    auto ri = real_imag_decompose(get_entry("schrodinger_standard").system);
    Expr added = ri.lagrangian + total_derivative(hbar() * Expr::jet(psiR()) * Expr::jet(psiI()), 0);
    c.ok = added == primed.lagrangian;
  });
  return out;
}

/// Regenerates every expected record of one entry. Tags, witnesses and
/// residuals count toward criterion 4; currents, conservation and
/// coincidence toward criterion 5.
inline Checks entry_checks(const std::string& name) {
  Checks out;
  const auto& entry = get_entry(name);
  const auto& sys = entry.system;
  for (const auto& exp : expected_results(name)) {
    const std::string id = name + "/" + exp.transformation;
    const auto& t = entry.transformation(exp.transformation);
    Classification cls;
    bool have = false;
    detail::guarded(out, 4, id + " tag", [&](Check& c) {
      cls = classify(sys, t);
      have = true;
      c.ok = tag_name(cls) == exp.tag;
      if (!c.ok) c.detail = "got " + tag_name(cls) + ", expected " + exp.tag;
    });
    if (!have) continue;
    if (exp.witness)
      detail::guarded(out, 4, id + " witness", [&](Check& c) {
        DivergenceWitness got = DivergenceWitness::zero(sys.axis_count());
        if (const auto* q = std::get_if<Quasi>(&cls)) got = q->witness;
        c.ok = got == *exp.witness;
        if (!c.ok) c.detail = "engine Lambda^0 = " + detail::show(got.components[0], sys.flavor);
      });
    if (const auto* q = std::get_if<Quasi>(&cls))
      detail::guarded(out, 4, id + " witness soundness", [&](Check& c) {
        c.ok = verify_witness(first_variation(sys, t), q->witness).is_zero();
      });
    if (exp.residual)
      detail::guarded(out, 4, id + " residual", [&](Check& c) {
        const auto* nn = std::get_if<NonNoetherian>(&cls);
        c.ok = nn && nn->residual == *exp.residual;
      });
    if (std::holds_alternative<NonNoetherian>(cls)) continue;

    std::vector<NoetherCurrent> currents;
    detail::guarded(out, 5, id + " currents", [&](Check& c) {
      currents = noether_currents(sys, t, cls);
      c.ok = true;
      for (const auto& cur : currents) {
        auto it = exp.currents.find(cur.parameter);
        if (it != exp.currents.end() && it->second != cur.components) {
          c.ok = false;
          c.detail += "mismatch for " + cur.parameter + "; ";
        }
      }
      for (const auto& [p, comps] : exp.currents) {
        bool found = false;
        for (const auto& cur : currents) found = found || cur.parameter == p;
        if (!found) c.ok = false, c.detail += "missing current " + p + "; ";
      }
    });
    for (const auto& cur : currents) {
      detail::guarded(out, 5, id + "/" + cur.parameter + " identity and on-shell conservation", [&](Check& c) {
        bool ident = noether_identity_defect(sys, t, cur).is_zero();
        bool shell = reduce_on_shell(continuity_residual(cur), sys).is_zero();
        c.ok = ident && shell;
        if (!ident) c.detail += "off-shell identity fails; ";
        if (!shell) c.detail += "continuity residual does not vanish on shell; ";
      });
      auto ec = exp.coincidence.find(cur.parameter);
      if (ec == exp.coincidence.end()) continue;
      detail::guarded(out, 5, id + "/" + cur.parameter + " coincidence", [&](Check& c) {
        auto rep = coincides_with_eom(cur, sys);
        const auto& want = ec->second;
        c.ok = rep.representable == want.representable && rep.coincides == want.coincides &&
               rep.constant_coefficient == want.constant_coefficient;
        if (want.coefficients) c.ok = c.ok && detail::as_map(rep.coefficients) == detail::as_map(*want.coefficients);
        if (!c.ok) {
          c.detail = "representable=" + std::to_string(rep.representable) + " coincides=" + std::to_string(rep.coincides);
          for (const auto& [f, e] : rep.coefficients) c.detail += " " + f.display() + ":" + detail::show(e, sys.flavor);
        }
      });
    }
  }
  return out;
}

/// Classification tags and on-shell conservation agree between each complex
/// density and its real-field image. Transformations that vary psi and psi*
/// independently have no real image and are skipped.
inline Checks cross_representation_checks() {
  Checks out;
  for (const auto& n : schrodinger_family()) {
    const auto& e = get_entry(n);
    const auto ri = real_imag_decompose(e.system);
    for (const auto& t : e.transformations) {
      if (!t.paired) continue;
      detail::guarded(out, 0, n + "/" + t.name + " real-field image", [&](Check& c) {
        auto tr = real_imag_decompose(t, e.system);
        auto a = classify(e.system, t);
        auto b = classify(ri, tr);
        c.ok = tag_name(a) == tag_name(b);
        if (c.ok && !std::holds_alternative<NonNoetherian>(b))
          for (const auto& cur : noether_currents(ri, tr, b))
            c.ok = c.ok && reduce_on_shell(continuity_residual(cur), ri).is_zero();
        if (!c.ok) c.detail = tag_name(a) + " vs " + tag_name(b);
      });
    }
  }
  return out;
}

/// print -> parse reproduces every catalog system and transformation.
inline Checks dsl_roundtrip_checks() {
  Checks out;
  for (const auto& e : catalog()) {
    detail::guarded(out, 0, e.name + " dsl round trip", [&](Check& c) {
      c.ok = parse_system(print(e.system)) == e.system;
      for (const auto& t : e.transformations) c.ok = c.ok && parse_transformation(print(t, e.system), e.system) == t;
    });
  }
  return out;
}

/// Every recorded discrepancy is real: the claimed witness fails verification.
inline Checks discrepancy_checks() {
  Checks out;
  for (const auto& d : discrepancies()) {
    if (!d.claimed_witness) continue;
    detail::guarded(out, 0, d.system + "/" + d.transformation + " claimed witness rejected", [&](Check& c) {
      const auto& e = get_entry(d.system);
      c.ok = !verify_witness(first_variation(e.system, e.transformation(d.transformation)), *d.claimed_witness).is_zero();
    });
  }
  return out;
}

/// Seeded property checks: the Euler operator kills random total divergences,
/// and conjugation, differentiation and canonical form obey their algebra laws.
inline Checks property_checks(std::uint64_t seed = 20240601, int divergences = 1000, int laws = 200) {
  Checks out;
  RandomExprs rnd(seed);
  detail::guarded(out, 6, "euler operator annihilates " + std::to_string(divergences) + " random divergences", [&](Check& c) {
    c.ok = true;
    for (int k = 0; k < divergences && c.ok; ++k) {
      auto sys = rnd.system(rnd.uniform(1, 3));
      Expr div = rnd.total_divergence(sys, 3);
      for (const auto& f : sys.field_refs())
        if (!euler_expression(div, f).is_zero()) {
          c.ok = false;
          c.detail = "sample " + std::to_string(k) + ": " + print_expr(div);
        }
    }
  });
  detail::guarded(out, 6, "algebra laws on " + std::to_string(laws) + " random expressions", [&](Check& c) {
    c.ok = true;
    for (int k = 0; k < laws && c.ok; ++k) {
      auto sys = rnd.system(rnd.uniform(1, 3));
      Expr a = rnd.expr(sys, 2), b = rnd.expr(sys, 2), d = rnd.expr(sys, 2);
      const int mu = rnd.uniform(0, sys.dim), nu = rnd.uniform(0, sys.dim);
      auto law = [&](bool holds, const char* what) {
        if (!holds && c.ok) {
          c.ok = false;
          c.detail = std::string(what) + " fails on sample " + std::to_string(k);
        }
      };
      law(conj(conj(a)) == a, "conj(conj(a)) == a");
      law(conj(a * b) == conj(a) * conj(b), "conj(ab) == conj(a) conj(b)");
      law(conj(a + b) == conj(a) + conj(b), "conj(a+b) == conj(a)+conj(b)");
      law(conj(total_derivative(a, mu)) == total_derivative(conj(a), mu), "conj(D a) == D conj(a)");
      law(total_derivative(a * b, mu) == total_derivative(a, mu) * b + a * total_derivative(b, mu), "Leibniz rule");
      law(total_derivative(total_derivative(a, mu), nu) == total_derivative(total_derivative(a, nu), mu), "D_mu D_nu == D_nu D_mu");
      law(a + b == b + a && a * b == b * a, "commutativity");
      law((a * b) * d == a * (b * d), "associativity");
      law(a * (b + d) == a * b + a * d, "distributivity");
      law((a - a).is_zero(), "a - a == 0");
      law(euler_expression(total_derivative(a, mu), sys.field_refs().front()).is_zero(), "E(D a) == 0");
    }
  });
  return out;
}

inline Checks verify_all() {
  Checks out;
  auto add = [&](Checks c) { out.insert(out.end(), c.begin(), c.end()); };
  add(euler_checks());
  add(equivalence_checks());
  for (const auto& n : entry_names()) add(entry_checks(n));
  add(cross_representation_checks());
  add(dsl_roundtrip_checks());
  add(discrepancy_checks());
  add(property_checks());
  return out;
}

}  // namespace noether::verify
