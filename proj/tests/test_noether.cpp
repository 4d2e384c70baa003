#include <gtest/gtest.h>

#include "print.hpp"
#include "noether/catalog.hpp"
#include "noether/noether.hpp"

using namespace noether;
using namespace noether::build;

namespace {

const CatalogEntry& primed() { return get_entry("schrodinger_primed"); }
const CatalogEntry& standard() { return get_entry("schrodinger_standard"); }
const CatalogEntry& em() { return get_entry("maxwell_free"); }

std::vector<NoetherCurrent> currents_of(const CatalogEntry& e, const std::string& t) {
  const auto& tr = e.transformation(t);
  return noether_currents(e.system, tr, classify(e.system, tr));
}

const NoetherCurrent& pick(const std::vector<NoetherCurrent>& cs, const std::string& p) {
  for (const auto& c : cs)
    if (c.parameter == p) return c;
  throw std::out_of_range(p);
}

}  // namespace

TEST(Classify, PrimedShiftIsQuasiWithTimeWitness) {
  auto cls = classify(primed().system, primed().transformation("shift"));
  ASSERT_TRUE(std::holds_alternative<Quasi>(cls));
  const auto& w = std::get<Quasi>(cls).witness;
  EXPECT_EQ(w.components[0], Expr(2) * hbar() * par("eps_I") * Expr::jet(psiR()));
  for (int k = 1; k <= 3; ++k) EXPECT_TRUE(w.components[static_cast<std::size_t>(k)].is_zero());
}

TEST(Classify, StandardPhaseIsStrict) {
  EXPECT_TRUE(std::holds_alternative<Strict>(classify(standard().system, standard().transformation("phase"))));
}

TEST(Classify, ScaleIsNotNoetherian) {
  auto cls = classify(standard().system, standard().transformation("scale"));
  ASSERT_TRUE(std::holds_alternative<NonNoetherian>(cls));
  EXPECT_EQ(std::get<NonNoetherian>(cls).residual, Expr(2) * par("gamma") * standard().system.lagrangian);
  EXPECT_THROW(noether_currents(standard().system, standard().transformation("scale"), cls), NotNoetherian);
}

TEST(Classify, ScalarShiftIsStrict) {
  const auto& e = get_entry("massless_scalar");
  EXPECT_TRUE(std::holds_alternative<Strict>(classify(e.system, e.transformation("shift"))));
}

TEST(Classify, TensorShiftWitnessIsMinusAEps) {
  auto cls = classify(em().system, em().transformation("tensor_shift"));
  ASSERT_TRUE(std::holds_alternative<Quasi>(cls));
  const auto& w = std::get<Quasi>(cls).witness;
  for (int mu = 0; mu < 4; ++mu) {
    Expr want;
    for (int nu = 0; nu < 4; ++nu) want -= Expr::jet(A(nu)) * eps_upper(mu, nu);
    EXPECT_EQ(w.components[static_cast<std::size_t>(mu)], want) << mu;
  }
}

TEST(Classify, QuarterWitnessFailsVerification) {
  const auto& t = em().transformation("tensor_shift");
  for (const auto& d : discrepancies()) {
    if (!d.claimed_witness) continue;
    EXPECT_FALSE(verify_witness(first_variation(em().system, t), *d.claimed_witness).is_zero());
  }
}

TEST(Classify, InvalidTransformationsAreRejected) {
  const auto& sys = standard().system;
  Transformation nonlinear{"sq", {"a"}, {{psi(), par("a") * par("a")}}};
  EXPECT_THROW(classify(sys, nonlinear), std::invalid_argument);
  Transformation undeclared{"u", {"a"}, {{psi(), par("b")}}};
  EXPECT_THROW(classify(sys, undeclared), std::invalid_argument);
  Transformation inconsistent{"c", {"a"}, {{psi(), par("a")}, {psis(), Expr(2) * par("a")}}};
  EXPECT_THROW(classify(sys, inconsistent), std::invalid_argument);
  Transformation unknown_field{"f", {"a"}, {{real_field("phi"), par("a")}}};
  EXPECT_THROW(classify(sys, unknown_field), std::invalid_argument);
}

TEST(Classify, UnpairedShiftVariesConjugateOnly) {
  const auto& t = standard().transformation("conj_shift");
  EXPECT_FALSE(t.paired);
  EXPECT_TRUE(t.variation(psi()).is_zero());
  Expr dl = first_variation(standard().system, t);
  EXPECT_FALSE(dl.is_zero());
  EXPECT_FALSE(dl.symbols(SymbolKind::Jet).empty());
}

TEST(Witness, EveryQuasiClassificationIsSound) {
  for (const auto& e : catalog())
    for (const auto& t : e.transformations) {
      auto cls = classify(e.system, t);
      if (const auto* q = std::get_if<Quasi>(&cls)) {
        EXPECT_TRUE(verify_witness(first_variation(e.system, t), q->witness).is_zero()) << e.name << "/" << t.name;
      }
    }
}

TEST(Witness, NonDivergenceHasNoWitness) {
  EXPECT_FALSE(find_witness(standard().system, par("g") * standard().system.lagrangian).has_value());
}

TEST(Currents, SecondSymmetryOfPrimedDensity) {
  auto cs = currents_of(primed(), "linear_x");
  const Expr hm = hbar(2) * mass(-1);
  const Expr R = Expr::jet(psiR());
  for (int l = 1; l <= 3; ++l) {
    const auto& c = pick(cs, lin_param('R', l));
    EXPECT_EQ(c.rho(), Expr(2) * hbar() * Expr::jet(psiI()) * x(l));
    for (int k = 1; k <= 3; ++k)
      EXPECT_EQ(c.j(k), -hm * (d(psiR(), {k}) * x(l) - (k == l ? R : Expr()))) << "k=" << k << " l=" << l;
  }
}

TEST(Currents, ShiftCurrentOfMaxwellIsMinusF) {
  auto cs = currents_of(em(), "A_shift");
  for (int nu = 0; nu < 4; ++nu) {
    const auto& c = pick(cs, "eps_" + std::to_string(nu));
    for (int mu = 0; mu < 4; ++mu) EXPECT_EQ(c.j(mu), -F_upper(mu, nu));
  }
}

TEST(Currents, IdentityHoldsOffShellForEveryPair) {
  for (const auto& e : catalog())
    for (const auto& t : e.transformations) {
      auto cls = classify(e.system, t);
      if (std::holds_alternative<NonNoetherian>(cls)) continue;
      for (const auto& c : noether_currents(e.system, t, cls)) {
        EXPECT_TRUE(noether_identity_defect(e.system, t, c).is_zero()) << e.name << "/" << t.name;
        EXPECT_TRUE(reduce_on_shell(continuity_residual(c), e.system).is_zero()) << e.name << "/" << t.name;
      }
    }
}

TEST(OnShell, NonConservedExpressionSurvives) {
  // D_t of the density alone is not zero on shell
  const auto& sys = standard().system;
  Expr e = total_derivative(Expr::jet(psis()) * Expr::jet(psi()), 1);
  EXPECT_FALSE(reduce_on_shell(e, sys).is_zero());
}

TEST(OnShell, TimeDerivativeIsEliminated) {
  const auto& sys = standard().system;
  // i hbar psi_t = -hbar^2/2m lap psi, so psi_t - i hbar/2m lap psi vanishes on shell
  Expr lap;
  for (int k = 1; k <= 3; ++k) lap += d(psi(), {k, k});
  Expr e = d(psi(), {0}) - I() * half() * hbar() * mass(-1) * lap;
  EXPECT_TRUE(reduce_on_shell(e, sys).is_zero());
  EXPECT_TRUE(reduce_on_shell(e * x(2), sys).is_zero());
}

TEST(Coincidence, PrimedShiftCoincidesWithConstantCoefficient) {
  for (const auto& c : currents_of(primed(), "shift")) {
    auto r = coincides_with_eom(c, primed().system);
    EXPECT_TRUE(r.coincides);
    EXPECT_TRUE(r.constant_coefficient);
  }
}

TEST(Coincidence, SecondSymmetryCoefficientIsCoordinate) {
  auto c = pick(currents_of(primed(), "linear_x"), lin_param('I', 2));
  auto r = coincides_with_eom(c, primed().system);
  ASSERT_TRUE(r.coincides);
  EXPECT_FALSE(r.constant_coefficient);
  ASSERT_EQ(r.coefficients.size(), 1u);
  EXPECT_EQ(r.coefficients[0].first, psiI());
  EXPECT_EQ(r.coefficients[0].second, -x(2));
}

TEST(Coincidence, TensorShiftDoesNotCoincide) {
  for (const auto& c : currents_of(em(), "tensor_shift")) {
    auto r = coincides_with_eom(c, em().system);
    EXPECT_TRUE(r.representable);
    EXPECT_FALSE(r.coincides);
    EXPECT_EQ(r.coefficients.size(), 2u);
  }
}

TEST(Coincidence, PhaseResidualIsNotLinearInEquations) {
  auto c = pick(currents_of(standard(), "phase"), "theta");
  auto r = coincides_with_eom(c, standard().system);
  EXPECT_FALSE(r.representable);
  EXPECT_FALSE(r.remainder.is_zero());
}

TEST(Gauge, MaxwellDensityIsGaugeInvariant) {
  // A_mu -> A_mu + d_mu chi with chi = x0 x1 leaves F and L unchanged
  const auto& sys = em().system;
  Bindings b;
  Expr chi = x(0) * x(1);
  for (int mu = 0; mu < 4; ++mu) b.emplace(A(mu), Expr::jet(A(mu)) + total_derivative(chi, mu));
  EXPECT_EQ(substitute(sys.lagrangian, b), sys.lagrangian);
  EXPECT_TRUE(std::holds_alternative<Strict>(classify(sys, em().transformation("gauge"))));
}

TEST(Gauge, GaugeCurrentIsConservedOnShell) {
  for (const auto& c : currents_of(em(), "gauge")) {
    EXPECT_TRUE(reduce_on_shell(continuity_residual(c), em().system).is_zero());
    auto r = coincides_with_eom(c, em().system);
    EXPECT_TRUE(r.representable);
    EXPECT_EQ(r.coefficients.size(), 2u);
  }
}
