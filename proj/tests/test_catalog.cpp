#include <gtest/gtest.h>

#include "print.hpp"
#include "noether/catalog.hpp"
#include "noether/verify.hpp"

using namespace noether;
using namespace noether::build;

class Regeneration : public ::testing::TestWithParam<std::string> {};

TEST_P(Regeneration, EngineReproducesExpectations) {
  auto checks = verify::entry_checks(GetParam());
  EXPECT_FALSE(checks.empty());
  for (const auto& c : checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}

INSTANTIATE_TEST_SUITE_P(Catalog, Regeneration, ::testing::ValuesIn(entry_names()),
                         [](const auto& info) { return info.param; });

TEST(Catalog, UnknownNamesThrow) {
  EXPECT_THROW(get_entry("schrodinger_missing"), std::out_of_range);
  EXPECT_THROW(expected_results("schrodinger_missing"), std::out_of_range);
  EXPECT_THROW(get_entry("maxwell_free").transformation("boost"), std::out_of_range);
}

TEST(Catalog, EntriesValidate) {
  for (const auto& e : catalog()) {
    EXPECT_NO_THROW(e.system.validate()) << e.name;
    for (const auto& t : e.transformations) EXPECT_NO_THROW(t.validate(e.system)) << e.name << "/" << t.name;
  }
}

TEST(Catalog, ChargeIntegrandsAreParameterFree) {
  for (const auto& e : catalog())
    for (const auto& c : e.charges) {
      EXPECT_TRUE(c.integrand.symbols(SymbolKind::Parameter).empty()) << e.name << "/" << c.name;
      EXPECT_FALSE(c.decay_requirement.empty());
    }
}

TEST(Catalog, ChargeCombinationsReproduceIntegrands) {
  // sum over parameters of combination * rho equals the charge integrand
  for (const auto& e : catalog())
    for (const auto& c : e.charges) {
      const auto& t = e.transformation(c.transformation);
      auto cur = noether_currents(e.system, t, classify(e.system, t));
      Expr rho;
      for (const auto& [p, w] : c.combination)
        for (const auto& nc : cur)
          if (nc.parameter == p) rho += w * nc.rho();
      EXPECT_EQ(rho, c.integrand) << e.name << "/" << c.name;
    }
}

TEST(Decompose, StandardTimeTermBecomesRealForm) {
  auto ri = real_imag_decompose(get_entry("schrodinger_standard").system);
  EXPECT_EQ(ri.name, "schrodinger_standard_ri");
  Expr time_part;
  for (const auto& [m, c] : ri.lagrangian.terms())
    if (m.degree_of_kind(SymbolKind::Jet) == 2 && Expr(m, c).max_jet_order() == 1) {
      bool has_time = false;
      for (const auto& [s, p] : m.factors()) has_time = has_time || (s.is_jet() && s.orders[0] > 0);
      if (has_time) time_part.add_term(m, c);
    }
  EXPECT_EQ(time_part, hbar() * (d(psiR(), {0}) * Expr::jet(psiI()) - Expr::jet(psiR()) * d(psiI(), {0})));
}

TEST(Decompose, AddingTimeDerivativeGivesPrimedDensity) {
  auto ri = real_imag_decompose(get_entry("schrodinger_standard").system);
  Expr l = ri.lagrangian + total_derivative(hbar() * Expr::jet(psiR()) * Expr::jet(psiI()), 0);
  EXPECT_EQ(l, get_entry("schrodinger_primed").system.lagrangian);
}

TEST(Decompose, RealSystemsAreUnchanged) {
  const auto& s = get_entry("maxwell_free").system;
  EXPECT_EQ(real_imag_decompose(s), s);
  const auto& p = get_entry("schrodinger_primed").system;
  EXPECT_EQ(real_imag_decompose(p), p);
}

TEST(Decompose, ShiftMapsToRealShift) {
  const auto& e = get_entry("schrodinger_standard");
  auto t = real_imag_decompose(e.transformation("shift"), e.system);
  EXPECT_EQ(t.variation(psiR()), par("eps_R"));
  EXPECT_EQ(t.variation(psiI()), par("eps_I"));
}

TEST(CrossRepresentation, TagsAndConservationAgree) {
  for (const auto& c : verify::cross_representation_checks()) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;
}

TEST(Discrepancies, EveryRecordNamesAKnownPair) {
  auto ds = discrepancies();
  EXPECT_EQ(ds.size(), 3u);
  for (const auto& d : ds) {
    EXPECT_NO_THROW(get_entry(d.system).transformation(d.transformation));
    EXPECT_FALSE(d.note.empty());
  }
}
