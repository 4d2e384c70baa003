#include <gtest/gtest.h>

#include "print.hpp"
#include "noether/catalog.hpp"
#include "noether/random.hpp"
#include "noether/variational.hpp"

using namespace noether;

namespace {

std::map<FieldRef, Expr> record_map(const FieldSystem& s) {
  std::map<FieldRef, Expr> m;
  for (const auto& [f, e] : euler_record(s)) m[f] = e;
  return m;
}

}  // namespace

TEST(Euler, StandardDensityGivesFreeSchrodingerEquation) {
  auto got = record_map(get_entry("schrodinger_standard").system);
  for (const auto& [f, e] : expected_euler("schrodinger_standard")) EXPECT_EQ(got.at(f), e) << f.display();
}

TEST(Euler, PrimedDensityGivesCoupledRealEquations) {
  auto got = record_map(get_entry("schrodinger_primed").system);
  for (const auto& [f, e] : expected_euler("schrodinger_primed")) EXPECT_EQ(got.at(f), e) << f.display();
}

TEST(Euler, MaxwellEquationsAreDivergenceOfF) {
  const auto& sys = get_entry("maxwell_free").system;
  auto got = record_map(sys);
  for (int nu = 0; nu < 4; ++nu) {
    Expr want;
    for (int mu = 0; mu < 4; ++mu) want += total_derivative(build::F_upper(mu, nu), mu);
    EXPECT_EQ(got.at(build::A(nu)), want);
  }
}

TEST(Euler, SecondOrderTermsCarrySign) {
  // L = u * u_xx  ->  E = 2 u_xx
  FieldRef u = real_field("u");
  Orders xx{};
  xx[1] = 2;
  Expr l = Expr::jet(u) * Expr::jet(u, xx);
  EXPECT_EQ(euler_expression(l, u), Expr(2) * Expr::jet(u, xx));
}

class RandomDivergences : public ::testing::TestWithParam<int> {};

TEST_P(RandomDivergences, AreAnnihilated) {
  RandomExprs rnd(static_cast<std::uint64_t>(1000 + GetParam()));
  for (int k = 0; k < 100; ++k) {
    auto sys = rnd.system(rnd.uniform(1, 3));
    Expr d = rnd.total_divergence(sys, 3);
    ASSERT_LE(d.max_jet_order(), 3);
    ASSERT_TRUE(is_total_divergence(d));
    for (const auto& f : sys.field_refs()) ASSERT_TRUE(euler_expression(d, f).is_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(TenSeeds, RandomDivergences, ::testing::Range(0, 10));

TEST(Euler, NonDivergenceIsDetected) {
  FieldRef u = real_field("u");
  EXPECT_FALSE(is_total_divergence(Expr::jet(u).pow(2)));
  Orders x{};
  x[1] = 1;
  EXPECT_FALSE(is_total_divergence(Expr::jet(u) * Expr::jet(u, x) * Expr::coordinate(1)));
}

TEST(Equivalence, SchrodingerFamilyIsPairwiseEquivalent) {
  const auto fam = schrodinger_family();
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      const auto& a = get_entry(fam[i]).system;
      const auto& b = get_entry(fam[j]).system;
      EXPECT_TRUE(lagrangians_equivalent(a, b)) << fam[i] << " vs " << fam[j];
      EXPECT_EQ(record_map(a), record_map(b));
    }
}

TEST(Equivalence, MixedOrderPairIsEquivalent) {
  // first-order standard density vs second-order tilde density
  const auto& a = get_entry("schrodinger_standard").system;
  const auto& b = get_entry("schrodinger_tilde").system;
  EXPECT_NE(a.lagrangian.max_jet_order(), b.lagrangian.max_jet_order());
  EXPECT_TRUE(lagrangians_equivalent(a, b));
}

TEST(Equivalence, ScaledDensityIsNotEquivalent) {
  FieldSystem a = get_entry("schrodinger_standard").system;
  FieldSystem b = a;
  b.lagrangian = Expr(2) * a.lagrangian;
  EXPECT_FALSE(lagrangians_equivalent(a, b));
}

TEST(Equivalence, MismatchedFieldsThrow) {
  EXPECT_THROW(lagrangians_equivalent(get_entry("schrodinger_standard").system, get_entry("schrodinger_primed").system),
               MismatchedSystems);
}

TEST(Equivalence, PrimedMatchesDecomposedFamily) {
  const auto& primed = get_entry("schrodinger_primed").system;
  for (const auto& n : schrodinger_family()) {
    auto ri = real_imag_decompose(get_entry(n).system);
    EXPECT_TRUE(lagrangians_equivalent(ri, primed)) << n;
  }
}
