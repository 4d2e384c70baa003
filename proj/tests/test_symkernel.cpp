#include <gtest/gtest.h>

#include "print.hpp"
#include "noether/calculus.hpp"
#include "noether/random.hpp"
#include "noether/tree.hpp"

using namespace noether;

namespace {

const FieldRef u = real_field("u");
const FieldRef psi = complex_field("psi");

Orders ord(std::initializer_list<int> axes) {
  Orders o{};
  for (int a : axes) o[static_cast<std::size_t>(a)] += 1;
  return o;
}

}  // namespace

TEST(Coeff, Formatting) {
  EXPECT_EQ(Coeff::fraction(3, 2).str(), "3/2");
  EXPECT_EQ(Coeff::imag_unit().str(), "i");
  EXPECT_EQ((-Coeff::imag_unit()).str(), "-i");
  EXPECT_EQ((Coeff::fraction(3, 2) * Coeff::imag_unit()).str(), "3/2*i");
  EXPECT_EQ((Coeff::fraction(1, 2) + Coeff::fraction(3, 2) * Coeff::imag_unit()).str(), "(1/2+3/2*i)");
}

TEST(Coeff, ExactArithmetic) {
  Coeff third = Coeff::fraction(1, 3);
  EXPECT_EQ(third + third + third, Coeff(1));
  EXPECT_EQ(Coeff::imag_unit() * Coeff::imag_unit(), Coeff(-1));
  EXPECT_TRUE((Coeff::fraction(2, 4) - Coeff::fraction(1, 2)).is_zero());
}

TEST(Expr, CanonicalFormIgnoresConstructionOrder) {
  Expr a = Expr::jet(u) * Expr::coordinate(1) + Expr::parameter("e") * Expr::jet(u, ord({0}));
  Expr b = Expr::jet(u, ord({0})) * Expr::parameter("e") + Expr::coordinate(1) * Expr::jet(u);
  EXPECT_EQ(a, b);
  EXPECT_TRUE((a - b).is_zero());
  EXPECT_EQ(a.size(), 2u);
}

TEST(Expr, ZeroCoefficientsAreDropped) {
  Expr e = Expr::jet(u) + Expr(3) - Expr::jet(u) - Expr(3);
  EXPECT_TRUE(e.is_zero());
  EXPECT_EQ(e.size(), 0u);
}

TEST(Expr, NegativePowersOnlyForConstants) {
  Expr e = Expr::constant("m", -1) * Expr::constant("m", 2);
  EXPECT_EQ(e, Expr::constant("m"));
  EXPECT_TRUE((Expr::constant("m", -1) * Expr::constant("m")) == Expr(1));
}

TEST(Calculus, TotalDerivativeChainRule) {
  // D_x (u^2 x) = 2 u u_x x + u^2
  Expr e = Expr::jet(u).pow(2) * Expr::coordinate(1);
  Expr want = Expr(2) * Expr::jet(u) * Expr::jet(u, ord({1})) * Expr::coordinate(1) + Expr::jet(u).pow(2);
  EXPECT_EQ(total_derivative(e, 1), want);
  EXPECT_TRUE(total_derivative(Expr::parameter("e") * Expr::constant("c"), 0).is_zero());
}

TEST(Calculus, MultiIndexDerivative) {
  Expr e = Expr::jet(u);
  EXPECT_EQ(total_derivative(e, ord({0, 1, 1})), Expr::jet(u, ord({0, 1, 1})));
}

TEST(Calculus, PartialDerivative) {
  Expr e = Expr(3) * Expr::jet(u).pow(2) * Expr::jet(u, ord({1}));
  EXPECT_EQ(partial(e, Symbol::jet(u)), Expr(6) * Expr::jet(u) * Expr::jet(u, ord({1})));
  EXPECT_EQ(partial(e, Symbol::jet(u, ord({1}))), Expr(3) * Expr::jet(u).pow(2));
}

TEST(Calculus, ConjugationSwapsPairAndConjugatesCoefficients) {
  Expr e = Expr::imag() * Expr::jet(psi, ord({0})) * Expr::jet(psi.conj());
  EXPECT_EQ(conj(e), -Expr::imag() * Expr::jet(psi.conj(), ord({0})) * Expr::jet(psi));
  EXPECT_EQ(conj(Expr::jet(u)), Expr::jet(u));
}

TEST(Calculus, SubstituteCompletesConjugate) {
  FieldRef r = real_field("r"), s = real_field("s");
  Bindings b{{psi, Expr::jet(r) + Expr::imag() * Expr::jet(s)}};
  Expr got = substitute(Expr::jet(psi.conj()) * Expr::jet(psi), b);
  EXPECT_EQ(got, Expr::jet(r).pow(2) + Expr::jet(s).pow(2));
  // derivatives of the bound field follow the binding
  EXPECT_EQ(substitute(Expr::jet(psi, ord({1})), b), Expr::jet(r, ord({1})) + Expr::imag() * Expr::jet(s, ord({1})));
}

TEST(Calculus, TruncateFirstOrderDropsQuadraticParameterTerms) {
  Expr e = Expr::parameter("a") * Expr::jet(u) + Expr::parameter("a").pow(2) + Expr::parameter("a") * Expr::parameter("b") + Expr(5);
  EXPECT_EQ(truncate_first_order(e), Expr::parameter("a") * Expr::jet(u) + Expr(5));
}

TEST(Calculus, InvertConstant) {
  Expr c = Expr::rational(2, 3) * Expr::constant("hbar", 2) * Expr::constant("m", -1);
  EXPECT_EQ(invert_constant(c) * c, Expr(1));
  EXPECT_THROW(invert_constant(Expr::jet(u)), std::exception);
}

class AlgebraLaws : public ::testing::TestWithParam<int> {};

TEST_P(AlgebraLaws, HoldOnRandomExpressions) {
  RandomExprs rnd(static_cast<std::uint64_t>(GetParam()));
  for (int k = 0; k < 40; ++k) {
    auto sys = rnd.system(rnd.uniform(1, 3));
    Expr a = rnd.expr(sys, 2), b = rnd.expr(sys, 2), c = rnd.expr(sys, 2);
    int mu = rnd.uniform(0, sys.dim), nu = rnd.uniform(0, sys.dim);
    ASSERT_EQ(conj(conj(a)), a);
    ASSERT_EQ(conj(a * b), conj(a) * conj(b));
    ASSERT_EQ(conj(total_derivative(a, mu)), total_derivative(conj(a), mu));
    ASSERT_EQ(total_derivative(a * b, mu), total_derivative(a, mu) * b + a * total_derivative(b, mu));
    ASSERT_EQ(total_derivative(total_derivative(a, mu), nu), total_derivative(total_derivative(a, nu), mu));
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a + b, b + a);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, AlgebraLaws, ::testing::Values(1, 2, 3, 4, 5));
