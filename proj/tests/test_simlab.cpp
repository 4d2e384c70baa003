#include <gtest/gtest.h>

#include <fstream>
#include <numbers>

#include "noether/catalog.hpp"
#include "noether/experiment.hpp"

using namespace noether;
using namespace noether::sim;

namespace {

Grid line(int n, double l) { return Grid{1, {n}, {l}}; }

json load(const std::string& name) {
  std::ifstream in(std::string(NOETHER_SOURCE_DIR) + "/configs/" + name);
  return json::parse(in);
}

json without_metadata(json j) {
  j.erase("metadata");
  return j;
}

const ChargeDef& charge(const std::string& sys, const std::string& name) {
  for (const auto& c : get_entry(sys).charges)
    if (c.name == name) return c;
  throw std::out_of_range(name);
}

}  // namespace

TEST(Sum, PairwiseIsDeterministicAndAccurate) {
  std::vector<double> v(100000, 0.1);
  double a = pairwise_sum(v), b = pairwise_sum(v);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a, 10000.0, 1e-9);
}

TEST(Grid, NodesAreCentered) {
  Grid g = line(8, 4.0);
  EXPECT_DOUBLE_EQ(g.dx(0), 0.5);
  EXPECT_DOUBLE_EQ(g.node(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(g.node(0, 4), 0.0);
  EXPECT_THROW(line(6, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(line(8, -1.0).validate(), std::invalid_argument);
}

TEST(Gaussian, OracleMatchesQuadrature) {
  GaussianSpec s{{0.7}, 1.3, {0.9}, 1.1};
  auto st = init_gaussian(line(1024, 64), s);
  auto o = gaussian_oracle(s);
  auto q = measure_charges(st, {charge("schrodinger_standard", "Q").integrand, charge("schrodinger_standard", "Q_1").integrand,
                                charge("schrodinger_standard", "norm").integrand});
  EXPECT_LT(std::abs(q[0] - o.q), 1e-10 * std::abs(o.q) + 1e-14);
  EXPECT_LT(std::abs(q[1] - o.q_moment[0]), 1e-10 * std::abs(o.q) * s.sigma + 1e-14);
  EXPECT_NEAR(q[2].real(), o.norm, 1e-10 * o.norm);
}

TEST(Gaussian, MarginIsEnforced) {
  EXPECT_THROW(init_gaussian(line(64, 64), GaussianSpec{{0.0}, 1.0, {0.0}, 1}), MarginViolation);
  EXPECT_THROW(init_gaussian(line(1024, 64), GaussianSpec{{25.0}, 1.0, {0.0}, 1}), MarginViolation);
  EXPECT_NO_THROW(init_gaussian(line(1024, 64), GaussianSpec{{20.0}, 1.5, {0.0}, 1}));
}

TEST(Schrodinger, PropagatorIsUnitary) {
  auto st = init_gaussian(line(512, 64), GaussianSpec{{-3.0}, 1.0, {2.0}, 1});
  const Expr norm = charge("schrodinger_standard", "norm").integrand;
  double n0 = measure_charges(st, {norm})[0].real();
  SchrodingerStepper(st.grid, 0.05, 1, 1).evolve(st, 200);
  EXPECT_NEAR(st.t, 10.0, 1e-12);
  EXPECT_LT(relative_drift(measure_charges(st, {norm})[0], n0), 1e-12);
}

TEST(Schrodinger, MatchesFreeGaussianSpreading) {
  // |psi|^2 width grows as sigma^2 (1 + (hbar t / 2 m sigma^2)^2)
  const double sigma = 1.0, t = 2.0;
  auto st = init_gaussian(line(1024, 64), GaussianSpec{{0.0}, sigma, {0.0}, 1});
  SchrodingerStepper(st.grid, 0.01, 1, 1).evolve(st, 200);
  std::vector<double> w(st.psi.size()), x2(st.psi.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double x = st.grid.coordinate(i, 0);
    w[i] = std::norm(st.psi[i]);
    x2[i] = x * x * w[i];
  }
  double var = pairwise_sum(x2) / pairwise_sum(w);
  EXPECT_NEAR(var, sigma * sigma * (1 + std::pow(t / (2 * sigma * sigma), 2)), 1e-10);
}

TEST(Schrodinger, TimeReversalAndSuperposition) {
  auto a = init_gaussian(line(512, 64), GaussianSpec{{-4.0}, 1.0, {1.0}, 1});
  auto b = init_gaussian(line(512, 64), GaussianSpec{{5.0}, 1.5, {-0.5}, 0.5});
  EXPECT_LT(time_reversal_defect(a, 300, 0.02), 1e-12);
  EXPECT_LT(superposition_check(a, b, 300, 0.02), 1e-12);
}

TEST(Schrodinger, ChargeEvaluatorUsesCatalogExpressions) {
  // Q of the primed pair equals 2 Re Q of the complex field with eps_R, i.e. int psi_R dx
  GaussianSpec s{{1.0}, 1.0, {0.5}, 1};
  auto st = init_gaussian(line(1024, 64), s);
  auto q = measure_charges(st, {charge("schrodinger_standard", "Q").integrand});
  auto qr = measure_charges(st, {charge("schrodinger_primed", "Q_R").integrand, charge("schrodinger_primed", "Q_I").integrand});
  EXPECT_NEAR(qr[0].real(), q[0].real(), 1e-12);
  EXPECT_NEAR(qr[1].real(), q[0].imag(), 1e-12);
}

TEST(Balance, FullBoxDefectIsDrift) {
  auto st = init_gaussian(line(256, 64), GaussianSpec{{-5.0}, 1.0, {1.5}, 1});
  const auto& c = charge("schrodinger_standard", "norm");
  auto cur = sim::detail::charge_current(get_entry("schrodinger_standard"), c);
  ASSERT_EQ(cur.size(), 4u);
  auto r = measure_balance(st, cur[0], cur[1], 0.04, 100, Region{-32.0, 32.0}, {{"hbar", 1}, {"m", 1}});
  EXPECT_TRUE(r.full_box);
  EXPECT_EQ(r.flux, cplx(0));
  EXPECT_LT(std::abs(r.defect), 1e-12);
}

TEST(Balance, HalfBoxDefectIsSmallAgainstFlux) {
  auto st = init_gaussian(line(256, 64), GaussianSpec{{-5.0}, 1.0, {1.5}, 1});
  const auto& c = charge("schrodinger_standard", "norm");
  auto cur = sim::detail::charge_current(get_entry("schrodinger_standard"), c);
  ConstantValues k{{"hbar", 1}, {"m", 1}};
  auto coarse = measure_balance(st, cur[0], cur[1], 0.2, 20, Region{0.0, 32.0}, k);
  auto fine = measure_balance(st, cur[0], cur[1], 0.1, 40, Region{0.0, 32.0}, k);
  EXPECT_FALSE(coarse.full_box);
  EXPECT_GT(std::abs(coarse.flux), 0.1);
  EXPECT_LT(std::abs(coarse.defect), 1e-5 * std::abs(coarse.flux));
  EXPECT_LT(std::abs(fine.defect), 1e-5 * std::abs(fine.flux));
  EXPECT_THROW(measure_balance(st, cur[0], cur[1], 0.1, 4, Region{0.1, 32.0}, k), std::invalid_argument);
}

TEST(Maxwell, CourantConditionIsChecked) {
  Grid g = line(64, 64);
  std::vector<double> z(64, 0.0);
  EXPECT_THROW(init_maxwell(g, z, z, 1.5), CourantViolation);
  auto s = init_maxwell(g, z, z, 0.5);
  EXPECT_THROW(step_maxwell(s, 1.01), CourantViolation);
  EXPECT_THROW(step_maxwell(s, -0.5), CourantViolation);
}

TEST(Maxwell, IntegralOfEIsConserved) {
  Grid g = line(256, 64);
  std::vector<double> a(256, 0.0), e(256);
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = std::exp(-std::pow(g.node(0, static_cast<int>(j)), 2));
  const double dt = 0.125;
  auto s = init_maxwell(g, a, e, dt);
  const double e0 = maxwell_integral_e(s);
  for (int n = 0; n < 2000; ++n) step_maxwell(s, dt);
  EXPECT_LT(std::abs(maxwell_integral_e(s) - e0) / std::abs(e0), 1e-13);
}

TEST(Experiments, StandingWaveConfigPasses) {
  auto r = run_experiment(load("maxwell_standing.json"));
  EXPECT_TRUE(r.pass) << r.summary.dump(2);
  EXPECT_FALSE(r.rows.empty());
  EXPECT_EQ(r.columns.size(), r.rows.front().size());
}

TEST(Experiments, RunsAreReproducible) {
  auto cfg = load("schrodinger_balance.json");
  auto a = run_experiment(cfg), b = run_experiment(cfg);
  EXPECT_EQ(without_metadata(a.summary), without_metadata(b.summary));
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_TRUE(a.summary["metadata"].contains("generated_at"));
}

TEST(Experiments, BalanceOrderIsFourth) {
  auto r = run_experiment(load("schrodinger_balance.json"));
  EXPECT_TRUE(r.pass);
  bool found = false;
  for (const auto& c : r.summary["checks"])
    if (c["name"] == "balance.order") {
      found = true;
      EXPECT_GT(c["value"].get<double>(), 3.5);
    }
  EXPECT_TRUE(found);
}

TEST(Experiments, MissingThresholdTargetFails) {
  auto cfg = load("maxwell_standing.json");
  cfg["thresholds"]["no.such.check"] = {{"max", 1.0}};
  auto r = run_experiment(cfg);
  EXPECT_FALSE(r.pass);
}

TEST(Experiments, ConfigErrorsNamePaths) {
  auto cfg = load("schrodinger_balance.json");
  cfg["grid"]["points"] = json::array({100});
  cfg["dt"] = "fast";
  cfg["charges"] = json::array({"Q", "bogus"});
  try {
    parse_experiment(cfg);
    FAIL();
  } catch (const ConfigError& e) {
    std::string all = e.what();
    EXPECT_NE(all.find("grid.points[0]"), std::string::npos) << all;
    EXPECT_NE(all.find("dt"), std::string::npos) << all;
    EXPECT_NE(all.find("charges[1]"), std::string::npos) << all;
  }
}

TEST(Experiments, CsvHasHeaderAndRows) {
  auto r = run_experiment(load("maxwell_standing.json"));
  std::ostringstream os;
  write_csv(os, r);
  std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')).find(r.columns.front()), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), r.rows.size() + 1);
}
