#include "invbal/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "invbal/generators.hpp"
#include "oracles.hpp"

namespace invbal {
namespace {

const Penalty kExp = Penalty::exponential();

TEST(GammaBound, DegeneratePoint) {
  const GammaBound b = gamma_bound(kExp, 1, 1);
  EXPECT_NEAR(b.gamma1, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(b.gamma2, 0.5, 1e-12);
  EXPECT_NEAR(b.value, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(b.argmin1, 0.0);
  EXPECT_EQ(b.argmin2, 0.0);
}

TEST(GammaBound, ApproachesOneMinusInverseE) {
  double previous = 0.0;
  for (std::int64_t c0 : {100, 10000, 1000000}) {
    const auto gamma = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(c0))));
    const GammaBound b = gamma_bound(kExp, gamma, c0);
    EXPECT_GE(b.value, previous);
    EXPECT_LE(b.value, 1.0);
    EXPECT_DOUBLE_EQ(b.value, std::min(b.gamma1, b.gamma2));
    previous = b.value;
    EXPECT_LT(gamma_bound_instability(kExp, gamma, c0), 1e-6);
  }
  EXPECT_GE(previous, 0.622);
  EXPECT_NEAR(previous, 1.0 - std::exp(-1.0), 0.01);
}

TEST(GammaBound, MatchesDirectQuadratureAtAnInteriorPoint) {
  // gamma = c0 = 4 with the identity penalty: int_a^1 y dy = (1 - a^2) / 2.
  const Penalty id = Penalty::identity();
  const GammaBound b = gamma_bound(id, 4, 4);
  double direct = 1.0;
  for (int k = 0; k <= 300000; ++k) {
    const double x = 0.75 * k / 300000.0;
    const double a = x + 0.25;
    direct = std::min(direct, (1.0 - x) / (0.25 + 2.0 * (1.0 - x) + (1.0 - a * a) / 2.0));
  }
  EXPECT_NEAR(b.gamma1, direct, 1e-9);
}

TEST(GammaBound, SerialAndParallelAgree) {
  GammaBoundOptions serial;
  GammaBoundOptions parallel;
  parallel.execution = Execution::Parallel;
  const GammaBound a = gamma_bound(kExp, 7, 50, serial);
  const GammaBound b = gamma_bound(kExp, 7, 50, parallel);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.argmin1, b.argmin1);
}

TEST(GammaBound, RejectsBadInput) {
  EXPECT_THROW(gamma_bound(Penalty::step(), 1, 1), std::invalid_argument);
  EXPECT_THROW(gamma_bound(kExp, 5, 4), std::domain_error);
  EXPECT_THROW(gamma_bound(kExp, 0, 4), std::invalid_argument);
  EXPECT_NO_THROW(gamma_bound(Penalty::identity(), 1, 1));
}

Instance one_product(std::int64_t duration, Period horizon = 2) {
  Instance inst({Product{3.0, 1, false, duration}}, horizon);
  const auto yes = std::make_shared<const ChoiceModel>(ChoiceModel::singleton({0}));
  for (Period t = 1; t <= horizon; ++t) inst.set_consumer(t, yes);
  return inst;
}

double lp_value(const Instance& inst, int gamma) {
  const SimTrace tr = run(inst, PolicySpec::bib(kExp, gamma), 0);
  return solve_lp(build_lp(tr, inst, gamma)).value;
}

TEST(BuildLp, FirstBatchRowWithoutReturns) {
  // c = 1 never returns, but the first-batch row admits c + gamma = 2 sales.
  EXPECT_NEAR(lp_value(one_product(kInfiniteDuration), 1), 6.0, 1e-9);
}

TEST(BuildLp, FullReuseWithUnitDuration) {
  EXPECT_NEAR(lp_value(one_product(1), 1), 6.0, 1e-9);
}

TEST(BuildLp, FirstBatchCarriesGammaExtraUnits) {
  // c = 2 and gamma = 2: the first-batch row has rhs 4 over six consumers.
  Instance inst({Product{3.0, 2, false, kInfiniteDuration}}, 6);
  const auto yes = std::make_shared<const ChoiceModel>(ChoiceModel::singleton({0}));
  for (Period t = 1; t <= 6; ++t) inst.set_consumer(t, yes);
  EXPECT_NEAR(lp_value(inst, 2), 12.0, 1e-9);
}

TEST(BuildLp, VariablesRespectReadyTimes) {
  Instance inst = one_product(kInfiniteDuration, 6);
  inst.set_shock(0, 3, 2);
  const SimTrace tr = run(inst, PolicySpec::bib(kExp, 1), 0);
  const LpProblem lp = build_lp(tr, inst, 1);
  ASSERT_EQ(tr.ready_counts[0], 3);
  for (const LpVariable& v : lp.variables) {
    for (const BatchChoice& bc : v.assortment) {
      if (bc.batch > 0) EXPECT_GE(v.t, 3);
    }
  }
  // Rows: one per window start for each batch, plus one per period.
  std::size_t later = 0;
  for (const LpRow& r : lp.rows) later += r.kind == LpRowKind::LaterBatch;
  EXPECT_EQ(later, 2u * 4u);
  EXPECT_NEAR(solve_lp(lp).value, 3.0 * 4.0, 1e-9);  // c + gamma + gamma + gamma
}

TEST(BuildLp, GuardsAndContracts) {
  const Instance big = one_product(kInfiniteDuration, kLpMaxHorizon + 1);
  EXPECT_THROW(build_lp(run(big, PolicySpec::bib(kExp, 1), 0), big, 1), InstanceTooLarge);
  const Instance small = one_product(1);
  EXPECT_THROW(build_lp(run(small, PolicySpec::greed(), 0), small, 1), std::invalid_argument);
  EXPECT_THROW(build_lp(run(small, PolicySpec::bib(kExp, 2), 0), small, 1), std::invalid_argument);
}

LpProblem dense_lp(const std::vector<double>& c, const std::vector<std::vector<double>>& a,
                   const std::vector<double>& b) {
  LpProblem lp;
  lp.objective = c;
  for (std::size_t r = 0; r < a.size(); ++r) {
    LpRow row;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (a[r][j] != 0.0) row.coefficients.emplace_back(static_cast<int>(j), a[r][j]);
    }
    row.rhs = b[r];
    lp.rows.push_back(row);
  }
  lp.variables.resize(c.size());
  return lp;
}

TEST(SolveLp, SingleBound) {
  EXPECT_DOUBLE_EQ(solve_lp(dense_lp({1.0}, {{1.0}}, {1.0})).value, 1.0);
}

TEST(SolveLp, DegenerateRedundantRowsTerminate) {
  // The classic cycling example under the largest-coefficient rule.
  const std::vector<double> c{10, -57, -9, -24};
  const std::vector<std::vector<double>> a{
      {0.5, -5.5, -2.5, 9}, {0.5, -1.5, -0.5, 1}, {1, 0, 0, 0}, {1, 0, 0, 0}};
  const LpSolution s = solve_lp(dense_lp(c, a, {0, 0, 1, 1}));
  EXPECT_NEAR(s.value, 1.0, 1e-9);
  EXPECT_LT(s.iterations, 100);
}

TEST(SolveLp, IterationCapRaises) {
  EXPECT_THROW(solve_lp(dense_lp({1.0, 1.0}, {{1.0, 1.0}}, {1.0}), 0), LpNumericalFailure);
}

TEST(SolveLp, AgreesWithVertexEnumeration) {
  const CounterRng rng(2024);
  for (std::uint32_t k = 0; k < 100; ++k) {
    RngCursor cur(rng, RngStream::Tiny, k);
    const auto n = static_cast<std::size_t>(2 + cur.uniform() * 4);  // 2..5
    const auto m = static_cast<std::size_t>(2 + cur.uniform() * 5);  // 2..6
    std::vector<double> c(n);
    for (double& v : c) v = std::round(cur.uniform(-2.0, 5.0) * 4.0) / 4.0;
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    std::vector<double> b(m);
    for (auto& row : a) {
      for (double& v : row) v = cur.bernoulli(0.3) ? 0.0 : std::round(cur.uniform(-1.0, 4.0) * 2.0) / 2.0;
    }
    for (double& v : b) v = std::round(cur.uniform(0.0, 6.0));
    // Keep it bounded: a box row over every variable.
    a.emplace_back(n, 1.0);
    b.push_back(10.0);
    const double oracle = testing::vertex_enumeration_lp(c, a, b);
    const LpSolution s = solve_lp(dense_lp(c, a, b));
    EXPECT_NEAR(s.value, oracle, 1e-6) << "lp " << k;
    EXPECT_LE(lp_violation(dense_lp(c, a, b), s.x), 1e-7);
  }
}

TinyParams lemma_params() {
  TinyParams p;
  p.shock_probability = 0.05;
  p.max_shock = 1;
  p.min_inventory = 3;
  return p;
}

TEST(BuildLp, DominatesOfflineOptimumOnTinyInstances) {
  const TinyParams p = lemma_params();
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 40; ++seed) {
    ASSERT_LT(seed, 400u);
    const Instance inst = gen_tiny(p, seed);
    const int gamma = 1 + static_cast<int>(seed % 3);
    const SimTrace tr = run(inst, PolicySpec::bib(kExp, gamma), seed);
    LpProblem lp;
    try {
      lp = build_lp(tr, inst, gamma);
    } catch (const InstanceTooLarge&) {
      continue;
    }
    const double opt = testing::OfflineOptimum(inst).solve();
    const double value = solve_lp(lp).value;
    EXPECT_GE(value, opt - 1e-7) << "seed " << seed;
    EXPECT_GE(opt, tr.total_revenue - 1e-9);
    ++checked;
  }
}

TEST(Certify, NoSaleTraceIsVacuous) {
  Instance inst({Product{1.0, 2, false, kInfiniteDuration}}, 3);
  const auto nobody = std::make_shared<const ChoiceModel>(ChoiceModel::singleton({}));
  for (Period t = 1; t <= 3; ++t) inst.set_consumer(t, nobody);
  const DualCertificate cert = certify_run(run(inst, PolicySpec::bib(kExp, 1), 0), inst);
  EXPECT_EQ(cert.dual, 0.0);
  EXPECT_EQ(cert.primal, 0.0);
  EXPECT_TRUE(cert.ok());
}

TEST(Certify, HandComputedSingleBatch) {
  // c = 1, d = infinity: one sale, label 1, theta = r (psi(1) - psi(0)).
  Instance inst = one_product(kInfiniteDuration, 2);
  const DualCertificate cert = certify_run(run(inst, PolicySpec::bib(kExp, 1), 0), inst);
  ASSERT_EQ(cert.batches.size(), 1u);
  const BatchDual& b = cert.batches[0];
  ASSERT_EQ(b.labels.size(), 1u);
  EXPECT_EQ(b.labels[0], 1);
  EXPECT_NEAR(b.theta[0], 3.0, 1e-12);
  EXPECT_NEAR(cert.lambda[0], 3.0, 1e-12);
  EXPECT_NEAR(cert.dual, 3.0 + 2.0 * 3.0, 1e-12);
  EXPECT_TRUE(cert.ok());
}

TEST(Certify, ChecksHoldOnRandomPaths) {
  for (bool deterministic : {true, false}) {
    TinyParams p;
    p.deterministic = deterministic;
    p.min_inventory = 3;
    p.shock_probability = 0.4;
    p.max_shock = 3;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const Instance inst = gen_tiny(p, seed);
      const int gamma = 1 + static_cast<int>(seed % 3);
      const double bound = gamma_bound(kExp, gamma, inst.min_initial_inventory()).value;
      for (std::uint64_t rep = 0; rep < 5; ++rep) {
        const DualCertificate cert = certify_run(run(inst, PolicySpec::bib(kExp, gamma), rep), inst, bound);
        EXPECT_TRUE(cert.ok()) << cert.failure << " seed " << seed;
        for (const BatchDual& b : cert.batches) {
          for (double g : b.g) {
            EXPECT_GE(g, 0.0);
            EXPECT_LE(g, 1.0);
          }
          for (double th : b.theta) EXPECT_GE(th, 0.0);
        }
      }
    }
  }
}

TEST(Certify, HoldsOnRandomMnlWithStochasticDurations) {
  RandomMnlParams p;
  p.horizon = 600;
  p.initial_inventory = 10;
  p.seed = 5;
  const Instance inst = apply_stochastic_durations(gen_random_mnl(p), 0.01);
  const DualCertificate cert = certify_run(run(inst, PolicySpec::bib(kExp, 3), 1), inst);
  EXPECT_TRUE(cert.ok()) << cert.failure;
  EXPECT_GT(cert.dual, cert.primal);
}

TEST(Certify, RejectsScalarTraces) {
  const Instance inst = one_product(1);
  EXPECT_THROW(certify_run(run(inst, PolicySpec::scib(kExp), 0), inst), std::invalid_argument);
}

TEST(DualExpectation, DeterministicSingleReplicationIsPointwise) {
  TinyParams p;
  p.max_horizon = 12;
  p.min_inventory = 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = gen_tiny(p, seed);
    const DualExpectationReport r = dual_expectation_check(inst, kExp, 2, 1, seed);
    EXPECT_TRUE(r.ok());
    for (const auto& s : r.samples) {
      EXPECT_EQ(s.standard_error, 0.0);
      EXPECT_GE(s.mean_slack, -1e-9);
    }
  }
}

TEST(DualExpectation, MnlWithinThreeStandardErrors) {
  TinyParams p;
  p.deterministic = false;
  p.max_horizon = 12;
  p.min_inventory = 2;
  const Instance inst = gen_tiny(p, 7);
  const DualExpectationReport r = dual_expectation_check(inst, kExp, 2, 10000, 1);
  EXPECT_FALSE(r.samples.empty());
  EXPECT_TRUE(r.ok());
}

TEST(DualExpectation, RejectsLargeInstances) {
  const Instance inst = one_product(1, 16);
  EXPECT_THROW(dual_expectation_check(inst, kExp, 1, 1), InstanceTooLarge);
}

}  // namespace
}  // namespace invbal
