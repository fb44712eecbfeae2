#include "invbal/policy.hpp"

#include <gtest/gtest.h>

#include <memory>

#include "invbal/engine.hpp"
#include "invbal/generators.hpp"

namespace invbal {
namespace {

const Penalty kExp = Penalty::exponential();

Instance one_product(std::int64_t c, std::int64_t d, Period horizon, double price = 2.0) {
  Instance inst({Product{price, c, false, d}}, horizon);
  const auto accepts = std::make_shared<const ChoiceModel>(ChoiceModel::singleton({0}));
  for (Period t = 1; t <= horizon; ++t) inst.set_consumer(t, accepts);
  return inst;
}

TEST(BatchLedger, ChargingBatchFlipsAtThreshold) {
  Instance inst = one_product(3, kInfiniteDuration, 5);
  BatchedPolicy p(PolicySpec::bib(kExp, 3), inst);
  const Shock two{0, 2};
  p.begin_period(1, std::span(&two, 1), nullptr);
  EXPECT_EQ(p.ready_count(0), 1);
  EXPECT_EQ(p.batches(0).back().members, 2);
  EXPECT_FALSE(p.batches(0).back().ready);

  const Shock one{0, 1};
  p.begin_period(2, std::span(&one, 1), nullptr);
  ASSERT_EQ(p.ready_count(0), 2);
  EXPECT_TRUE(p.batches(0)[1].ready);
  EXPECT_EQ(p.batches(0)[1].ready_time, 2);
  EXPECT_EQ(p.batches(0)[1].members, 3);
  EXPECT_EQ(p.batches(0).back().members, 0);
  EXPECT_FALSE(p.batches(0).back().ready);
}

TEST(BatchLedger, LargeShockFillsSeveralBatches) {
  Instance inst = one_product(2, kInfiniteDuration, 3);
  BatchedPolicy p(PolicySpec::bib(kExp, 2), inst);
  const Shock five{0, 5};
  p.begin_period(1, std::span(&five, 1), nullptr);
  EXPECT_EQ(p.ready_count(0), 3);
  EXPECT_EQ(p.batches(0).back().members, 1);
  EXPECT_EQ(p.available(0), 2 + 4);
}

TEST(BatchLedger, ZeroShockLeavesLedgerUnchanged) {
  Instance inst = one_product(3, kInfiniteDuration, 3);
  BatchedPolicy p(PolicySpec::bib(kExp, 2), inst);
  const Shock none{0, 0};
  PeriodStartLog log;
  p.begin_period(1, std::span(&none, 1), &log);
  EXPECT_EQ(p.ready_count(0), 1);
  EXPECT_EQ(p.batches(0).back().members, 0);
  EXPECT_TRUE(log.returns.empty());
}

TEST(BatchLedger, ReturnRestoresLevel) {
  Instance inst = one_product(5, 4, 10);
  BatchedPolicy p(PolicySpec::bib(kExp, 1), inst);
  p.begin_period(1, {}, nullptr);
  const Allocation a = p.allocate(0, 1, 5);
  EXPECT_EQ(a.batch, 0);
  EXPECT_DOUBLE_EQ(p.batches(0)[0].level(), 0.8);
  for (Period t = 2; t <= 4; ++t) p.begin_period(t, {}, nullptr);
  EXPECT_DOUBLE_EQ(p.batches(0)[0].level(), 0.8);
  PeriodStartLog log;
  p.begin_period(5, {}, &log);
  ASSERT_EQ(log.returns.size(), 1u);
  EXPECT_EQ(log.returns[0].batch, 0);
  EXPECT_DOUBLE_EQ(p.batches(0)[0].level(), 1.0);
}

TEST(BatchLedger, ReturnsNeverCountTowardThreshold) {
  Instance inst = one_product(3, 1, 5);
  BatchedPolicy p(PolicySpec::bib(kExp, 3), inst);
  const Shock two{0, 2};
  p.begin_period(1, std::span(&two, 1), nullptr);
  p.allocate(0, 1, 2);
  p.begin_period(2, {}, nullptr);
  EXPECT_EQ(p.ready_count(0), 1);
  EXPECT_EQ(p.batches(0).back().members, 2);
}

TEST(BibSelect, FreshProductHasFullPrice) {
  Instance inst = one_product(4, kInfiniteDuration, 2, 3.5);
  BatchedPolicy p(PolicySpec::bib(kExp, 2), inst);
  p.begin_period(1, {}, nullptr);
  const OfferDecision d = p.select(inst.consumer(1), inst.feasible());
  ASSERT_EQ(d.offered, (Assortment{0}));
  EXPECT_EQ(d.reduced_prices[0], 3.5);
  EXPECT_EQ(d.designated[0], 0);
}

TEST(BibSelect, FullyOutstandingProductIsExcluded) {
  Instance inst = one_product(1, 10, 3);
  BatchedPolicy p(PolicySpec::bib(kExp, 1), inst);
  p.begin_period(1, {}, nullptr);
  p.allocate(0, 1, 11);
  p.begin_period(2, {}, nullptr);
  EXPECT_EQ(p.best_level(0), 0.0);
  EXPECT_TRUE(p.select(inst.consumer(2), inst.feasible()).offered.empty());
  EXPECT_THROW(p.allocate(0, 2, 12), InvariantViolation);
}

TEST(BibSelect, DesignatesHighestLevelWithSmallestIndexOnTies) {
  Instance inst = one_product(2, kInfiniteDuration, 5);
  BatchedPolicy p(PolicySpec::bib(kExp, 2), inst);
  const Shock two{0, 2};
  p.begin_period(1, std::span(&two, 1), nullptr);
  EXPECT_EQ(p.designated_batch(0), 0);
  p.allocate(0, 1, kNoReturn);
  EXPECT_EQ(p.designated_batch(0), 1);
  p.allocate(0, 1, kNoReturn);
  EXPECT_EQ(p.designated_batch(0), 0);
}

TEST(BibAllocate, SaleDecrementsDesignatedBatch) {
  Instance inst = one_product(3, kInfiniteDuration, 2, 4.0);
  BatchedPolicy p(PolicySpec::bib(kExp, 3), inst);
  p.begin_period(1, {}, nullptr);
  const Allocation a = p.allocate(0, 1, kNoReturn);
  EXPECT_EQ(a.revenue, 4.0);
  EXPECT_EQ(a.level, 1.0);
  EXPECT_EQ(p.batches(0)[0].available(), 2);
  EXPECT_EQ(p.batches(0)[0].allocation_times, (std::vector<Period>{1}));
}

TEST(ScalarPolicies, DcibWithoutShocksMatchesScib) {
  Instance inst = one_product(10, kInfiniteDuration, 8);
  ScalarPolicy scib(PolicySpec::scib(kExp), inst);
  ScalarPolicy dcib(PolicySpec::dcib(kExp), inst);
  for (Period t = 1; t <= 8; ++t) {
    scib.begin_period(t, {}, nullptr);
    dcib.begin_period(t, {}, nullptr);
    EXPECT_DOUBLE_EQ(scib.ratio(0), dcib.ratio(0));
    scib.allocate(0, t, kNoReturn);
    dcib.allocate(0, t, kNoReturn);
  }
}

TEST(ScalarPolicies, ShockDefinitions) {
  Instance inst = one_product(10, kInfiniteDuration, 3);
  ScalarPolicy scib(PolicySpec::scib(kExp), inst);
  ScalarPolicy dcib(PolicySpec::dcib(kExp), inst);
  ScalarPolicy greed(PolicySpec::greed(), inst);
  const Shock five{0, 5};
  for (Policy* p : {static_cast<Policy*>(&scib), static_cast<Policy*>(&dcib),
                    static_cast<Policy*>(&greed)}) {
    p->begin_period(1, {}, nullptr);
    for (int k = 0; k < 6; ++k) p->allocate(0, 1, kNoReturn);
    p->begin_period(2, std::span(&five, 1), nullptr);
    EXPECT_EQ(p->available(0), 9);
  }
  EXPECT_DOUBLE_EQ(scib.ratio(0), 0.9);
  EXPECT_DOUBLE_EQ(dcib.ratio(0), 9.0 / 15.0);
  EXPECT_DOUBLE_EQ(greed.ratio(0), 1.0);
  EXPECT_EQ(dcib.cumulative_shock(0), 5);
}

TEST(ScalarPolicies, NegativeShockClampsAtZero) {
  Instance inst = one_product(3, kInfiniteDuration, 3);
  inst.set_negative_shocks(true);
  ScalarPolicy scib(PolicySpec::scib(kExp), inst);
  BatchedPolicy bib(PolicySpec::bib(kExp, 2), inst);
  const Shock minus{0, -5};
  for (Policy* p : {static_cast<Policy*>(&scib), static_cast<Policy*>(&bib)}) {
    PeriodStartLog log;
    p->begin_period(1, std::span(&minus, 1), &log);
    ASSERT_EQ(log.shocks.size(), 1u);
    EXPECT_EQ(log.shocks[0].requested, -5);
    EXPECT_EQ(log.shocks[0].applied, -3);
    EXPECT_EQ(p->available(0), 0);
  }
}

TEST(PolicySpecTest, GammaRange) {
  Instance inst = one_product(3, kInfiniteDuration, 2);
  EXPECT_THROW(PolicySpec::bib(kExp, 4).validate_for(inst), std::invalid_argument);
  EXPECT_THROW(PolicySpec::bib(kExp, 0).validate_for(inst), std::invalid_argument);
  EXPECT_NO_THROW(PolicySpec::bib(kExp, 3).validate_for(inst));
  EXPECT_EQ(PolicySpec::usib(kExp).batch_threshold(), 1);
  EXPECT_EQ(PolicySpec::bib(kExp, 7).label(), "BIB");
}

TEST(UsibOnGbar, FreshUnitBatchIsDesignated) {
  StylizedParams params;
  params.family = StylizedFamily::GBar;
  params.c = 6;
  params.epsilon = 0.1;
  const Instance inst = gen_stylized(params, PolicySpec::usib(kExp));
  const SimTrace tr = run(inst, PolicySpec::usib(kExp), 0);
  for (const PeriodRecord& rec : tr.periods) {
    if (rec.t > 6 && (rec.t - 6) % 2 == 1) {
      ASSERT_FALSE(rec.offered.empty());
      EXPECT_EQ(rec.offered, (Assortment{0})) << "t=" << rec.t;
      EXPECT_EQ(rec.reduced_prices[0], 1.0);
      EXPECT_EQ(rec.chosen, 0);
    }
  }
}

Instance random_instance(std::uint64_t seed, bool negative, bool stochastic) {
  RandomMnlParams p;
  p.seed = seed;
  p.horizon = 300;
  p.initial_inventory = 4;
  p.shock_success = 0.8;
  p.kappa = static_cast<double>(seed % 4);
  Instance inst = gen_random_mnl(p);
  if (negative) inst = apply_negative_shocks(std::move(inst), 0.3, seed);
  if (stochastic) inst = apply_stochastic_durations(std::move(inst), 0.05);
  return inst;
}

TEST(PolicyProperties, FeasibilityAndConservation) {
  const PolicySpec specs[] = {PolicySpec::bib(kExp, 3), PolicySpec::usib(kExp), PolicySpec::scib(kExp),
                              PolicySpec::dcib(kExp), PolicySpec::greed()};
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Instance inst = random_instance(seed, seed % 3 == 1, seed % 3 == 2);
    for (const PolicySpec& spec : specs) {
      Simulator sim(inst, spec, seed);
      while (!sim.done()) {
        sim.step();
        for (std::size_t i = 0; i < inst.num_products(); ++i) {
          ASSERT_GE(sim.policy().available(static_cast<ProductId>(i)), 0);
        }
        if (const auto* b = dynamic_cast<const BatchedPolicy*>(&sim.policy())) {
          for (std::size_t i = 0; i < inst.num_products(); ++i) {
            for (const Batch& batch : b->batches(static_cast<ProductId>(i))) {
              ASSERT_GE(batch.outstanding, 0);
              ASSERT_EQ(batch.members, batch.available() + batch.outstanding);
              ASSERT_LE(batch.outstanding, batch.members);
            }
          }
        }
      }
    }
  }
}

TEST(PolicyEquivalence, UsibMatchesBibWithUnitBatches) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = random_instance(seed, false, seed % 2 == 1);
    const SimTrace a = run(inst, PolicySpec::usib(kExp), seed);
    const SimTrace b = run(inst, PolicySpec::bib(kExp, 1), seed);
    ASSERT_EQ(a.sales, b.sales) << "seed " << seed;
    ASSERT_EQ(a.total_revenue, b.total_revenue);
    ASSERT_EQ(a.batches, b.batches);
  }
}

TEST(PolicyEquivalence, GreedMatchesStepBalancing) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = random_instance(seed, seed % 2 == 1, false);
    const SimTrace a = run(inst, PolicySpec::greed(), seed);
    const SimTrace b = run(inst, PolicySpec::scib(Penalty::step()), seed);
    ASSERT_EQ(a.periods.size(), b.periods.size());
    for (std::size_t k = 0; k < a.periods.size(); ++k) {
      ASSERT_EQ(a.periods[k].offered, b.periods[k].offered) << "seed " << seed << " t " << k + 1;
    }
    ASSERT_EQ(a.total_revenue, b.total_revenue);
  }
}

}  // namespace
}  // namespace invbal
