#include "invbal/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace invbal {

const BatchRecord* SimTrace::find_batch(ProductId i, int j) const {
  for (const BatchRecord& b : batches) {
    if (b.product == i && b.index == j) return &b;
  }
  return nullptr;
}

Simulator::Simulator(const Instance& inst, const PolicySpec& spec, std::uint64_t seed,
                     RunOptions options)
    : inst_(&inst), policy_(make_policy(spec, inst)), rng_(seed), options_(options) {
  trace_.policy = spec;
  trace_.seed = seed;
}

namespace {

Period return_period(Period t, std::int64_t duration) {
  if (duration >= kInfiniteDuration) return kNoReturn;
  const std::int64_t back = static_cast<std::int64_t>(t) + duration;
  if (back >= kNoReturn) return kNoReturn;
  return static_cast<Period>(back);
}

}  // namespace

void Simulator::step() {
  const Period t = next_;
  if (t > inst_->horizon()) throw std::logic_error("simulation already finished");
  try {
    PeriodStartLog start;
    policy_->begin_period(t, inst_->shocks_at(t), options_.record_periods ? &start : nullptr);

    const ChoiceModel& model = inst_->consumer(t);
    OfferDecision offer = policy_->select(model, inst_->feasible());
    const double u = rng_.uniform(RngStream::Choice, static_cast<std::uint64_t>(t));
    const std::optional<ProductId> chosen = model.sample(offer.offered, u);

    double revenue = 0.0;
    if (chosen) {
      const Product& p = inst_->product(*chosen);
      Period back = kNoReturn;
      if (!p.unlimited) {
        if (const auto& sd = inst_->stochastic_duration()) {
          const double v = rng_.uniform_pos(RngStream::Duration, static_cast<std::uint64_t>(t));
          back = return_period(t, geometric1(sd->success_probability, v));
        } else {
          back = return_period(t, p.duration);
        }
      }
      const Allocation a = policy_->allocate(*chosen, t, back);
      revenue = a.revenue;
      trace_.sales.push_back({a.product, a.batch, t, a.revenue, a.level, back});
      trace_.total_revenue += revenue;
    }

    if (options_.record_periods) {
      PeriodRecord rec;
      rec.t = t;
      rec.shocks = std::move(start.shocks);
      rec.returns = std::move(start.returns);
      rec.offered = std::move(offer.offered);
      rec.designated = std::move(offer.designated);
      rec.reduced_prices = std::move(offer.reduced_prices);
      rec.chosen = chosen;
      rec.revenue = revenue;
      trace_.periods.push_back(std::move(rec));
    }
  } catch (const InvariantViolation& e) {
    throw InvariantViolation("period " + std::to_string(t) + ": " + e.what());
  }
  ++next_;
}

void Simulator::advance_to(Period t) {
  const Period last = std::min(t, inst_->horizon());
  while (next_ <= last) step();
}

SimTrace Simulator::finish() {
  trace_.horizon = inst_->horizon();
  trace_.ready_counts.clear();
  trace_.batches.clear();
  if (const auto* batched = dynamic_cast<const BatchedPolicy*>(policy_.get())) {
    for (std::size_t i = 0; i < inst_->num_products(); ++i) {
      const auto id = static_cast<ProductId>(i);
      trace_.ready_counts.push_back(batched->ready_count(id));
      const auto batches = batched->batches(id);
      for (std::size_t j = 0; j < batches.size(); ++j) {
        const Batch& b = batches[j];
        trace_.batches.push_back(
            {id, static_cast<int>(j), b.members, b.ready, b.ready_time, b.allocation_times});
      }
    }
  }
  return std::move(trace_);
}

SimTrace run(const Instance& inst, const PolicySpec& spec, std::uint64_t seed,
             RunOptions options) {
  Simulator sim(inst, spec, seed, options);
  sim.run_to_end();
  return sim.finish();
}

double RunStats::standard_error() const {
  return values.empty() ? 0.0 : sd / std::sqrt(static_cast<double>(values.size()));
}

RunStats summarize(const PolicySpec& spec, std::vector<double> values,
                   std::vector<std::uint64_t> seeds) {
  RunStats s;
  s.policy = spec;
  s.label = spec.label();
  s.values = std::move(values);
  s.seeds = std::move(seeds);
  if (s.values.empty()) return s;
  const double n = static_cast<double>(s.values.size());
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
  s.sd = s.values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

std::vector<RunStats> monte_carlo(const InstanceFactory& factory,
                                  std::span<const PolicySpec> policies, int replications,
                                  std::uint64_t base_seed, Execution execution) {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  const auto reps = static_cast<std::size_t>(replications);
  std::vector<std::vector<double>> values(policies.size(), std::vector<double>(reps));
  std::vector<std::uint64_t> seeds(reps);
  RunOptions lean{false};
  kernels::for_each_index(replications, execution, [&](std::int64_t k) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
    seeds[static_cast<std::size_t>(k)] = seed;
    const Instance inst = factory(seed);
    for (std::size_t p = 0; p < policies.size(); ++p) {
      values[p][static_cast<std::size_t>(k)] = run(inst, policies[p], seed, lean).total_revenue;
    }
  });
  std::vector<RunStats> out;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    out.push_back(summarize(policies[p], std::move(values[p]), seeds));
  }
  return out;
}

RunStats replicate(const Instance& inst, const PolicySpec& spec, int replications,
                   std::uint64_t base_seed, Execution execution) {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  const auto reps = static_cast<std::size_t>(replications);
  std::vector<double> values(reps);
  std::vector<std::uint64_t> seeds(reps);
  kernels::for_each_index(replications, execution, [&](std::int64_t k) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
    seeds[static_cast<std::size_t>(k)] = seed;
    values[static_cast<std::size_t>(k)] = run(inst, spec, seed, RunOptions{false}).total_revenue;
  });
  return summarize(spec, std::move(values), std::move(seeds));
}

}  // namespace invbal
