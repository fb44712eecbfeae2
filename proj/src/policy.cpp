#include "invbal/policy.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>
#include <string>

namespace invbal {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Bib: return "bib";
    case PolicyKind::Scib: return "scib";
    case PolicyKind::Dcib: return "dcib";
    case PolicyKind::Usib: return "usib";
    case PolicyKind::Greed: return "greed";
  }
  return "unknown";
}

std::string PolicySpec::label() const {
  std::string s(to_string(kind));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) {
    return static_cast<char>(std::toupper(ch));
  });
  return s;
}

void PolicySpec::validate_for(const Instance& inst) const {
  if (kind == PolicyKind::Bib) {
    if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
    const std::int64_t c0 = inst.min_initial_inventory();
    if (c0 > 0 && gamma > c0) {
      throw std::invalid_argument("gamma must not exceed the smallest initial inventory (" +
                                  std::to_string(c0) + ")");
    }
  }
}

void Policy::schedule_return(Period time, ProductId i, int batch) {
  if (time == kNoReturn) return;
  returns_.push({time, i, batch});
}

std::vector<Policy::PendingReturn> Policy::due_returns(Period t) {
  std::vector<PendingReturn> out;
  while (!returns_.empty() && returns_.top().time <= t) {
    out.push_back(returns_.top());
    returns_.pop();
  }
  return out;
}

// ---------------------------------------------------------------- batched

bool BatchedPolicy::LevelOrder::operator()(const LevelKey& x, const LevelKey& y) const {
  const std::int64_t xm = x.members > 0 ? x.members : 1;
  const std::int64_t ym = y.members > 0 ? y.members : 1;
  const std::int64_t xa = x.members > 0 ? x.available : 0;
  const std::int64_t ya = y.members > 0 ? y.available : 0;
  // Exact comparison of xa/xm against ya/ym; batch sizes stay far below 2^31.
  const std::int64_t lhs = xa * ym;
  const std::int64_t rhs = ya * xm;
  if (lhs != rhs) return lhs > rhs;
  return x.batch < y.batch;
}

BatchedPolicy::BatchedPolicy(PolicySpec spec, const Instance& inst)
    : Policy(std::move(spec), inst) {
  spec_.validate_for(inst);
  extend_products(inst);
}

void BatchedPolicy::add_ledger(const Product& p) {
  Ledger ledger;
  ledger.unlimited = p.unlimited;
  Batch first;
  first.members = p.unlimited ? 0 : p.initial_inventory;
  first.ready = true;
  first.ready_time = 1;
  ledger.batches.push_back(first);
  ledger.batches.push_back(Batch{});
  ledgers_.push_back(std::move(ledger));
  reindex(ledgers_.back(), 0, true);
}

void BatchedPolicy::extend_products(const Instance& inst) {
  inst_ = &inst;
  while (ledgers_.size() < inst.num_products()) {
    add_ledger(inst.product(static_cast<ProductId>(ledgers_.size())));
  }
}

void BatchedPolicy::reindex(Ledger& ledger, int j, bool insert) {
  const Batch& b = ledger.batches[static_cast<std::size_t>(j)];
  const LevelKey key{b.available(), b.members, j};
  if (insert) {
    ledger.by_level.insert(key);
  } else {
    ledger.by_level.erase(key);
  }
}

void BatchedPolicy::add_units(Ledger& ledger, std::int64_t units, Period t) {
  const std::int64_t gamma = spec_.batch_threshold();
  while (units > 0) {
    Batch& charging = ledger.batches.back();
    const std::int64_t take = std::min(units, gamma - charging.members);
    charging.members += take;
    units -= take;
    if (charging.members >= gamma) {
      charging.ready = true;
      charging.ready_time = t;
      reindex(ledger, static_cast<int>(ledger.batches.size()) - 1, true);
      ledger.batches.push_back(Batch{});
    }
  }
}

std::int64_t BatchedPolicy::remove_units(Ledger& ledger, std::int64_t units) {
  std::int64_t removed = 0;
  Batch& charging = ledger.batches.back();
  const std::int64_t from_charging = std::min(units, charging.available());
  charging.members -= from_charging;
  removed += from_charging;
  for (int j = static_cast<int>(ledger.batches.size()) - 2; j >= 0 && removed < units; --j) {
    Batch& b = ledger.batches[static_cast<std::size_t>(j)];
    const std::int64_t take = std::min(units - removed, b.available());
    if (take == 0) continue;
    reindex(ledger, j, false);
    b.members -= take;
    reindex(ledger, j, true);
    removed += take;
  }
  return removed;
}

void BatchedPolicy::begin_period(Period t, std::span<const Shock> shocks, PeriodStartLog* log) {
  for (const PendingReturn& r : due_returns(t)) {
    Ledger& ledger = ledgers_[static_cast<std::size_t>(r.product)];
    Batch& b = ledger.batches[static_cast<std::size_t>(r.batch)];
    reindex(ledger, r.batch, false);
    --b.outstanding;
    reindex(ledger, r.batch, true);
    if (log) log->returns.push_back({r.product, r.batch});
  }
  for (const Shock& s : shocks) {
    Ledger& ledger = ledgers_[static_cast<std::size_t>(s.product)];
    std::int64_t applied = s.units;
    if (!ledger.unlimited) {
      if (s.units > 0) {
        add_units(ledger, s.units, t);
      } else if (s.units < 0) {
        applied = -remove_units(ledger, -s.units);
      }
    }
    if (log) log->shocks.push_back({s.product, s.units, applied});
  }
}

int BatchedPolicy::ready_count(ProductId i) const {
  return static_cast<int>(ledgers_.at(i).batches.size()) - 1;
}

int BatchedPolicy::designated_batch(ProductId i) const {
  const Ledger& ledger = ledgers_.at(i);
  if (ledger.unlimited) return 0;
  return ledger.by_level.empty() ? -1 : ledger.by_level.begin()->batch;
}

double BatchedPolicy::best_level(ProductId i) const {
  const Ledger& ledger = ledgers_.at(i);
  if (ledger.unlimited) return 1.0;
  const int j = designated_batch(i);
  return j < 0 ? 0.0 : ledger.batches[static_cast<std::size_t>(j)].level();
}

std::int64_t BatchedPolicy::available(ProductId i) const {
  const Ledger& ledger = ledgers_.at(i);
  if (ledger.unlimited) return std::numeric_limits<std::int64_t>::max();
  std::int64_t total = 0;
  for (std::size_t j = 0; j + 1 < ledger.batches.size(); ++j) {
    total += ledger.batches[j].available();
  }
  return total;
}

OfferDecision BatchedPolicy::select(const ChoiceModel& model,
                                    const FeasibleCollection& feasible) {
  reduced_scratch_.resize(ledgers_.size(), 0.0);
  for (ProductId i : model.support()) {
    reduced_scratch_[static_cast<std::size_t>(i)] =
        inst_->product(i).price * spec_.psi(best_level(i));
  }
  OfferDecision out;
  out.offered = assortment_oracle(model, reduced_scratch_, feasible);
  for (ProductId i : out.offered) {
    out.designated.push_back(designated_batch(i));
    out.reduced_prices.push_back(reduced_scratch_[static_cast<std::size_t>(i)]);
  }
  return out;
}

Allocation BatchedPolicy::allocate(ProductId i, Period t, Period return_time) {
  Ledger& ledger = ledgers_.at(i);
  const int j = designated_batch(i);
  if (j < 0) throw InvariantViolation("no ready batch for product " + std::to_string(i));
  Batch& b = ledger.batches[static_cast<std::size_t>(j)];
  Allocation a{i, j, t, inst_->product(i).price, best_level(i)};
  if (!ledger.unlimited) {
    if (b.available() <= 0) {
      throw InvariantViolation("allocation from an exhausted batch of product " +
                               std::to_string(i));
    }
    reindex(ledger, j, false);
    ++b.outstanding;
    reindex(ledger, j, true);
    schedule_return(return_time, i, j);
  }
  b.allocation_times.push_back(t);
  return a;
}

// ----------------------------------------------------------------- scalar

ScalarPolicy::ScalarPolicy(PolicySpec spec, const Instance& inst)
    : Policy(std::move(spec), inst) {
  extend_products(inst);
}

void ScalarPolicy::extend_products(const Instance& inst) {
  inst_ = &inst;
  while (states_.size() < inst.num_products()) {
    const Product& p = inst.product(static_cast<ProductId>(states_.size()));
    states_.push_back({p.initial_inventory, p.initial_inventory, 0, p.unlimited});
  }
}

void ScalarPolicy::begin_period(Period t, std::span<const Shock> shocks, PeriodStartLog* log) {
  for (const PendingReturn& r : due_returns(t)) {
    ++states_[static_cast<std::size_t>(r.product)].on_hand;
    if (log) log->returns.push_back({r.product, -1});
  }
  for (const Shock& s : shocks) {
    State& st = states_[static_cast<std::size_t>(s.product)];
    std::int64_t applied = s.units;
    if (!st.unlimited) {
      if (applied < 0) applied = -std::min(st.on_hand, -applied);
      st.on_hand += applied;
      st.cumulative_shock += applied;
    }
    if (log) log->shocks.push_back({s.product, s.units, applied});
  }
}

double ScalarPolicy::ratio(ProductId i) const {
  const State& st = states_.at(i);
  if (st.unlimited) return 1.0;
  const auto indicator = [&] { return st.on_hand > 0 ? 1.0 : 0.0; };
  switch (spec_.kind) {
    case PolicyKind::Greed:
      return indicator();
    case PolicyKind::Dcib: {
      const std::int64_t denom = st.initial + st.cumulative_shock;
      if (denom <= 0) return indicator();
      return std::clamp(static_cast<double>(st.on_hand) / denom, 0.0, 1.0);
    }
    default:
      if (st.initial <= 0) return indicator();
      return std::min(static_cast<double>(st.on_hand) / st.initial, 1.0);
  }
}

std::int64_t ScalarPolicy::available(ProductId i) const {
  const State& st = states_.at(i);
  return st.unlimited ? std::numeric_limits<std::int64_t>::max() : st.on_hand;
}

OfferDecision ScalarPolicy::select(const ChoiceModel& model,
                                   const FeasibleCollection& feasible) {
  reduced_scratch_.resize(states_.size(), 0.0);
  const bool greedy = spec_.kind == PolicyKind::Greed;
  for (ProductId i : model.support()) {
    const double x = ratio(i);
    reduced_scratch_[static_cast<std::size_t>(i)] =
        inst_->product(i).price * (greedy ? x : spec_.psi(x));
  }
  OfferDecision out;
  out.offered = assortment_oracle(model, reduced_scratch_, feasible);
  for (ProductId i : out.offered) {
    out.designated.push_back(-1);
    out.reduced_prices.push_back(reduced_scratch_[static_cast<std::size_t>(i)]);
  }
  return out;
}

Allocation ScalarPolicy::allocate(ProductId i, Period t, Period return_time) {
  State& st = states_.at(i);
  Allocation a{i, -1, t, inst_->product(i).price, ratio(i)};
  if (!st.unlimited) {
    if (st.on_hand <= 0) {
      throw InvariantViolation("allocation of product " + std::to_string(i) +
                               " with no stock on hand");
    }
    --st.on_hand;
    schedule_return(return_time, i, -1);
  }
  return a;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Instance& inst) {
  if (spec.batched()) return std::make_unique<BatchedPolicy>(spec, inst);
  return std::make_unique<ScalarPolicy>(spec, inst);
}

}  // namespace invbal
