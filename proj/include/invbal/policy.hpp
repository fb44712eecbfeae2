#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "invbal/choice.hpp"
#include "invbal/instance.hpp"
#include "invbal/penalty.hpp"

namespace invbal {

/// Raised when an allocation would break inventory feasibility.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class PolicyKind { Bib, Scib, Dcib, Usib, Greed };

std::string_view to_string(PolicyKind kind);

struct PolicySpec {
  PolicyKind kind = PolicyKind::Bib;
  Penalty psi = Penalty::exponential();
  /// Batch-size threshold; only meaningful for Bib (Usib is pinned to 1).
  int gamma = 1;

  static PolicySpec bib(Penalty psi, int gamma) { return {PolicyKind::Bib, psi, gamma}; }
  static PolicySpec scib(Penalty psi) { return {PolicyKind::Scib, psi, 1}; }
  static PolicySpec dcib(Penalty psi) { return {PolicyKind::Dcib, psi, 1}; }
  static PolicySpec usib(Penalty psi) { return {PolicyKind::Usib, psi, 1}; }
  static PolicySpec greed() { return {PolicyKind::Greed, Penalty::step(), 1}; }

  bool batched() const { return kind == PolicyKind::Bib || kind == PolicyKind::Usib; }
  int batch_threshold() const { return kind == PolicyKind::Usib ? 1 : gamma; }
  /// Short name such as "BIB" or "SCIB".
  std::string label() const;

  /// Throws std::invalid_argument if the spec cannot run on `inst`.
  void validate_for(const Instance& inst) const;

  bool operator==(const PolicySpec&) const = default;
};

/// Sentinel for "this unit never comes back".
inline constexpr Period kNoReturn = std::numeric_limits<Period>::max();

struct ShockRecord {
  ProductId product = 0;
  std::int64_t requested = 0;
  /// Differs from `requested` only when a negative shock was clamped at 0.
  std::int64_t applied = 0;
  bool operator==(const ShockRecord&) const = default;
};

struct ReturnRecord {
  ProductId product = 0;
  /// Batch the unit rejoined (0-based), -1 for scalar policies.
  int batch = -1;
  bool operator==(const ReturnRecord&) const = default;
};

struct PeriodStartLog {
  std::vector<ReturnRecord> returns;
  std::vector<ShockRecord> shocks;
};

struct OfferDecision {
  Assortment offered;
  /// Designated batch per offered product (0-based), -1 for scalar policies.
  std::vector<int> designated;
  /// Reduced price of each offered product.
  std::vector<double> reduced_prices;
};

struct Allocation {
  ProductId product = 0;
  int batch = -1;
  Period t = 0;
  double revenue = 0.0;
  /// Normalized level of the designated batch (or scalar ratio) before the sale.
  double level = 1.0;
};

/// One unit group of the batched ledger.
struct Batch {
  std::int64_t members = 0;
  std::int64_t outstanding = 0;
  bool ready = false;
  Period ready_time = 0;
  std::vector<Period> allocation_times;

  std::int64_t available() const { return members - outstanding; }
  /// f = 1 - outstanding / members; 0 for an empty batch.
  double level() const {
    return members > 0 ? 1.0 - static_cast<double>(outstanding) / members : 0.0;
  }
};

/// Online policy state bound to one replication.
///
/// Within a period the engine calls begin_period (returns, then shocks),
/// select, and allocate if the consumer bought something.
class Policy {
 public:
  virtual ~Policy() = default;

  const PolicySpec& spec() const { return spec_; }

  virtual void begin_period(Period t, std::span<const Shock> shocks,
                            PeriodStartLog* log) = 0;
  virtual OfferDecision select(const ChoiceModel& model,
                               const FeasibleCollection& feasible) = 0;
  /// Throws InvariantViolation if no unit can be allocated.
  virtual Allocation allocate(ProductId i, Period t, Period return_time) = 0;

  /// Units of product i a consumer could receive right now.
  virtual std::int64_t available(ProductId i) const = 0;
  /// Picks up products appended to the instance since construction.
  virtual void extend_products(const Instance& inst) = 0;

 protected:
  Policy(PolicySpec spec, const Instance& inst) : spec_(std::move(spec)), inst_(&inst) {}

  /// Queues a return and yields all units due at or before `t`.
  struct PendingReturn {
    Period time;
    ProductId product;
    int batch;
    bool operator>(const PendingReturn& o) const {
      return std::tie(time, product, batch) > std::tie(o.time, o.product, o.batch);
    }
  };
  void schedule_return(Period time, ProductId i, int batch);
  std::vector<PendingReturn> due_returns(Period t);

  PolicySpec spec_;
  const Instance* inst_;
  std::vector<double> reduced_scratch_;

 private:
  std::priority_queue<PendingReturn, std::vector<PendingReturn>, std::greater<>> returns_;
};

/// BIB ledger: ready batches plus exactly one charging batch per product.
class BatchedPolicy final : public Policy {
 public:
  BatchedPolicy(PolicySpec spec, const Instance& inst);

  void begin_period(Period t, std::span<const Shock> shocks, PeriodStartLog* log) override;
  OfferDecision select(const ChoiceModel& model, const FeasibleCollection& feasible) override;
  Allocation allocate(ProductId i, Period t, Period return_time) override;
  std::int64_t available(ProductId i) const override;
  void extend_products(const Instance& inst) override;

  /// All batches of product i; the last one is the charging batch.
  std::span<const Batch> batches(ProductId i) const { return ledgers_.at(i).batches; }
  /// h_i, the number of ready batches.
  int ready_count(ProductId i) const;
  /// Best ready batch (largest level, smallest index), -1 if none.
  int designated_batch(ProductId i) const;
  double best_level(ProductId i) const;

 private:
  struct LevelKey {
    std::int64_t available;
    std::int64_t members;
    int batch;
  };
  struct LevelOrder {
    bool operator()(const LevelKey& x, const LevelKey& y) const;
  };
  struct Ledger {
    std::vector<Batch> batches;
    std::set<LevelKey, LevelOrder> by_level;
    bool unlimited = false;
  };

  void add_ledger(const Product& p);
  void reindex(Ledger& ledger, int j, bool insert);
  void add_units(Ledger& ledger, std::int64_t units, Period t);
  std::int64_t remove_units(Ledger& ledger, std::int64_t units);

  std::vector<Ledger> ledgers_;
};

/// SCIB, DCIB and GREED: one inventory count per product.
class ScalarPolicy final : public Policy {
 public:
  ScalarPolicy(PolicySpec spec, const Instance& inst);

  void begin_period(Period t, std::span<const Shock> shocks, PeriodStartLog* log) override;
  OfferDecision select(const ChoiceModel& model, const FeasibleCollection& feasible) override;
  Allocation allocate(ProductId i, Period t, Period return_time) override;
  std::int64_t available(ProductId i) const override;
  void extend_products(const Instance& inst) override;

  /// The inventory ratio fed to the penalty for product i.
  double ratio(ProductId i) const;
  std::int64_t cumulative_shock(ProductId i) const { return states_.at(i).cumulative_shock; }

 private:
  struct State {
    std::int64_t on_hand = 0;
    std::int64_t initial = 0;
    std::int64_t cumulative_shock = 0;
    bool unlimited = false;
  };
  std::vector<State> states_;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Instance& inst);

}  // namespace invbal
