#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invbal/instance.hpp"
#include "invbal/parallel.hpp"
#include "invbal/policy.hpp"
#include "invbal/rng.hpp"

namespace invbal {

struct RunOptions {
  /// Keep the per-period records. Allocations and batches are always kept.
  bool record_periods = true;
};

struct PeriodRecord {
  Period t = 0;
  std::vector<ShockRecord> shocks;
  std::vector<ReturnRecord> returns;
  Assortment offered;
  std::vector<int> designated;
  std::vector<double> reduced_prices;
  std::optional<ProductId> chosen;
  double revenue = 0.0;
};

struct SaleRecord {
  ProductId product = 0;
  int batch = -1;
  Period t = 0;
  double revenue = 0.0;
  /// f (or the scalar ratio) of the designated batch just before the sale.
  double level = 1.0;
  Period return_time = kNoReturn;
  bool operator==(const SaleRecord&) const = default;
};

struct BatchRecord {
  ProductId product = 0;
  int index = 0;
  std::int64_t members = 0;
  bool ready = false;
  Period ready_time = 0;
  /// T_{i,j}: periods in which a unit of this batch was sold.
  std::vector<Period> allocation_times;
  bool operator==(const BatchRecord&) const = default;
};

struct SimTrace {
  PolicySpec policy;
  std::uint64_t seed = 0;
  Period horizon = 0;
  std::vector<PeriodRecord> periods;
  std::vector<SaleRecord> sales;
  double total_revenue = 0.0;
  /// h_i per product (batched policies only).
  std::vector<int> ready_counts;
  /// Every batch including the final charging ones (batched policies only).
  std::vector<BatchRecord> batches;

  const BatchRecord* find_batch(ProductId i, int j) const;
};

/// Steps one policy through an instance period by period. The instance may
/// grow (new periods or products) between steps; call sync_products after
/// appending products.
class Simulator {
 public:
  Simulator(const Instance& inst, const PolicySpec& spec, std::uint64_t seed,
            RunOptions options = {});

  Period next_period() const { return next_; }
  bool done() const { return next_ > inst_->horizon(); }

  /// Runs period next_period(). Throws InvariantViolation tagged with the period.
  void step();
  /// Runs every period up to and including t.
  void advance_to(Period t);
  void run_to_end() { advance_to(inst_->horizon()); }

  void sync_products() { policy_->extend_products(*inst_); }

  const Policy& policy() const { return *policy_; }
  double revenue() const { return trace_.total_revenue; }
  const SimTrace& trace() const { return trace_; }

  /// Finalizes batch summaries and hands over the trace.
  SimTrace finish();

 private:
  const Instance* inst_;
  std::unique_ptr<Policy> policy_;
  CounterRng rng_;
  RunOptions options_;
  Period next_ = 1;
  SimTrace trace_;
};

SimTrace run(const Instance& inst, const PolicySpec& spec, std::uint64_t seed,
             RunOptions options = {});

struct RunStats {
  PolicySpec policy;
  std::string label;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;

  double standard_error() const;
  bool operator==(const RunStats&) const = default;
};

/// Summary statistics; sd is the sample standard deviation (0 for one value).
RunStats summarize(const PolicySpec& spec, std::vector<double> values,
                   std::vector<std::uint64_t> seeds);

using InstanceFactory = std::function<Instance(std::uint64_t seed)>;

/// Replication k regenerates the instance with seed base_seed + k and runs
/// every policy on it, with the same seed for the choice stream.
std::vector<RunStats> monte_carlo(const InstanceFactory& factory,
                                  std::span<const PolicySpec> policies, int replications,
                                  std::uint64_t base_seed,
                                  Execution execution = Execution::Parallel);

/// Replications of a fixed instance with seeds base_seed + k.
RunStats replicate(const Instance& inst, const PolicySpec& spec, int replications,
                   std::uint64_t base_seed, Execution execution = Execution::Parallel);

}  // namespace invbal
