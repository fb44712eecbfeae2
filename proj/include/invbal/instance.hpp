#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invbal/choice.hpp"

namespace invbal {

/// Periods are numbered 1..T throughout the public API.
using Period = std::int32_t;

/// Usage duration meaning "the unit never returns".
inline constexpr std::int64_t kInfiniteDuration =
    std::numeric_limits<std::int64_t>::max() / 4;

struct Product {
  double price = 1.0;
  std::int64_t initial_inventory = 0;
  /// Unlimited stock: availability never drops and the level is always 1.
  bool unlimited = false;
  std::int64_t duration = kInfiniteDuration;

  bool returns() const { return duration < kInfiniteDuration; }
  bool operator==(const Product&) const = default;
};

struct Shock {
  ProductId product = 0;
  std::int64_t units = 0;
  bool operator==(const Shock&) const = default;
};

/// Per-sale random usage durations, Geo(p) on {1, 2, ...}.
struct StochasticDuration {
  double success_probability = 1.0;
  bool operator==(const StochasticDuration&) const = default;
};

/// Bookkeeping left behind by the adversarial generators.
struct StylizedMeta {
  std::string family;
  /// n_l for l = 0..N.
  std::vector<std::int64_t> subgroup_sizes;
  /// xi_l for l = 1..N (index 0 unused, kept at 0).
  std::vector<std::int64_t> shock_totals;
  /// Unrounded n_l as the closed form gives it.
  std::vector<double> subgroup_sizes_exact;
  /// First period of V_{2l-1}, l = 1..N (index 0 unused).
  std::vector<Period> shock_periods;
  double r = 0.0;
  double s = 0.0;
  double epsilon = 0.0;
  std::int64_t c = 0;
  std::int64_t n0 = 0;
  bool operator==(const StylizedMeta&) const = default;
};

/// Problem data: products, horizon, exogenous shocks and one choice model per
/// period. Shocks are stored sparsely by period; choice models are shared
/// between periods that reuse them. Immutable once generation finishes.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<Product> products, Period horizon);

  std::size_t num_products() const { return products_.size(); }
  Period horizon() const { return horizon_; }
  std::span<const Product> products() const { return products_; }
  const Product& product(ProductId i) const { return products_.at(i); }

  /// Shocks applied at the start of period t, ascending product id.
  std::span<const Shock> shocks_at(Period t) const {
    return shocks_[static_cast<std::size_t>(t - 1)];
  }
  std::int64_t shock(ProductId i, Period t) const;

  const ChoiceModel& consumer(Period t) const {
    return *consumers_[static_cast<std::size_t>(t - 1)];
  }
  const std::shared_ptr<const ChoiceModel>& consumer_ptr(Period t) const {
    return consumers_[static_cast<std::size_t>(t - 1)];
  }

  const FeasibleCollection& feasible() const { return feasible_; }
  bool negative_shocks() const { return negative_shocks_; }
  const std::optional<StochasticDuration>& stochastic_duration() const {
    return stochastic_duration_;
  }
  const std::optional<StylizedMeta>& stylized() const { return stylized_; }

  /// Smallest finite initial inventory (c0); 0 when every product is unlimited.
  std::int64_t min_initial_inventory() const;
  double max_price() const;

  // Builders. Generators use these; everything else treats an Instance as
  // read-only.
  ProductId add_product(const Product& p);
  void set_horizon(Period horizon);
  void add_shock(ProductId i, Period t, std::int64_t units);
  void set_shock(ProductId i, Period t, std::int64_t units);
  void set_consumer(Period t, std::shared_ptr<const ChoiceModel> model);
  /// Appends a period with the given consumer; returns its number.
  Period push_period(std::shared_ptr<const ChoiceModel> model);
  void set_feasible(FeasibleCollection f) { feasible_ = f; }
  void set_negative_shocks(bool on) { negative_shocks_ = on; }
  void set_stochastic_duration(std::optional<StochasticDuration> d) {
    stochastic_duration_ = d;
  }
  void set_stylized(StylizedMeta meta) { stylized_ = std::move(meta); }

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;

  bool operator==(const Instance& other) const;

 private:
  std::vector<Product> products_;
  Period horizon_ = 0;
  std::vector<std::vector<Shock>> shocks_;
  std::vector<std::shared_ptr<const ChoiceModel>> consumers_;
  FeasibleCollection feasible_;
  bool negative_shocks_ = false;
  std::optional<StochasticDuration> stochastic_duration_;
  std::optional<StylizedMeta> stylized_;
};

}  // namespace invbal
