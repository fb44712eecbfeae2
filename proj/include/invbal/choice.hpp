#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace invbal {

using ProductId = std::int32_t;

/// Sorted, duplicate-free list of product ids.
using Assortment = std::vector<ProductId>;

/// Largest product count the exhaustive oracle will enumerate.
inline constexpr int kOracleEnumerationLimit = 20;

/// Relative slack below which two assortment values count as tied.
inline constexpr double kOracleTieTol = 1e-12;

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ChoiceKind { Mnl, DeterministicSingleton };

/// Consumer choice model phi(S, i).
///
/// Mnl keeps the outside option at a fixed share of every offered set: the
/// no-purchase weight is recomputed per offer as target * sum(alpha_S) / (1 -
/// target). DeterministicSingleton buys i with certainty iff S = {i} and i is
/// accepted; it models bipartite matching.
class ChoiceModel {
 public:
  static ChoiceModel mnl(std::vector<double> alpha, double outside_target);
  static ChoiceModel singleton(std::vector<ProductId> accepts);

  ChoiceKind kind() const { return kind_; }
  std::span<const double> alpha() const { return alpha_; }
  double outside_target() const { return outside_; }
  std::span<const ProductId> accepts() const { return support_; }

  /// Products that can have positive choice probability, ascending.
  std::span<const ProductId> support() const { return support_; }

  double probability(std::span<const ProductId> offered, ProductId i) const;

  /// Inverse CDF over offered products in id order; u in [0, 1).
  std::optional<ProductId> sample(std::span<const ProductId> offered,
                                  double u) const;

  bool operator==(const ChoiceModel& other) const;

 private:
  ChoiceModel() = default;

  double mnl_denominator(std::span<const ProductId> offered) const;

  ChoiceKind kind_ = ChoiceKind::Mnl;
  std::vector<double> alpha_;
  double outside_ = 0.0;
  std::vector<ProductId> support_;
};

enum class FeasibleKind { AllSubsets, CardinalityCap };

/// Downward-closed family of admissible assortments.
struct FeasibleCollection {
  FeasibleKind kind = FeasibleKind::AllSubsets;
  int cap = 0;

  static FeasibleCollection all() { return {}; }
  static FeasibleCollection cardinality(int k) {
    if (k < 0) throw std::invalid_argument("cardinality cap must be >= 0");
    return {FeasibleKind::CardinalityCap, k};
  }
  bool admits(std::size_t size) const {
    return kind == FeasibleKind::AllSubsets || static_cast<int>(size) <= cap;
  }
  bool operator==(const FeasibleCollection&) const = default;
};

/// Expected reduced revenue sum_i R_i phi(S, i).
double assortment_value(const ChoiceModel& model,
                        std::span<const double> reduced_prices,
                        std::span<const ProductId> offered);

/// True iff value `a` beats `b` by more than the tie tolerance.
inline bool strictly_better(double a, double b) {
  const double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  return a > b + kOracleTieTol * scale;
}

/// Reward-maximizing feasible assortment with the smallest cardinality,
/// ties then broken by the lexicographically smallest id list.
///
/// `reduced_prices` is indexed by product id; only entries on the model's
/// support are read. Throws InstanceTooLarge when exhaustive enumeration
/// would exceed kOracleEnumerationLimit products.
Assortment assortment_oracle(const ChoiceModel& model,
                             std::span<const double> reduced_prices,
                             const FeasibleCollection& feasible);

}  // namespace invbal
