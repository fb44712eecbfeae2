#include "invbal/choice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace invbal {

ChoiceModel ChoiceModel::mnl(std::vector<double> alpha, double outside_target) {
  if (!(outside_target >= 0.0 && outside_target < 1.0)) {
    throw std::invalid_argument("mnl outside target must lie in [0, 1)");
  }
  ChoiceModel m;
  m.kind_ = ChoiceKind::Mnl;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] >= 0.0) || !std::isfinite(alpha[i])) {
      throw std::invalid_argument("mnl weights must be finite and >= 0");
    }
    if (alpha[i] > 0.0) m.support_.push_back(static_cast<ProductId>(i));
  }
  m.alpha_ = std::move(alpha);
  m.outside_ = outside_target;
  return m;
}

ChoiceModel ChoiceModel::singleton(std::vector<ProductId> accepts) {
  std::sort(accepts.begin(), accepts.end());
  accepts.erase(std::unique(accepts.begin(), accepts.end()), accepts.end());
  if (!accepts.empty() && accepts.front() < 0) {
    throw std::invalid_argument("negative product id in accept set");
  }
  ChoiceModel m;
  m.kind_ = ChoiceKind::DeterministicSingleton;
  m.support_ = std::move(accepts);
  return m;
}

double ChoiceModel::mnl_denominator(std::span<const ProductId> offered) const {
  double inside = 0.0;
  for (ProductId j : offered) {
    if (j >= 0 && static_cast<std::size_t>(j) < alpha_.size()) inside += alpha_[j];
  }
  if (inside <= 0.0) return 0.0;
  const double outside_weight = outside_ * inside / (1.0 - outside_);
  return outside_weight + inside;
}

double ChoiceModel::probability(std::span<const ProductId> offered,
                                ProductId i) const {
  if (std::find(offered.begin(), offered.end(), i) == offered.end()) return 0.0;
  if (kind_ == ChoiceKind::DeterministicSingleton) {
    return offered.size() == 1 &&
                   std::binary_search(support_.begin(), support_.end(), i)
               ? 1.0
               : 0.0;
  }
  if (i < 0 || static_cast<std::size_t>(i) >= alpha_.size()) return 0.0;
  const double denom = mnl_denominator(offered);
  return denom > 0.0 ? alpha_[i] / denom : 0.0;
}

std::optional<ProductId> ChoiceModel::sample(std::span<const ProductId> offered,
                                             double u) const {
  if (offered.empty()) return std::nullopt;
  if (kind_ == ChoiceKind::DeterministicSingleton) {
    if (offered.size() == 1 &&
        std::binary_search(support_.begin(), support_.end(), offered[0])) {
      return offered[0];
    }
    return std::nullopt;
  }
  const double denom = mnl_denominator(offered);
  if (denom <= 0.0) return std::nullopt;
  double cumulative = 0.0;
  for (ProductId j : offered) {
    if (static_cast<std::size_t>(j) >= alpha_.size()) continue;
    cumulative += alpha_[j] / denom;
    if (alpha_[j] > 0.0 && u < cumulative) return j;
  }
  return std::nullopt;
}

bool ChoiceModel::operator==(const ChoiceModel& other) const {
  return kind_ == other.kind_ && alpha_ == other.alpha_ &&
         outside_ == other.outside_ && support_ == other.support_;
}

double assortment_value(const ChoiceModel& model,
                        std::span<const double> reduced_prices,
                        std::span<const ProductId> offered) {
  double value = 0.0;
  for (ProductId i : offered) {
    value += reduced_prices[i] * model.probability(offered, i);
  }
  return value;
}

namespace {

struct Candidate {
  Assortment set;
  double value = 0.0;
};

// Replaces `best` when `cand` wins under value, then cardinality, then
// lexicographic order.
void consider(Candidate& best, Assortment cand_set, double cand_value) {
  bool take = false;
  if (strictly_better(cand_value, best.value)) {
    take = true;
  } else if (!strictly_better(best.value, cand_value)) {
    if (cand_set.size() < best.set.size()) {
      take = true;
    } else if (cand_set.size() == best.set.size() && cand_set < best.set) {
      take = true;
    }
  }
  if (take) {
    best.set = std::move(cand_set);
    best.value = cand_value;
  }
}

Assortment singleton_oracle(const ChoiceModel& model,
                            std::span<const double> reduced,
                            const FeasibleCollection& feasible) {
  if (!feasible.admits(1)) return {};
  ProductId best = -1;
  double best_value = 0.0;
  for (ProductId i : model.support()) {
    if (static_cast<std::size_t>(i) >= reduced.size()) continue;
    if (strictly_better(reduced[i], best_value)) {
      best = i;
      best_value = reduced[i];
    }
  }
  if (best < 0) return {};
  return {best};
}

Assortment revenue_ordered_oracle(const ChoiceModel& model,
                                  std::span<const double> reduced) {
  std::vector<ProductId> order;
  for (ProductId i : model.support()) {
    if (static_cast<std::size_t>(i) < reduced.size() && reduced[i] > 0.0) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](ProductId a, ProductId b) {
    return reduced[a] > reduced[b];
  });
  Candidate best;
  Assortment prefix;
  for (ProductId i : order) {
    prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), i), i);
    consider(best, prefix, assortment_value(model, reduced, prefix));
  }
  return best.set;
}

Assortment enumeration_oracle(const ChoiceModel& model,
                              std::span<const double> reduced,
                              const FeasibleCollection& feasible) {
  std::vector<ProductId> useful;
  for (ProductId i : model.support()) {
    if (static_cast<std::size_t>(i) < reduced.size() && reduced[i] > 0.0) {
      useful.push_back(i);
    }
  }
  if (useful.size() > static_cast<std::size_t>(kOracleEnumerationLimit)) {
    throw InstanceTooLarge("assortment oracle: " + std::to_string(useful.size()) +
                           " candidate products exceed the enumeration limit");
  }
  Candidate best;
  const std::uint32_t count = 1u << useful.size();
  Assortment set;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    set.clear();
    for (std::size_t k = 0; k < useful.size(); ++k) {
      if (mask & (1u << k)) set.push_back(useful[k]);
    }
    if (!feasible.admits(set.size())) continue;
    consider(best, set, assortment_value(model, reduced, set));
  }
  return best.set;
}

}  // namespace

Assortment assortment_oracle(const ChoiceModel& model,
                             std::span<const double> reduced_prices,
                             const FeasibleCollection& feasible) {
  for (ProductId i : model.support()) {
    if (static_cast<std::size_t>(i) < reduced_prices.size() &&
        reduced_prices[i] < 0.0) {
      throw std::invalid_argument("reduced prices must be non-negative");
    }
  }
  if (model.kind() == ChoiceKind::DeterministicSingleton) {
    return singleton_oracle(model, reduced_prices, feasible);
  }
  if (feasible.kind == FeasibleKind::AllSubsets) {
    return revenue_ordered_oracle(model, reduced_prices);
  }
  return enumeration_oracle(model, reduced_prices, feasible);
}

}  // namespace invbal
