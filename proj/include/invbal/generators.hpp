#pragma once

#include <cstdint>
#include <string>

#include "invbal/instance.hpp"
#include "invbal/penalty.hpp"
#include "invbal/policy.hpp"

namespace invbal {

struct RandomMnlParams {
  int products = 6;
  Period horizon = 3000;
  std::int64_t initial_inventory = 30;
  double price_low = 10.0;
  double price_high = 25.0;
  double alpha_low = 0.9;
  double alpha_high = 1.1;
  double outside = 0.1;
  /// Success probability q of the per-period shock law Geo(q) on {0, 1, ...}.
  double shock_success = 0.98;
  /// Usage duration; 0 means horizon / 3.
  std::int64_t duration = 0;
  double kappa = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Six nested MNL consumer types with a drifting arrival pattern.
Instance gen_random_mnl(const RandomMnlParams& params);

/// Probability that a type-j consumer (1-based) arrives at period t.
double type_probability(const RandomMnlParams& params, Period t, int type);

/// Negates every nonzero shock independently with probability flip_prob.
Instance apply_negative_shocks(Instance inst, double flip_prob, std::uint64_t seed);

/// Per-sale durations drawn from Geo(p) on {1, 2, ...}; the mean is 1/p.
Instance apply_stochastic_durations(Instance inst, double success_probability);

enum class StylizedFamily { G, GHat, GBar };

std::string_view to_string(StylizedFamily f);

struct StylizedParams {
  StylizedFamily family = StylizedFamily::G;
  int levels = 10;  // N
  double r = 0.5;
  double s = 0.32;
  std::int64_t n0 = 100;
  std::int64_t c = 50;
  double epsilon = 0.1;
  Penalty psi = Penalty::exponential();

  void validate() const;
};

/// Adversarial instance built by co-simulating `target` (SCIB for G, DCIB
/// for GHat; GBar ignores it). The result is a fixed replayable instance
/// whose metadata records n_l, xi_l and the shock periods.
Instance gen_stylized(const StylizedParams& params, const PolicySpec& target);

/// Default target for a family: SCIB for G, DCIB for GHat, USIB for GBar.
PolicySpec default_target(const StylizedParams& params);

/// Clairvoyant revenue of a stylized instance from its metadata.
double analytic_opt(const Instance& inst);

struct TinyParams {
  int max_products = 3;
  Period max_horizon = 20;
  std::int64_t min_inventory = 1;
  std::int64_t max_inventory = 3;
  /// Singleton consumers when true, random MNL consumers otherwise.
  bool deterministic = true;
  double shock_probability = 0.15;
  std::int64_t max_shock = 2;
  /// Probability that a product never returns; otherwise d ~ U{1..max_duration}.
  double infinite_duration_probability = 0.3;
  std::int64_t max_duration = 6;
  std::int64_t min_products = 1;
  Period min_horizon = 4;
};

/// Small random instances for brute-force and LP cross-checks.
Instance gen_tiny(const TinyParams& params, std::uint64_t seed);

}  // namespace invbal
