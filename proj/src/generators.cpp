#include "invbal/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "invbal/engine.hpp"
#include "invbal/rng.hpp"

namespace invbal {

// ------------------------------------------------------------- random MNL

void RandomMnlParams::validate() const {
  if (products < 1) throw std::invalid_argument("products must be >= 1");
  if (horizon < 3) throw std::invalid_argument("horizon must be >= 3");
  if (initial_inventory < 0) throw std::invalid_argument("initial inventory must be >= 0");
  if (!(price_low > 0.0) || price_high < price_low) {
    throw std::invalid_argument("price range must satisfy 0 < low <= high");
  }
  if (alpha_low < 0.0 || alpha_high < alpha_low) {
    throw std::invalid_argument("alpha range must satisfy 0 <= low <= high");
  }
  if (outside < 0.0 || outside >= 1.0) throw std::invalid_argument("outside must be in [0, 1)");
  if (!(shock_success > 0.0) || shock_success > 1.0) {
    throw std::invalid_argument("shock success probability must be in (0, 1]");
  }
  if (kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
  if (duration < 0) throw std::invalid_argument("duration must be >= 0");
}

namespace {

double chunk_length(const RandomMnlParams& p) { return static_cast<double>(p.horizon) / 18.0; }

std::vector<double> type_weights(const RandomMnlParams& p, Period t) {
  const double phase = static_cast<double>(p.horizon) / 3.0;
  const double t_prime =
      std::fmod(static_cast<double>(t - 1), phase) + 1.0;  // ((t-1) mod (T/3)) + 1
  std::vector<double> w(static_cast<std::size_t>(p.products));
  for (int j = 1; j <= p.products; ++j) {
    const double tau_j = (p.products - j) * chunk_length(p) + 1.0;
    w[static_cast<std::size_t>(j - 1)] = std::exp(-0.001 * p.kappa * std::abs(t_prime - tau_j));
  }
  return w;
}

}  // namespace

double type_probability(const RandomMnlParams& params, Period t, int type) {
  const auto w = type_weights(params, t);
  double total = 0.0;
  for (double x : w) total += x;
  return w.at(static_cast<std::size_t>(type - 1)) / total;
}

Instance gen_random_mnl(const RandomMnlParams& params) {
  params.validate();
  const CounterRng rng(params.seed);
  const int n = params.products;

  RngCursor price_draws(rng, RngStream::Prices);
  std::vector<double> prices(static_cast<std::size_t>(n));
  for (double& p : prices) p = price_draws.uniform(params.price_low, params.price_high);
  std::sort(prices.begin(), prices.end(), std::greater<>());

  const std::int64_t d = params.duration > 0 ? params.duration : params.horizon / 3;
  std::vector<Product> products;
  for (double p : prices) products.push_back({p, params.initial_inventory, false, d});
  Instance inst(std::move(products), params.horizon);

  // Type j considers products [j]; weights outside the prefix are zero.
  std::vector<std::shared_ptr<const ChoiceModel>> types;
  for (int j = 1; j <= n; ++j) {
    RngCursor w(rng, RngStream::Weights, static_cast<std::uint32_t>(j));
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < j; ++i) alpha[static_cast<std::size_t>(i)] = w.uniform(params.alpha_low, params.alpha_high);
    types.push_back(std::make_shared<const ChoiceModel>(ChoiceModel::mnl(alpha, params.outside)));
  }

  for (Period t = 1; t <= params.horizon; ++t) {
    const auto w = type_weights(params, t);
    double total = 0.0;
    for (double x : w) total += x;
    const double u = rng.uniform(RngStream::Types, static_cast<std::uint64_t>(t)) * total;
    double acc = 0.0;
    int pick = n - 1;
    for (int j = 0; j < n; ++j) {
      acc += w[static_cast<std::size_t>(j)];
      if (u < acc) {
        pick = j;
        break;
      }
    }
    inst.set_consumer(t, types[static_cast<std::size_t>(pick)]);

    for (int i = 0; i < n; ++i) {
      const double v = rng.uniform_pos(RngStream::Shocks, static_cast<std::uint64_t>(t),
                                       static_cast<std::uint32_t>(i));
      std::int64_t units = 0;
      if (params.shock_success < 1.0) {
        units = static_cast<std::int64_t>(std::floor(std::log(v) / std::log1p(-params.shock_success)));
      }
      if (units != 0) inst.set_shock(i, t, units);
    }
  }
  inst.validate();
  return inst;
}

Instance apply_negative_shocks(Instance inst, double flip_prob, std::uint64_t seed) {
  if (flip_prob < 0.0 || flip_prob > 1.0) throw std::invalid_argument("flip_prob must be in [0, 1]");
  const CounterRng rng(seed);
  for (Period t = 1; t <= inst.horizon(); ++t) {
    const std::vector<Shock> row(inst.shocks_at(t).begin(), inst.shocks_at(t).end());
    for (const Shock& s : row) {
      const double u = rng.uniform(RngStream::SignFlip, static_cast<std::uint64_t>(t),
                                   static_cast<std::uint32_t>(s.product));
      if (u < flip_prob) inst.set_shock(s.product, t, -s.units);
    }
  }
  inst.set_negative_shocks(true);
  return inst;
}

Instance apply_stochastic_durations(Instance inst, double success_probability) {
  if (!(success_probability > 0.0) || success_probability > 1.0) {
    throw std::invalid_argument("duration success probability must be in (0, 1]");
  }
  inst.set_stochastic_duration(StochasticDuration{success_probability});
  return inst;
}

// -------------------------------------------------------------- stylized

std::string_view to_string(StylizedFamily f) {
  switch (f) {
    case StylizedFamily::G: return "G";
    case StylizedFamily::GHat: return "Ghat";
    case StylizedFamily::GBar: return "Gbar";
  }
  return "?";
}

void StylizedParams::validate() const {
  if (c < 1) throw std::invalid_argument("c must be >= 1");
  if (family == StylizedFamily::GBar) {
    if (epsilon < 0.0 || epsilon >= 1.0) throw std::invalid_argument("epsilon must be in [0, 1)");
    return;
  }
  if (levels < 0) throw std::invalid_argument("N must be >= 0");
  if (n0 < 1) throw std::invalid_argument("n0 must be >= 1");
  if (r <= 0.0 || r > 1.0 || s < 0.0 || s >= 1.0) {
    throw std::invalid_argument("need r in (0, 1] and s in [0, 1)");
  }
  const double ratio = psi(s) / r;
  if (ratio < 0.0 || ratio > 1.0) throw std::invalid_argument("psi(s) / r must lie in [0, 1]");
}

PolicySpec default_target(const StylizedParams& params) {
  switch (params.family) {
    case StylizedFamily::G: return PolicySpec::scib(params.psi);
    case StylizedFamily::GHat: return PolicySpec::dcib(params.psi);
    case StylizedFamily::GBar: return PolicySpec::usib(params.psi);
  }
  return PolicySpec::scib(params.psi);
}

namespace {

/// Appends c * size consumers; the k-th (0-based) accepts the first
/// size - floor(k / c) products of the group starting at `first`.
void push_nested_block(Instance& inst, ProductId first, std::int64_t size, std::int64_t c) {
  for (std::int64_t b = 0; b < size; ++b) {
    std::vector<ProductId> accepts;
    for (std::int64_t i = 0; i < size - b; ++i) accepts.push_back(first + static_cast<ProductId>(i));
    const auto model = std::make_shared<const ChoiceModel>(ChoiceModel::singleton(std::move(accepts)));
    for (std::int64_t k = 0; k < c; ++k) inst.push_period(model);
  }
}

ProductId add_group(Instance& inst, std::int64_t size, double price, std::int64_t c) {
  const auto first = static_cast<ProductId>(inst.num_products());
  for (std::int64_t i = 0; i < size; ++i) inst.add_product({price, c, false, kInfiniteDuration});
  return first;
}

Instance gen_gbar(const StylizedParams& p) {
  const std::int64_t c = p.c;
  const std::int64_t horizon = c + 2 * c * c;
  if (horizon > std::numeric_limits<Period>::max() / 2) throw std::invalid_argument("c too large");
  Instance inst;
  inst.add_product({1.0, c, false, kInfiniteDuration});
  inst.add_product({1.0 - p.epsilon, 0, true, kInfiniteDuration});
  const auto only_first = std::make_shared<const ChoiceModel>(ChoiceModel::singleton({0}));
  const auto both = std::make_shared<const ChoiceModel>(ChoiceModel::singleton({0, 1}));
  inst.set_horizon(static_cast<Period>(horizon));
  for (Period t = 1; t <= horizon; ++t) {
    const bool odd_after = t > c && (t - c) % 2 == 1;
    inst.set_consumer(t, odd_after ? both : only_first);
    if (odd_after) inst.set_shock(0, t, 1);
  }
  StylizedMeta meta;
  meta.family = std::string(to_string(p.family));
  meta.epsilon = p.epsilon;
  meta.c = c;
  inst.set_stylized(meta);
  inst.validate();
  return inst;
}

}  // namespace

Instance gen_stylized(const StylizedParams& params, const PolicySpec& target) {
  params.validate();
  if (params.family == StylizedFamily::GBar) return gen_gbar(params);

  const std::int64_t c = params.c;
  const double psi_s = params.psi(params.s);
  const double per_product = c * (1.0 - params.psi.inverse(psi_s / params.r));

  Instance inst;
  StylizedMeta meta;
  meta.family = std::string(to_string(params.family));
  meta.r = params.r;
  meta.s = params.s;
  meta.c = c;
  meta.n0 = params.n0;
  meta.subgroup_sizes.push_back(params.n0);
  meta.subgroup_sizes_exact.push_back(static_cast<double>(params.n0));
  meta.shock_totals.push_back(0);
  meta.shock_periods.push_back(0);

  ProductId prev_first = add_group(inst, params.n0, 1.0, c);
  std::int64_t prev_size = params.n0;
  push_nested_block(inst, prev_first, prev_size, c);

  Simulator sim(inst, target, 0, RunOptions{false});
  double price = 1.0;
  for (int level = 1; level <= params.levels; ++level) {
    sim.run_to_end();

    std::vector<std::int64_t> xi(static_cast<std::size_t>(prev_size), 0);
    std::int64_t xi_total = 0;
    for (std::int64_t k = 0; k < prev_size; ++k) {
      const auto x = static_cast<double>(sim.policy().available(prev_first + static_cast<ProductId>(k)));
      const double deficit = params.s * c - x;
      double units = 0.0;
      if (params.family == StylizedFamily::G) {
        units = std::max(deficit, 0.0);
      } else {
        units = std::max(std::round(deficit / (1.0 - params.s)), 0.0);
      }
      xi[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(std::llround(units));
      xi_total += xi[static_cast<std::size_t>(k)];
    }

    const double exact = static_cast<double>(xi_total) / per_product;
    const std::int64_t n_level = std::max<std::int64_t>(1, std::llround(exact));
    price *= params.r;
    const ProductId first = add_group(inst, n_level, price, c);
    sim.sync_products();

    const Period shock_period = inst.horizon() + 1;
    std::int64_t fan = 0;
    for (std::int64_t k = 0; k < prev_size; ++k) {
      const ProductId i = prev_first + static_cast<ProductId>(k);
      for (std::int64_t u = 0; u < xi[static_cast<std::size_t>(k)]; ++u) {
        const ProductId partner = first + static_cast<ProductId>(fan % n_level);
        ++fan;
        inst.push_period(std::make_shared<const ChoiceModel>(ChoiceModel::singleton({i, partner})));
      }
    }
    if (xi_total > 0) {
      for (std::int64_t k = 0; k < prev_size; ++k) {
        const std::int64_t units = xi[static_cast<std::size_t>(k)];
        if (units > 0) inst.set_shock(prev_first + static_cast<ProductId>(k), shock_period, units);
      }
    }
    push_nested_block(inst, first, n_level, c);

    meta.subgroup_sizes.push_back(n_level);
    meta.subgroup_sizes_exact.push_back(exact);
    meta.shock_totals.push_back(xi_total);
    meta.shock_periods.push_back(xi_total > 0 ? shock_period : 0);
    prev_first = first;
    prev_size = n_level;
  }
  inst.set_stylized(std::move(meta));
  inst.validate();
  return inst;
}

double analytic_opt(const Instance& inst) {
  const auto& meta = inst.stylized();
  if (!meta) throw std::invalid_argument("instance carries no stylized metadata");
  const auto c = static_cast<double>(meta->c);
  if (meta->family == "Gbar") return c + 2.0 * c * c - c * c * meta->epsilon;
  if (meta->family != "G" && meta->family != "Ghat") {
    throw std::invalid_argument("unknown stylized family '" + meta->family + "'");
  }
  double value = 0.0;
  for (std::size_t l = 0; l < meta->subgroup_sizes.size(); ++l) {
    value += std::pow(meta->r, static_cast<double>(l)) * c * static_cast<double>(meta->subgroup_sizes[l]);
  }
  for (std::size_t l = 1; l < meta->shock_totals.size(); ++l) {
    value += std::pow(meta->r, static_cast<double>(l - 1)) * static_cast<double>(meta->shock_totals[l]);
  }
  return value;
}

// ------------------------------------------------------------------ tiny

Instance gen_tiny(const TinyParams& params, std::uint64_t seed) {
  const CounterRng rng(seed);
  RngCursor draw(rng, RngStream::Tiny);
  auto uniform_int = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(std::floor(draw.uniform() * static_cast<double>(hi - lo + 1)));
  };
  const auto n = static_cast<int>(uniform_int(params.min_products, params.max_products));
  const auto horizon = static_cast<Period>(uniform_int(params.min_horizon, params.max_horizon));

  std::vector<Product> products;
  for (int i = 0; i < n; ++i) {
    Product p;
    p.price = std::round(draw.uniform(1.0, 10.0) * 100.0) / 100.0;
    p.initial_inventory = uniform_int(params.min_inventory, params.max_inventory);
    p.duration = draw.bernoulli(params.infinite_duration_probability)
                     ? kInfiniteDuration
                     : uniform_int(1, params.max_duration);
    products.push_back(p);
  }
  Instance inst(std::move(products), horizon);
  for (Period t = 1; t <= horizon; ++t) {
    if (params.deterministic) {
      std::vector<ProductId> accepts;
      for (int i = 0; i < n; ++i) {
        if (draw.bernoulli(0.6)) accepts.push_back(i);
      }
      inst.set_consumer(t, std::make_shared<const ChoiceModel>(ChoiceModel::singleton(accepts)));
    } else {
      std::vector<double> alpha(static_cast<std::size_t>(n));
      for (double& a : alpha) a = draw.bernoulli(0.2) ? 0.0 : draw.uniform(0.2, 2.0);
      inst.set_consumer(t, std::make_shared<const ChoiceModel>(ChoiceModel::mnl(alpha, 0.1)));
    }
    for (int i = 0; i < n; ++i) {
      if (t > 1 && draw.bernoulli(params.shock_probability)) {
        inst.set_shock(i, t, uniform_int(1, params.max_shock));
      }
    }
  }
  inst.validate();
  return inst;
}

}  // namespace invbal
