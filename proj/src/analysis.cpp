#include "invbal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "invbal/iap.hpp"
#include "invbal/rng.hpp"

namespace invbal {

namespace {

// --- bound -----------------------------------------------------------------

/// int_a^1 psi from a cumulative composite-Simpson table.
class TailIntegral {
 public:
  TailIntegral(const Penalty& psi, int panels) : psi_(&psi), panels_(panels) {
    h_ = 1.0 / panels;
    cumulative_.assign(static_cast<std::size_t>(panels) + 1, 0.0);
    for (int k = 0; k < panels; ++k) {
      const double lo = k * h_;
      const double hi = k + 1 == panels ? 1.0 : (k + 1) * h_;
      cumulative_[k + 1] = cumulative_[k] + simpson(lo, hi);
    }
  }

  double operator()(double a) const {
    if (a >= 1.0) return 0.0;
    a = std::max(a, 0.0);
    const int k = std::min(panels_ - 1, static_cast<int>(a / h_));
    const double edge = k + 1 == panels_ ? 1.0 : (k + 1) * h_;
    return simpson(a, edge) + cumulative_.back() - cumulative_[k + 1];
  }

 private:
  double simpson(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    const Penalty& f = *psi_;
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  }

  const Penalty* psi_;
  int panels_;
  double h_ = 0.0;
  std::vector<double> cumulative_;
};

struct Minimum {
  double value = 0.0;
  double x = 0.0;
};

template <class F>
Minimum minimize_on(double xmax, const GammaBoundOptions& opt, F&& f) {
  if (xmax <= 0.0) return {f(0.0), 0.0};
  const std::int64_t n = std::max(2, opt.grid_points);
  const double step = xmax / static_cast<double>(n - 1);
  auto at = [&](std::int64_t k) { return k == n - 1 ? xmax : step * static_cast<double>(k); };
  const auto best = kernels::grid_argmin(n, opt.execution, [&](std::int64_t k) { return f(at(k)); });
  Minimum out{best.value, at(best.index)};

  // Golden section on the bracketing grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = at(std::max<std::int64_t>(0, best.index - 1));
  double hi = at(std::min(n - 1, best.index + 1));
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > opt.x_tolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  for (const auto& [v, x] : {std::pair{f1, x1}, std::pair{f2, x2}}) {
    if (v < out.value) out = {v, x};
  }
  return out;
}

// --- LP helpers ---------------------------------------------------------------

struct ReadyBatch {
  int batch = 0;
  Period ready_time = 1;
  std::int64_t members = 0;
};

void require_batched_trace(const SimTrace& trace, const Instance& inst) {
  if (!trace.policy.batched()) {
    throw std::invalid_argument("trace must come from a batched (BIB) policy");
  }
  if (trace.horizon != inst.horizon() || trace.ready_counts.size() != inst.num_products()) {
    throw std::invalid_argument("trace does not belong to this instance");
  }
  if (inst.negative_shocks()) {
    throw std::invalid_argument("negative shocks are outside the analysis");
  }
}

std::vector<std::vector<ReadyBatch>> ready_batches(const SimTrace& trace, std::size_t n) {
  std::vector<std::vector<ReadyBatch>> out(n);
  for (const BatchRecord& b : trace.batches) {
    if (b.ready) out.at(static_cast<std::size_t>(b.product)).push_back({b.index, b.ready_time, b.members});
  }
  for (auto& v : out) {
    std::sort(v.begin(), v.end(), [](const ReadyBatch& x, const ReadyBatch& y) { return x.batch < y.batch; });
  }
  return out;
}

/// Nonempty feasible subsets of the model's support (within the first n
/// products) that sell something with positive probability.
std::vector<Assortment> selling_subsets(const ChoiceModel& model, std::size_t n,
                                        const FeasibleCollection& feasible) {
  std::vector<ProductId> support;
  for (ProductId i : model.support()) {
    if (static_cast<std::size_t>(i) < n) support.push_back(i);
  }
  std::vector<Assortment> out;
  const std::uint32_t limit = 1u << support.size();
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    Assortment s;
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (mask & (1u << k)) s.push_back(support[k]);
    }
    if (!feasible.admits(s.size())) continue;
    bool sells = false;
    for (ProductId i : s) sells = sells || model.probability(s, i) > 0.0;
    if (sells) out.push_back(std::move(s));
  }
  return out;
}

/// Every batch-specified version of `s` usable at t.
std::vector<std::vector<BatchChoice>> batch_choices(const Assortment& s, Period t,
                                                    const std::vector<std::vector<ReadyBatch>>& ready) {
  std::vector<std::vector<BatchChoice>> out{{}};
  for (ProductId i : s) {
    std::vector<std::vector<BatchChoice>> next;
    for (const auto& partial : out) {
      for (const ReadyBatch& b : ready[static_cast<std::size_t>(i)]) {
        if (b.ready_time > t) continue;
        auto grown = partial;
        grown.push_back({i, b.batch});
        next.push_back(std::move(grown));
      }
    }
    out = std::move(next);
    if (out.empty()) break;
  }
  return out;
}

Period window_end(Period start, std::int64_t duration, Period horizon) {
  if (duration >= kInfiniteDuration) return horizon;
  return static_cast<Period>(std::min<std::int64_t>(horizon, start + duration - 1));
}

}  // namespace

// ---------------------------------------------------------------------------

GammaBound gamma_bound(const Penalty& psi, std::int64_t gamma, std::int64_t c0,
                       const GammaBoundOptions& options) {
  if (psi.kind() == PenaltyKind::Step || !psi.check_concave()) {
    throw std::invalid_argument("the bound needs a concave penalty");
  }
  if (gamma < 1 || c0 < 1) throw std::invalid_argument("gamma and c0 must be >= 1");
  if (gamma > c0) throw std::domain_error("gamma must not exceed c0");

  const TailIntegral tail(psi, options.panels);
  const double c = static_cast<double>(c0);
  const double g = static_cast<double>(gamma);

  GammaBound out;
  out.psi = psi;
  out.gamma = gamma;
  out.c0 = c0;
  const Minimum m1 = minimize_on(1.0 - 1.0 / c, options, [&](double x) {
    return (1.0 - x) / (1.0 / c + (1.0 + g / c) * (1.0 - psi(x)) + tail(x + 1.0 / c));
  });
  const Minimum m2 = minimize_on(1.0 - 1.0 / g, options, [&](double x) {
    return (1.0 - x) / (1.0 / g + 1.0 - psi(x) + tail(x + 1.0 / g));
  });
  out.gamma1 = m1.value;
  out.argmin1 = m1.x;
  out.gamma2 = m2.value;
  out.argmin2 = m2.x;
  out.value = std::min(out.gamma1, out.gamma2);
  return out;
}

double gamma_bound_instability(const Penalty& psi, std::int64_t gamma, std::int64_t c0) {
  const GammaBoundOptions base;
  GammaBoundOptions fine = base;
  fine.grid_points *= 2;
  fine.panels *= 2;
  return std::abs(gamma_bound(psi, gamma, c0, base).value - gamma_bound(psi, gamma, c0, fine).value);
}

// ---------------------------------------------------------------------------

LpProblem build_lp(const SimTrace& trace, const Instance& inst, std::int64_t gamma) {
  require_batched_trace(trace, inst);
  if (trace.policy.batch_threshold() != gamma) {
    throw std::invalid_argument("trace was produced with a different batch threshold");
  }
  if (inst.stochastic_duration()) {
    throw std::invalid_argument("the LP benchmark needs deterministic durations");
  }
  const std::size_t n = inst.num_products();
  const Period T = inst.horizon();
  const auto ready = ready_batches(trace, n);
  std::size_t total_ready = 0;
  for (const auto& v : ready) total_ready += v.size();
  if (n > kLpMaxProducts || T > kLpMaxHorizon || total_ready > kLpMaxReadyBatches) {
    std::ostringstream msg;
    msg << "LP benchmark limited to " << kLpMaxProducts << " products, horizon " << kLpMaxHorizon
        << " and " << kLpMaxReadyBatches << " ready batches (got " << n << ", " << T << ", "
        << total_ready << ")";
    throw InstanceTooLarge(msg.str());
  }

  LpProblem lp;
  // terms[i][b][t - 1]: (variable, phi) pairs that draw on batch b of i at t.
  std::vector<std::map<int, std::vector<std::vector<std::pair<int, double>>>>> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const ReadyBatch& b : ready[i]) {
      terms[i][b.batch].resize(static_cast<std::size_t>(T));
    }
  }
  std::vector<std::vector<int>> by_period(static_cast<std::size_t>(T));

  for (Period t = 1; t <= T; ++t) {
    const ChoiceModel& model = inst.consumer(t);
    for (const Assortment& s : selling_subsets(model, n, inst.feasible())) {
      std::vector<double> phi;
      double value = 0.0;
      for (ProductId i : s) {
        phi.push_back(model.probability(s, i));
        value += inst.product(i).price * phi.back();
      }
      for (auto& choice : batch_choices(s, t, ready)) {
        const int var = static_cast<int>(lp.objective.size());
        lp.objective.push_back(value);
        for (std::size_t k = 0; k < choice.size(); ++k) {
          if (phi[k] > 0.0) {
            const auto i = static_cast<std::size_t>(choice[k].product);
            terms[i][choice[k].batch][static_cast<std::size_t>(t - 1)].emplace_back(var, phi[k]);
          }
        }
        by_period[static_cast<std::size_t>(t - 1)].push_back(var);
        lp.variables.push_back({t, std::move(choice)});
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Product& prod = inst.product(static_cast<ProductId>(i));
    if (prod.unlimited) continue;
    for (const ReadyBatch& b : ready[i]) {
      const auto& per_t = terms[i][b.batch];
      const bool first = b.batch == 0;
      for (Period start = b.ready_time; start <= T; ++start) {
        LpRow row;
        row.kind = first ? LpRowKind::FirstBatch : LpRowKind::LaterBatch;
        row.product = static_cast<ProductId>(i);
        row.batch = b.batch;
        row.start = start;
        row.rhs = static_cast<double>(first ? prod.initial_inventory + gamma : gamma);
        for (Period t = start; t <= window_end(start, prod.duration, T); ++t) {
          const auto& cell = per_t[static_cast<std::size_t>(t - 1)];
          row.coefficients.insert(row.coefficients.end(), cell.begin(), cell.end());
        }
        if (!row.coefficients.empty()) lp.rows.push_back(std::move(row));
      }
    }
  }
  for (Period t = 1; t <= T; ++t) {
    const auto& vars = by_period[static_cast<std::size_t>(t - 1)];
    if (vars.empty()) continue;
    LpRow row;
    row.kind = LpRowKind::Period;
    row.start = t;
    row.rhs = 1.0;
    for (int v : vars) row.coefficients.emplace_back(v, 1.0);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

double lp_violation(const LpProblem& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const LpRow& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [j, a] : row.coefficients) lhs += a * x[static_cast<std::size_t>(j)];
    worst = std::max(worst, lhs - row.rhs);
  }
  return worst;
}

LpSolution solve_lp(const LpProblem& lp, std::int64_t max_iterations) {
  constexpr double kTol = 1e-9;
  const std::size_t m = lp.rows.size();
  const std::size_t nv = lp.num_variables();
  for (const LpRow& row : lp.rows) {
    if (!(row.rhs >= 0.0) || !std::isfinite(row.rhs)) {
      throw std::invalid_argument("solve_lp needs finite, non-negative right-hand sides");
    }
  }
  const std::size_t cols = nv + m + 1;  // structural, slack, rhs
  std::vector<double> tab((m + 1) * cols, 0.0);
  auto cell = [&](std::size_t r, std::size_t c) -> double& { return tab[r * cols + c]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (const auto& [j, a] : lp.rows[r].coefficients) cell(r, static_cast<std::size_t>(j)) += a;
    cell(r, nv + r) = 1.0;
    cell(r, cols - 1) = lp.rows[r].rhs;
    basis[r] = nv + r;
  }
  for (std::size_t j = 0; j < nv; ++j) cell(m, j) = -lp.objective[j];

  LpSolution out;
  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (cell(m, j) < -kTol) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    if (out.iterations >= max_iterations) {
      throw LpNumericalFailure("simplex iteration cap reached");
    }
    // Minimum ratio, ties to the smallest basic variable.
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = cell(r, enter);
      if (a > kTol) best_ratio = std::min(best_ratio, cell(r, cols - 1) / a);
    }
    if (!std::isfinite(best_ratio)) throw LpNumericalFailure("LP is unbounded");
    std::size_t leave = m;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = cell(r, enter);
      if (a > kTol && cell(r, cols - 1) / a <= best_ratio + kTol &&
          (leave == m || basis[r] < basis[leave])) {
        leave = r;
      }
    }

    const double pivot = cell(leave, enter);
    for (std::size_t c = 0; c < cols; ++c) cell(leave, c) /= pivot;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double factor = cell(r, enter);
      if (factor == 0.0) continue;
      double* dst = &tab[r * cols];
      const double* src = &tab[leave * cols];
      for (std::size_t c = 0; c < cols; ++c) dst[c] -= factor * src[c];
      dst[enter] = 0.0;
    }
    basis[leave] = enter;
    ++out.iterations;
  }

  out.x.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < nv) out.x[basis[r]] = std::max(0.0, cell(r, cols - 1));
  }
  const double violation = lp_violation(lp, out.x);
  if (violation > 1e-7) {
    std::ostringstream msg;
    msg << "simplex returned a point violating the constraints by " << violation;
    throw LpNumericalFailure(msg.str());
  }
  out.value = std::inner_product(lp.objective.begin(), lp.objective.end(), out.x.begin(), 0.0);
  return out;
}

// ---------------------------------------------------------------------------

const BatchDual* DualCertificate::find(ProductId i, int j) const {
  for (const BatchDual& b : batches) {
    if (b.product == i && b.batch == j) return &b;
  }
  return nullptr;
}

DualCertificate certify_run(const SimTrace& trace, const Instance& inst) {
  const PolicySpec& spec = trace.policy;
  return certify_run(trace, inst,
                     gamma_bound(spec.psi, spec.batch_threshold(), inst.min_initial_inventory()).value);
}

DualCertificate certify_run(const SimTrace& trace, const Instance& inst, double bound) {
  require_batched_trace(trace, inst);
  const Penalty& psi = trace.policy.psi;
  const std::int64_t gamma = trace.policy.batch_threshold();
  const Period T = inst.horizon();

  DualCertificate cert;
  cert.bound = bound;
  cert.primal = trace.total_revenue;
  cert.lambda.assign(static_cast<std::size_t>(T), 0.0);

  std::map<std::pair<ProductId, int>, std::vector<const SaleRecord*>> by_batch;
  for (const SaleRecord& s : trace.sales) {
    cert.lambda[static_cast<std::size_t>(s.t - 1)] = s.revenue * psi(std::clamp(s.level, 0.0, 1.0));
    by_batch[{s.product, s.batch}].push_back(&s);
  }

  double dual = std::accumulate(cert.lambda.begin(), cert.lambda.end(), 0.0);
  double worst = std::numeric_limits<double>::infinity();
  for (const BatchRecord& rec : trace.batches) {
    const Product& prod = inst.product(rec.product);
    if (!rec.ready || prod.unlimited || rec.members <= 0) continue;
    BatchDual bd;
    bd.product = rec.product;
    bd.batch = rec.index;
    bd.members = rec.members;
    bd.ready_time = rec.ready_time;
    const double size = static_cast<double>(rec.members);
    const double r = prod.price;

    std::vector<iap::Interval> intervals;
    if (auto it = by_batch.find({rec.product, rec.index}); it != by_batch.end()) {
      for (const SaleRecord* s : it->second) {
        bd.times.push_back(s->t);
        bd.return_times.push_back(s->return_time);
        // A unit sold at t is in use through its return period minus one.
        const std::int64_t last = s->return_time == kNoReturn ? T : std::min<std::int64_t>(T, s->return_time - 1);
        intervals.push_back({s->t, std::max<std::int64_t>(s->t, last)});
      }
    }
    if (!intervals.empty()) bd.labels = iap::solve(intervals).labels;
    double theta_sum = 0.0;
    for (int label : bd.labels) {
      const double g = 1.0 - static_cast<double>(label - 1) / size;
      const double theta = r * (psi(std::clamp(g, 0.0, 1.0)) - psi(std::clamp(g - 1.0 / size, 0.0, 1.0)));
      bd.g.push_back(g);
      bd.theta.push_back(theta);
      theta_sum += theta;
    }
    dual += static_cast<double>(rec.index == 0 ? prod.initial_inventory + gamma : gamma) * theta_sum;

    // Pointwise inequality for every t from the ready time: units sold
    // before t and not yet back determine both f and the theta sum.
    std::vector<double> d_theta(static_cast<std::size_t>(T) + 2, 0.0);
    std::vector<std::int64_t> d_count(static_cast<std::size_t>(T) + 2, 0);
    for (std::size_t k = 0; k < bd.times.size(); ++k) {
      const Period from = bd.times[k] + 1;
      const Period to = bd.return_times[k] == kNoReturn ? T + 1 : std::min<Period>(T + 1, bd.return_times[k]);
      if (from >= to) continue;
      d_theta[static_cast<std::size_t>(from)] += bd.theta[k];
      d_theta[static_cast<std::size_t>(to)] -= bd.theta[k];
      ++d_count[static_cast<std::size_t>(from)];
      --d_count[static_cast<std::size_t>(to)];
    }
    double in_use_theta = 0.0;
    std::int64_t in_use = 0;
    for (Period t = 1; t <= T; ++t) {
      in_use_theta += d_theta[static_cast<std::size_t>(t)];
      in_use += d_count[static_cast<std::size_t>(t)];
      if (t < rec.ready_time) continue;
      const double f = std::clamp(1.0 - static_cast<double>(in_use) / size, 0.0, 1.0);
      const double slack = r * psi(f) + in_use_theta - r;
      if (slack < worst) worst = slack;
      if (slack < -1e-9 && cert.pointwise_ok) {
        cert.pointwise_ok = false;
        std::ostringstream msg;
        msg << "pointwise inequality fails for product " << rec.product + 1 << " batch "
            << rec.index + 1 << " at t=" << t << " (slack " << slack << ")";
        cert.failure = msg.str();
      }
    }
    cert.batches.push_back(std::move(bd));
  }
  cert.worst_pointwise_slack = std::isfinite(worst) ? worst : 0.0;
  cert.dual = dual;
  cert.ratio_ok = cert.primal >= bound * dual - 1e-9 * std::max(1.0, dual);
  if (!cert.ratio_ok && cert.failure.empty()) {
    std::ostringstream msg;
    msg << "revenue " << cert.primal << " below " << bound << " x dual " << dual;
    cert.failure = msg.str();
  }
  return cert;
}

// ---------------------------------------------------------------------------

bool DualExpectationReport::ok() const {
  return std::all_of(samples.begin(), samples.end(), [](const DualConstraintSample& s) { return s.ok; });
}

DualExpectationReport dual_expectation_check(const Instance& inst, const Penalty& psi,
                                             std::int64_t gamma, int replications,
                                             std::uint64_t seed, int max_samples,
                                             Execution execution) {
  if (inst.num_products() > 3 || inst.horizon() > 15) {
    throw InstanceTooLarge("dual expectation check is limited to 3 products and 15 periods");
  }
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  const PolicySpec spec = PolicySpec::bib(psi, static_cast<int>(gamma));
  const std::size_t n = inst.num_products();
  const Period T = inst.horizon();

  // Ready times depend on shocks only, so one run fixes the batch structure.
  const SimTrace first = run(inst, spec, seed, RunOptions{false});
  const auto ready = ready_batches(first, n);

  struct Candidate {
    Period t;
    std::vector<BatchChoice> assortment;
    std::vector<double> phi;
    double target;
  };
  std::vector<Candidate> candidates;
  for (Period t = 1; t <= T; ++t) {
    const ChoiceModel& model = inst.consumer(t);
    for (const Assortment& s : selling_subsets(model, n, inst.feasible())) {
      std::vector<double> phi;
      double target = 0.0;
      for (ProductId i : s) {
        phi.push_back(model.probability(s, i));
        target += inst.product(i).price * phi.back();
      }
      for (auto& choice : batch_choices(s, t, ready)) candidates.push_back({t, std::move(choice), phi, target});
    }
  }
  if (static_cast<int>(candidates.size()) > max_samples) {
    // Partial Fisher-Yates on a counter-based stream keeps the subset portable.
    const CounterRng rng(seed);
    RngCursor cursor(rng, RngStream::Sampling);
    for (int k = 0; k < max_samples; ++k) {
      const auto span = static_cast<double>(candidates.size() - static_cast<std::size_t>(k));
      const auto pick = static_cast<std::size_t>(k) + static_cast<std::size_t>(cursor.uniform() * span);
      std::swap(candidates[static_cast<std::size_t>(k)], candidates[std::min(pick, candidates.size() - 1)]);
    }
    candidates.resize(static_cast<std::size_t>(max_samples));
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.t != b.t) return a.t < b.t;
      return std::lexicographical_compare(
          a.assortment.begin(), a.assortment.end(), b.assortment.begin(), b.assortment.end(),
          [](const BatchChoice& x, const BatchChoice& y) {
            return std::pair{x.product, x.batch} < std::pair{y.product, y.batch};
          });
    });
  }

  const std::size_t count = candidates.size();
  std::vector<double> slack(count * static_cast<std::size_t>(replications), 0.0);
  kernels::for_each_index(replications, execution, [&](std::int64_t rep) {
    const SimTrace tr = run(inst, spec, seed + static_cast<std::uint64_t>(rep), RunOptions{false});
    const DualCertificate cert = certify_run(tr, inst, 0.0);
    for (std::size_t c = 0; c < count; ++c) {
      const Candidate& cand = candidates[c];
      double lhs = cert.lambda[static_cast<std::size_t>(cand.t - 1)];
      for (std::size_t k = 0; k < cand.assortment.size(); ++k) {
        const BatchChoice& bc = cand.assortment[k];
        const BatchDual* bd = cert.find(bc.product, bc.batch);
        if (bd == nullptr || cand.phi[k] == 0.0) continue;
        const std::int64_t d = inst.product(bc.product).duration;
        const std::int64_t lo = d >= kInfiniteDuration ? 1 : cand.t - d + 1;
        double window = 0.0;
        for (std::size_t s = 0; s < bd->times.size(); ++s) {
          if (bd->times[s] >= lo && bd->times[s] <= cand.t) window += bd->theta[s];
        }
        lhs += cand.phi[k] * window;
      }
      slack[static_cast<std::size_t>(rep) * count + c] = lhs - cand.target;
    }
  });

  DualExpectationReport report;
  report.replications = replications;
  for (std::size_t c = 0; c < count; ++c) {
    double sum = 0.0;
    double sq = 0.0;
    for (int rep = 0; rep < replications; ++rep) {
      const double v = slack[static_cast<std::size_t>(rep) * count + c];
      sum += v;
      sq += v * v;
    }
    const double mean = sum / replications;
    double se = 0.0;
    if (replications > 1) {
      const double var = std::max(0.0, (sq - replications * mean * mean) / (replications - 1));
      se = std::sqrt(var / replications);
    }
    DualConstraintSample sample{candidates[c].t, candidates[c].assortment, mean, se, true};
    sample.ok = mean >= -3.0 * se - 1e-9;
    report.samples.push_back(std::move(sample));
  }
  return report;
}

}  // namespace invbal
