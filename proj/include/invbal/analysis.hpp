#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "invbal/engine.hpp"
#include "invbal/instance.hpp"
#include "invbal/parallel.hpp"
#include "invbal/penalty.hpp"

namespace invbal {

// ---------------------------------------------------------------------------
// Competitive-ratio bound

struct GammaBoundOptions {
  /// Uniform grid points scanned before refinement.
  int grid_points = 10000;
  /// Simpson panels of the cumulative integral table over [0, 1].
  int panels = 1 << 17;
  /// Golden-section stopping width in x.
  double x_tolerance = 1e-8;
  Execution execution = Execution::Serial;
};

struct GammaBound {
  Penalty psi;
  std::int64_t gamma = 1;
  std::int64_t c0 = 1;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double value = 0.0;
  double argmin1 = 0.0;
  double argmin2 = 0.0;
};

/// Gamma(psi, gamma) with c0 the smallest initial inventory.
///
/// Gamma1 = min over x in [0, 1 - 1/c0] of
///   (1 - x) / (1/c0 + (1 + gamma/c0)(1 - psi(x)) + int_{x + 1/c0}^1 psi),
/// Gamma2 = min over x in [0, 1 - 1/gamma] of
///   (1 - x) / (1/gamma + 1 - psi(x) + int_{x + 1/gamma}^1 psi).
/// Throws std::invalid_argument for a non-concave psi or gamma < 1 and
/// std::domain_error for gamma > c0.
GammaBound gamma_bound(const Penalty& psi, std::int64_t gamma, std::int64_t c0,
                       const GammaBoundOptions& options = {});

/// Recomputes with twice the grid and panels; returns |difference in Gamma|.
double gamma_bound_instability(const Penalty& psi, std::int64_t gamma, std::int64_t c0);

// ---------------------------------------------------------------------------
// Batch-specified LP benchmark

/// Size limits for building the LP benchmark.
inline constexpr int kLpMaxProducts = 4;
inline constexpr Period kLpMaxHorizon = 40;
inline constexpr int kLpMaxReadyBatches = 8;

class LpNumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One (product, ready batch) pair of a batch-specified assortment; batch
/// indices are 0-based like the ledger's.
struct BatchChoice {
  ProductId product = 0;
  int batch = 0;
  bool operator==(const BatchChoice&) const = default;
};

struct LpVariable {
  Period t = 0;
  std::vector<BatchChoice> assortment;
};

enum class LpRowKind { FirstBatch, LaterBatch, Period };

struct LpRow {
  LpRowKind kind = LpRowKind::Period;
  ProductId product = -1;
  int batch = -1;
  /// Window start for capacity rows, the period for Period rows.
  Period start = 0;
  std::vector<std::pair<int, double>> coefficients;
  double rhs = 0.0;
};

/// max c x subject to A x <= b, x >= 0, with b >= 0.
struct LpProblem {
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<LpVariable> variables;

  std::size_t num_variables() const { return objective.size(); }
};

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;
  std::int64_t iterations = 0;
};

/// The LP relaxation of the clairvoyant optimum for a BIB execution with
/// batch threshold gamma. Ready times and ready counts come from the trace.
/// Throws InstanceTooLarge past the size limits and std::invalid_argument if
/// the trace is not a BIB(gamma) run of `inst`.
LpProblem build_lp(const SimTrace& trace, const Instance& inst, std::int64_t gamma);

/// Dense primal simplex with Bland's rule. Throws LpNumericalFailure when
/// the iteration cap is hit or the returned point is infeasible by > 1e-7.
LpSolution solve_lp(const LpProblem& lp, std::int64_t max_iterations = 1'000'000);

/// Largest violation of A x <= b and x >= 0.
double lp_violation(const LpProblem& lp, const std::vector<double>& x);

// ---------------------------------------------------------------------------
// Dual certification

struct BatchDual {
  ProductId product = 0;
  int batch = 0;
  std::int64_t members = 0;
  Period ready_time = 0;
  /// Sale periods from this batch and when each unit came back.
  std::vector<Period> times;
  std::vector<Period> return_times;
  std::vector<int> labels;
  std::vector<double> g;
  std::vector<double> theta;
};

struct DualCertificate {
  /// lambda[t - 1].
  std::vector<double> lambda;
  std::vector<BatchDual> batches;
  double bound = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  /// Smallest left-minus-right slack of the pointwise inequality.
  double worst_pointwise_slack = 0.0;
  bool pointwise_ok = true;
  bool ratio_ok = true;
  std::string failure;

  bool ok() const { return pointwise_ok && ratio_ok; }
  const BatchDual* find(ProductId i, int j) const;
};

/// Builds the dual assignment along a BIB sample path and checks it.
/// `bound` is Gamma(psi, gamma) at c0 = min_i c_i. Throws
/// std::invalid_argument if the trace is not a BIB run of `inst` or the
/// instance has negative shocks.
DualCertificate certify_run(const SimTrace& trace, const Instance& inst, double bound);
DualCertificate certify_run(const SimTrace& trace, const Instance& inst);

struct DualConstraintSample {
  Period t = 0;
  std::vector<BatchChoice> assortment;
  double mean_slack = 0.0;
  double standard_error = 0.0;
  bool ok = true;
};

struct DualExpectationReport {
  std::vector<DualConstraintSample> samples;
  int replications = 0;
  bool ok() const;
};

/// Monte-Carlo check that the averaged dual satisfies the dual constraint of
/// each sampled (t, L) within 3 standard errors. At most `max_samples` pairs
/// are checked; with more candidates a seeded subset is drawn.
DualExpectationReport dual_expectation_check(const Instance& inst, const Penalty& psi,
                                             std::int64_t gamma, int replications,
                                             std::uint64_t seed = 0, int max_samples = 400,
                                             Execution execution = Execution::Parallel);

}  // namespace invbal
