#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "invbal/engine.hpp"
#include "invbal/generators.hpp"
#include "invbal/parallel.hpp"

namespace invbal {

/// BIB(gamma), SCIB, DCIB, USIB and GREED in table order.
std::vector<PolicySpec> table_policies(const Penalty& psi, int gamma);

/// One artifact-vs-published value.
struct ReportRow {
  std::string scenario;
  std::string policy;
  double artifact = 0.0;
  std::optional<double> published;
  std::string note;

  /// (artifact - published) / published, if a published value exists.
  std::optional<double> deviation() const;
};

struct Report {
  std::string table;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  const ReportRow* find(const std::string& scenario, const std::string& policy) const;
};

/// scenario,policy,artifact,published,deviation,note with 6 decimals; notes
/// follow as '#' lines.
void write_report_csv(std::ostream& out, const Report& report);

// Stylized revenue table -------------------------------------------------------

struct StylizedTableOptions {
  std::int64_t n0 = 100;
  std::int64_t c = 50;
  int gamma = 10;
};

/// G(10, 0.5, 0.32), Ghat(10, 0.5, 0.3) and Gbar(0.1), every policy on the
/// instance built against the family's target policy.
Report reproduce_stylized(const StylizedTableOptions& options = {});

// Random MNL tables -------------------------------------------------------------

enum class RandomVariant { Original, NegativeShocks, GeometricDurations };

struct RandomTableOptions {
  RandomVariant variant = RandomVariant::Original;
  std::vector<double> kappas{0, 1, 2, 3};
  int replications = 20;
  std::uint64_t seed = 0;
  int gamma = 10;
  double flip_probability = 0.2;
  Execution execution = Execution::Parallel;
};

struct RandomTable {
  Report report;
  /// stats[k] holds table_policies() results for kappas[k].
  std::vector<std::vector<RunStats>> stats;
  /// Largest (IB mean - GREED mean) / GREED mean per kappa.
  std::vector<double> max_gap;
};

InstanceFactory random_factory(const RandomTableOptions& options, double kappa);
RandomTable reproduce_random(const RandomTableOptions& options = {});

// Competitive-ratio upper bounds ---------------------------------------------------

struct CrOptions {
  std::int64_t n0 = 500;
  int levels = 20;
  std::vector<std::int64_t> cs{50, 100, 200};
  std::int64_t gbar_c = 200;
  double gbar_epsilon = 0.01;
};

struct CrPoint {
  std::string family;
  std::string policy;
  std::int64_t c = 0;
  double revenue = 0.0;
  double opt = 0.0;
  double ratio = 0.0;
};

struct CrSweep {
  Report report;
  std::vector<CrPoint> points;
  double scib_min = 0.0;
  double scib_max = 0.0;
  double dcib_min = 0.0;
  double usib_ratio = 0.0;
  /// (c + c^2) / (c + 2c^2 - c^2 eps).
  double usib_closed_form = 0.0;
};

CrSweep reproduce_cr_upper_bounds(const CrOptions& options = {});

}  // namespace invbal
