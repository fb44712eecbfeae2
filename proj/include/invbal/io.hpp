#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "invbal/engine.hpp"
#include "invbal/generators.hpp"
#include "invbal/iap.hpp"
#include "invbal/instance.hpp"
#include "invbal/penalty.hpp"
#include "invbal/policy.hpp"

namespace invbal::io {

/// Keys keep insertion order so emitted files are stable and readable.
using Json = nlohmann::ordered_json;

/// Bad user input: malformed files, unknown names, out-of-range values.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config problems, one "/json/pointer: message" line each.
class ConfigError : public UserError {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Fixed-point with 6 decimals, '.' separator, no grouping.
std::string fixed6(double v);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// "exponential", "identity", "step" or {"knots": [[x, y], ...]}.
Penalty penalty_from_json(const Json& j);
Json to_json(const Penalty& psi);
/// Same names as JSON plus "tabulated:x1:y1,x2:y2,..." for the command line.
Penalty parse_penalty(const std::string& text);

/// {"kind": "BIB", "psi": ..., "gamma": 10}; kind is case-insensitive.
PolicySpec policy_from_json(const Json& j);
Json to_json(const PolicySpec& spec);

/// Instance files number products from 1. "shocks" is a dense n x T integer
/// matrix; "consumers" holds one typed choice-model object per period.
Instance instance_from_json(const Json& j);
Json to_json(const Instance& inst);

Json to_json(const SimTrace& trace);
/// Per-period summary: t, chosen (1-based, empty for no purchase), revenue,
/// cumulative revenue.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

/// policy,mean,sd,min,max
void write_stats_csv(std::ostream& out, std::span<const RunStats> stats);
/// policy,replication,seed,revenue
void write_values_csv(std::ostream& out, std::span<const RunStats> stats);

/// "a b" per line (blank lines and '#' comments skipped); an optional third
/// column carries a label. Errors name the offending line.
struct IntervalFile {
  std::vector<iap::Interval> intervals;
  std::vector<int> labels;
};
IntervalFile read_intervals(std::istream& in);

enum class ScenarioKind { RandomMnl, Stylized, Tiny, InstanceFile };

struct ExperimentConfig {
  ScenarioKind scenario = ScenarioKind::RandomMnl;
  RandomMnlParams random;
  StylizedParams stylized;
  TinyParams tiny;
  std::filesystem::path instance_path;
  std::optional<double> negative_flip_probability;
  std::optional<double> duration_success_probability;
  std::vector<PolicySpec> policies;
  int replications = 1;
  std::uint64_t seed = 0;
  std::filesystem::path stats_csv;
  std::filesystem::path values_csv;
  std::filesystem::path traces_json;
  std::filesystem::path trace_csv;
};

/// Checks the config against the published schema (docs/config.schema.json)
/// and collects every violation before throwing ConfigError. Relative paths
/// resolve against `base_dir`.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});

/// Instance for replication seed `seed`; stylized and file scenarios ignore it.
InstanceFactory make_factory(const ExperimentConfig& config);

}  // namespace invbal::io
