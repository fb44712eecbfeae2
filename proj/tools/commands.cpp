#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "invbal/analysis.hpp"
#include "invbal/engine.hpp"
#include "invbal/experiments.hpp"
#include "invbal/iap.hpp"
#include "invbal/io.hpp"

namespace invbal::cli {

namespace {

using io::Json;
using io::UserError;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Leading timestamp comment unless --deterministic.
std::string stamp_csv(const Common& common, const std::string& body) {
  if (common.deterministic) return body;
  return "# generated " + utc_now() + "\n" + body;
}

std::string stamp_json(const Common& common, Json j) {
  if (!common.deterministic) {
    Json stamped{{"generated", utc_now()}};
    stamped.update(j);
    j = std::move(stamped);
  }
  return j.dump(2) + "\n";
}

void emit(const std::filesystem::path& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
  } else {
    io::write_text_file(path, text);
  }
}

/// "BIB:10", "bib", "SCIB", "greed"; the penalty comes from --psi.
PolicySpec parse_policy_arg(const std::string& text, const Penalty& psi) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  Json j{{"kind", kind}};
  if (kind != "greed" && kind != "GREED") j["psi"] = io::to_json(psi);
  if (colon != std::string::npos) {
    const std::string tail = text.substr(colon + 1);
    std::size_t used = 0;
    int gamma = 0;
    try {
      gamma = std::stoi(tail, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (tail.empty() || used != tail.size()) throw UserError("--policy " + text + ": expected KIND or BIB:GAMMA");
    j["gamma"] = gamma;
  }
  return io::policy_from_json(j);
}

io::ExperimentConfig load_config(const std::filesystem::path& path) {
  return io::parse_config(io::read_json_file(path), path.parent_path());
}

/// Instance per replication seed, from --instance or the config's scenario.
InstanceFactory instance_source(const std::filesystem::path& instance, const std::filesystem::path& config) {
  if (!instance.empty()) {
    const auto inst = std::make_shared<const Instance>(io::instance_from_json(io::read_json_file(instance)));
    return [inst](std::uint64_t) { return *inst; };
  }
  if (config.empty()) throw UserError("one of --instance or --config is required");
  return io::make_factory(load_config(config));
}

io::IntervalFile read_interval_path(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open " + path.string());
  try {
    return io::read_intervals(in);
  } catch (const UserError& e) {
    throw UserError(path.string() + ": " + e.what());
  }
}

Json one_based(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x < 0 ? Json(nullptr) : Json(x + 1));
  return out;
}

std::filesystem::path with_suffix(const std::filesystem::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + "_" + suffix + p.extension().string());
}

std::string psi_name(const Penalty& psi) { return std::string(to_string(psi.kind())); }

int replications_or(const Common& common, int fallback) {
  const int r = common.replications.value_or(fallback);
  if (r < 1) throw UserError("--replications must be >= 1");
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

int simulate(const Common& common, const SimulateArgs& args) {
  io::ExperimentConfig cfg;
  if (!args.config.empty()) {
    cfg = load_config(args.config);
  } else if (args.instance.empty()) {
    throw UserError("simulate needs --config or --instance");
  }
  if (!args.instance.empty()) {
    cfg.scenario = io::ScenarioKind::InstanceFile;
    cfg.instance_path = args.instance;
  }
  if (!args.policies.empty()) {
    const Penalty psi = io::parse_penalty(args.psi);
    cfg.policies.clear();
    for (const std::string& p : args.policies) cfg.policies.push_back(parse_policy_arg(p, psi));
  }
  if (cfg.policies.empty()) cfg.policies = table_policies(Penalty::exponential(), 1);
  if (common.seed) cfg.seed = *common.seed;
  cfg.replications = replications_or(common, cfg.replications);

  const InstanceFactory factory = io::make_factory(cfg);
  const auto stats = monte_carlo(factory, cfg.policies, cfg.replications, cfg.seed);

  std::ostringstream csv;
  io::write_stats_csv(csv, stats);
  emit(common.out.empty() ? cfg.stats_csv : common.out, stamp_csv(common, csv.str()));
  if (!cfg.values_csv.empty()) {
    std::ostringstream values;
    io::write_values_csv(values, stats);
    emit(cfg.values_csv, stamp_csv(common, values.str()));
  }
  if (!cfg.traces_json.empty() || !cfg.trace_csv.empty()) {
    // Full traces of the first replication only.
    const Instance inst = factory(cfg.seed);
    Json traces = Json::array();
    for (std::size_t k = 0; k < cfg.policies.size(); ++k) {
      const SimTrace trace = run(inst, cfg.policies[k], cfg.seed);
      if (!cfg.traces_json.empty()) traces.push_back(io::to_json(trace));
      if (!cfg.trace_csv.empty()) {
        std::ostringstream t;
        io::write_trace_csv(t, trace);
        const auto path = cfg.policies.size() == 1
                              ? cfg.trace_csv
                              : with_suffix(cfg.trace_csv, std::to_string(k + 1) + "_" + cfg.policies[k].label());
        emit(path, stamp_csv(common, t.str()));
      }
    }
    if (!cfg.traces_json.empty()) emit(cfg.traces_json, stamp_json(common, Json{{"traces", traces}}));
  }
  return 0;
}

int reproduce(const Common& common, const ReproduceArgs& args) {
  Report report;
  if (args.table == "stylized") {
    StylizedTableOptions o;
    if (args.n0) o.n0 = *args.n0;
    if (args.c) o.c = *args.c;
    if (args.gamma) o.gamma = *args.gamma;
    report = reproduce_stylized(o);
  } else if (args.table == "random" || args.table == "random-negative" || args.table == "random-geometric") {
    RandomTableOptions o;
    o.variant = args.table == "random"            ? RandomVariant::Original
                : args.table == "random-negative" ? RandomVariant::NegativeShocks
                                                  : RandomVariant::GeometricDurations;
    o.replications = replications_or(common, o.replications);
    if (common.seed) o.seed = *common.seed;
    if (args.gamma) o.gamma = *args.gamma;
    report = reproduce_random(o).report;
  } else if (args.table == "cr-upper-bounds") {
    CrOptions o;
    if (args.n0) o.n0 = *args.n0;
    if (!args.cs.empty()) o.cs = args.cs;
    if (args.c) o.gbar_c = *args.c;
    report = reproduce_cr_upper_bounds(o).report;
  } else {
    throw UserError("unknown table \"" + args.table + "\"");
  }
  std::ostringstream csv;
  write_report_csv(csv, report);
  emit(common.out, stamp_csv(common, csv.str()));
  return 0;
}

int iap_solve(const Common& common, const IapArgs& args) {
  const io::IntervalFile file = read_interval_path(args.input);
  const iap::Assignment a = iap::solve(file.intervals);
  std::ostringstream out;
  if (args.json) {
    Json chains = Json::array();
    for (const auto& c : a.chains) chains.push_back(one_based(c));
    Json j{{"labels", a.labels},
           {"chains", chains},
           {"trigger", one_based(a.trigger)},
           {"predecessor", one_based(a.predecessor)},
           {"removal_order", one_based(a.removal_order)}};
    out << stamp_json(common, j);
  } else {
    if (!common.deterministic) out << "# generated " << utc_now() << '\n';
    for (int label : a.labels) out << label << '\n';
    out << "# chains\n";
    for (const auto& chain : a.chains) {
      for (std::size_t k = 0; k < chain.size(); ++k) out << (k ? " " : "") << chain[k] + 1;
      out << '\n';
    }
  }
  emit(common.out, out.str());
  return 0;
}

int iap_check(const Common& common, const IapArgs& args) {
  const io::IntervalFile file = read_interval_path(args.input);
  if (file.labels.size() != file.intervals.size()) {
    throw UserError(args.input.string() + ": iap check needs a label column (\"a b label\")");
  }
  const bool local = iap::check_local_dominance(file.intervals, file.labels);
  const bool global = iap::check_global_dominance(file.intervals, file.labels);
  const auto chains = iap::greedy_partition(file.labels);
  const bool partition = !chains.empty() && iap::check_partition_monotonicity(file.labels, chains);
  std::ostringstream out;
  if (args.json) {
    out << stamp_json(common, Json{{"local_dominance", local},
                                   {"global_dominance", global},
                                   {"partition_monotonicity", partition}});
  } else {
    if (!common.deterministic) out << "# generated " << utc_now() << '\n';
    auto verdict = [](bool ok) { return ok ? "pass" : "fail"; };
    out << "local-dominance: " << verdict(local) << '\n'
        << "global-dominance: " << verdict(global) << '\n'
        << "partition-monotonicity: " << verdict(partition) << '\n';
  }
  emit(common.out, out.str());
  return 0;
}

int bound(const Common& common, const BoundArgs& args) {
  const Penalty psi = io::parse_penalty(args.psi);
  if (args.c0s.empty()) throw UserError("bound needs at least one --c0");
  if (args.gammas.empty() && !args.sqrt_gamma) throw UserError("bound needs --gamma or --sqrt-gamma");
  std::ostringstream csv;
  csv << "psi,gamma,c0,Gamma1,Gamma2,Gamma,argmin_x\n";
  for (std::int64_t c0 : args.c0s) {
    std::vector<std::int64_t> gammas = args.gammas;
    if (args.sqrt_gamma) {
      gammas = {static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(c0)) - 1e-12))};
    }
    for (std::int64_t gamma : gammas) {
      const GammaBound b = gamma_bound(psi, gamma, c0);
      const double x = b.gamma1 <= b.gamma2 ? b.argmin1 : b.argmin2;
      csv << psi_name(psi) << ',' << gamma << ',' << c0 << ',' << io::fixed6(b.gamma1) << ','
          << io::fixed6(b.gamma2) << ',' << io::fixed6(b.value) << ',' << io::fixed6(x) << '\n';
    }
  }
  emit(common.out, stamp_csv(common, csv.str()));
  return 0;
}

int lp_benchmark(const Common& common, const RunArgs& args) {
  const Penalty psi = io::parse_penalty(args.psi);
  const InstanceFactory source = instance_source(args.instance, args.config);
  const std::uint64_t seed = common.seed.value_or(0);
  const int replications = replications_or(common, 1);
  const PolicySpec bib = PolicySpec::bib(psi, static_cast<int>(args.gamma));

  Json runs = Json::array();
  double revenue_sum = 0.0;
  double lp_sum = 0.0;
  double bound = 0.0;
  for (int k = 0; k < replications; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const Instance inst = source(s);
    const SimTrace trace = run(inst, bib, s);
    const LpProblem lp = build_lp(trace, inst, args.gamma);
    const LpSolution sol = solve_lp(lp);
    bound = gamma_bound(psi, args.gamma, inst.min_initial_inventory()).value;
    revenue_sum += trace.total_revenue;
    lp_sum += sol.value;
    runs.push_back({{"seed", s},
                    {"products", inst.num_products()},
                    {"horizon", inst.horizon()},
                    {"c0", inst.min_initial_inventory()},
                    {"variables", lp.num_variables()},
                    {"rows", lp.rows.size()},
                    {"iterations", sol.iterations},
                    {"lp_value", sol.value},
                    {"bib_revenue", trace.total_revenue},
                    {"max_violation", lp_violation(lp, sol.x)},
                    {"gamma_bound", bound}});
  }
  Json j{{"psi", psi_name(psi)},
         {"gamma", args.gamma},
         {"replications", replications},
         {"mean_bib_revenue", revenue_sum / replications},
         {"mean_lp_value", lp_sum / replications},
         {"runs", runs}};
  emit(common.out, stamp_json(common, j));
  return 0;
}

int certify(const Common& common, const RunArgs& args) {
  const Penalty psi = io::parse_penalty(args.psi);
  const InstanceFactory source = instance_source(args.instance, args.config);
  const std::uint64_t seed = common.seed.value_or(0);
  const int replications = replications_or(common, 1);
  const PolicySpec bib = PolicySpec::bib(psi, static_cast<int>(args.gamma));

  std::map<std::int64_t, double> bounds;
  Json runs = Json::array();
  bool all_ok = true;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < replications; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const Instance inst = source(s);
    const std::int64_t c0 = inst.min_initial_inventory();
    auto it = bounds.find(c0);
    if (it == bounds.end()) it = bounds.emplace(c0, gamma_bound(psi, args.gamma, c0).value).first;
    const DualCertificate cert = certify_run(run(inst, bib, s), inst, it->second);
    all_ok = all_ok && cert.ok();
    worst_slack = std::min(worst_slack, cert.worst_pointwise_slack);
    Json r{{"seed", s},
           {"primal", cert.primal},
           {"dual", cert.dual},
           {"bound", cert.bound},
           {"worst_pointwise_slack", cert.worst_pointwise_slack},
           {"pointwise_ok", cert.pointwise_ok},
           {"ratio_ok", cert.ratio_ok}};
    if (!cert.failure.empty()) r["failure"] = cert.failure;
    runs.push_back(r);
  }
  Json j{{"psi", psi_name(psi)},
         {"gamma", args.gamma},
         {"replications", replications},
         {"all_ok", all_ok},
         {"worst_pointwise_slack", std::isfinite(worst_slack) ? Json(worst_slack) : Json(nullptr)},
         {"runs", runs}};
  emit(common.out, stamp_json(common, j));
  if (!all_ok) std::cerr << "certify: at least one run failed its dual certificate\n";
  return all_ok ? 0 : 3;
}

}  // namespace invbal::cli
