#include "invbal/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invbal/experiments.hpp"

namespace invbal::io {
namespace {

Json two_product_json() {
  return Json::parse(R"({
    "horizon": 5,
    "products": [
      {"price": 3, "inventory": 1, "duration": 2},
      {"price": 1.5, "inventory": 2, "duration": null}
    ],
    "consumers": [
      {"kind": "mnl", "alpha": [1.0, 2.0], "outside": 0.3},
      {"kind": "singleton", "accepts": [2]},
      {"kind": "mnl", "alpha": [1.0, 2.0], "outside": 0.3},
      {"kind": "mnl", "alpha": [1.0, 2.0], "outside": 0.3},
      {"kind": "singleton", "accepts": [2]}
    ],
    "shocks": [[0, 0, 2, 0, 0], [0, 0, 0, 0, 0]]
  })");
}

bool any_contains(const std::vector<std::string>& lines, const std::string& needle) {
  return std::any_of(lines.begin(), lines.end(), [&](const std::string& l) { return l.find(needle) != l.npos; });
}

std::vector<std::string> config_errors(const Json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
  return {};
}

TEST(Fixed6, FormatsSixDecimals) {
  EXPECT_EQ(fixed6(1.0), "1.000000");
  EXPECT_EQ(fixed6(2.0 / 3.0), "0.666667");
  EXPECT_EQ(fixed6(-0.0), "0.000000");
  EXPECT_EQ(fixed6(-1e-9), "0.000000");
  EXPECT_EQ(fixed6(-1.5), "-1.500000");
}

TEST(InstanceJson, ParsesOneBasedProducts) {
  const Instance inst = instance_from_json(two_product_json());
  EXPECT_EQ(inst.horizon(), 5);
  ASSERT_EQ(inst.num_products(), 2u);
  EXPECT_EQ(inst.product(0).duration, 2);
  EXPECT_FALSE(inst.product(1).returns());
  EXPECT_EQ(inst.shock(0, 3), 2);
  EXPECT_EQ(inst.shock(1, 3), 0);
  EXPECT_EQ(inst.consumer_ptr(1), inst.consumer_ptr(3));
  EXPECT_EQ(inst.consumer(2).kind(), ChoiceKind::DeterministicSingleton);
}

TEST(InstanceJson, RoundTrips) {
  const Instance inst = instance_from_json(two_product_json());
  const Json dumped = to_json(inst);
  EXPECT_TRUE(instance_from_json(dumped) == inst);
  EXPECT_EQ(to_json(instance_from_json(dumped)).dump(), dumped.dump());
}

TEST(InstanceJson, GeneratedInstancesRoundTrip) {
  RandomMnlParams p;
  p.products = 4;
  p.horizon = 30;
  p.kappa = 1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    p.seed = seed;
    const Instance inst = gen_random_mnl(p);
    EXPECT_TRUE(instance_from_json(to_json(inst)) == inst) << "seed " << seed;
  }
  TinyParams tiny;
  tiny.deterministic = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_tiny(tiny, seed);
    EXPECT_TRUE(instance_from_json(to_json(inst)) == inst) << "tiny seed " << seed;
  }
}

TEST(InstanceJson, RejectsBadInput) {
  auto broken = [](auto edit) {
    Json j = two_product_json();
    edit(j);
    return j;
  };
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["horizon"] = 0; })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["consumers"].erase(0); })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["consumers"][0] = 7; })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["consumers"][1]["accepts"] = Json::array({3}); })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["shocks"][0].erase(0); })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["shocks"].erase(1); })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["shocks"][1][0] = 0.5; })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["products"][0]["duration"] = 0; })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["consumers"][0]["kind"] = "nested"; })), UserError);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["products"][0]["price"] = "3"; })), UserError);
}

TEST(PenaltyJson, NamesAndKnots) {
  EXPECT_EQ(penalty_from_json("exponential").kind(), PenaltyKind::Exponential);
  EXPECT_EQ(parse_penalty("Identity").kind(), PenaltyKind::Identity);
  const Penalty tab = parse_penalty("tabulated:0:0,0.5:0.8,1:1");
  EXPECT_EQ(tab.kind(), PenaltyKind::Tabulated);
  EXPECT_NEAR(tab(0.25), 0.4, 1e-12);
  EXPECT_EQ(penalty_from_json(to_json(tab)).knots().size(), 3u);
  EXPECT_THROW(parse_penalty("cubic"), UserError);
  EXPECT_THROW(parse_penalty("tabulated:0:0,bad"), UserError);
  EXPECT_THROW(penalty_from_json(Json::parse(R"({"knots": [[0, 0], [1]]})")), UserError);
}

TEST(PolicyJson, RoundTripsAndRejects) {
  for (const PolicySpec& spec : table_policies(Penalty::exponential(), 4)) {
    const PolicySpec back = policy_from_json(to_json(spec));
    EXPECT_EQ(back.label(), spec.label());
    EXPECT_EQ(back.gamma, spec.gamma);
  }
  EXPECT_EQ(policy_from_json(Json::parse(R"({"kind": "bib"})")).gamma, 1);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"kind": "SCIB", "gamma": 2})")), UserError);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"kind": "BIB", "gamma": 0})")), UserError);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"kind": "GREED", "psi": "identity"})")), UserError);
  EXPECT_THROW(policy_from_json(Json::parse(R"({"kind": "LP"})")), UserError);
}

TEST(Intervals, ParsesCommentsAndLabels) {
  std::istringstream in("# header\n1 4 2\n\n2 2 1  # trailing\n3 7 2\n");
  const IntervalFile f = read_intervals(in);
  ASSERT_EQ(f.intervals.size(), 3u);
  EXPECT_EQ(f.intervals[1], (iap::Interval{2, 2}));
  EXPECT_EQ(f.labels, (std::vector<int>{2, 1, 2}));

  std::istringstream plain("1 2\n3 4\n");
  EXPECT_TRUE(read_intervals(plain).labels.empty());
}

TEST(Intervals, ErrorsNameTheLine) {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_intervals(in);
    } catch (const UserError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("1 2\n3 x\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("1 2\n1 3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("4 2\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("1 2 1\n3 4\n").find("line 2"), std::string::npos);
  EXPECT_FALSE(message("# nothing\n").empty());
}

TEST(Config, ParsesFullConfig) {
  const Json j = Json::parse(R"({
    "scenario": {"kind": "random-mnl", "products": 5, "horizon": 200, "kappa": 2},
    "variants": {"negative_shocks": {"flip_probability": 0.2}},
    "policies": [{"kind": "BIB", "gamma": 3}, {"kind": "greed"}],
    "replications": 7,
    "seed": 11,
    "outputs": {"stats_csv": "out/s.csv"}
  })");
  const ExperimentConfig cfg = parse_config(j, "/base");
  EXPECT_EQ(cfg.scenario, ScenarioKind::RandomMnl);
  EXPECT_EQ(cfg.random.products, 5);
  EXPECT_EQ(cfg.random.horizon, 200);
  EXPECT_DOUBLE_EQ(cfg.random.kappa, 2.0);
  ASSERT_TRUE(cfg.negative_flip_probability);
  EXPECT_DOUBLE_EQ(*cfg.negative_flip_probability, 0.2);
  ASSERT_EQ(cfg.policies.size(), 2u);
  EXPECT_EQ(cfg.policies[0].gamma, 3);
  EXPECT_EQ(cfg.replications, 7);
  EXPECT_EQ(cfg.seed, 11u);
  EXPECT_EQ(cfg.stats_csv, std::filesystem::path("/base/out/s.csv"));

  const Instance a = make_factory(cfg)(3);
  const Instance b = make_factory(cfg)(3);
  EXPECT_TRUE(a == b);
  EXPECT_TRUE(a.negative_shocks());
}

TEST(Config, CollectsEveryViolationWithPointers) {
  const auto errors = config_errors(Json::parse(R"({
    "scenario": {"kind": "stylized", "family": "H", "c": 0},
    "policies": [{"kind": "BIB", "gamma": 0}, {"kind": "USIB", "colour": 1}],
    "replications": 0,
    "extra": true
  })"));
  EXPECT_TRUE(any_contains(errors, "/scenario/family:")) << errors.size();
  EXPECT_TRUE(any_contains(errors, "/scenario/c:"));
  EXPECT_TRUE(any_contains(errors, "/policies/0:"));
  EXPECT_TRUE(any_contains(errors, "/policies/1/colour: unknown property"));
  EXPECT_TRUE(any_contains(errors, "/replications:"));
  EXPECT_TRUE(any_contains(errors, "/extra: unknown property"));
}

TEST(Config, RequiresScenarioAndPolicies) {
  const auto errors = config_errors(Json::object());
  EXPECT_TRUE(any_contains(errors, "\"scenario\""));
  EXPECT_TRUE(any_contains(errors, "\"policies\""));
  EXPECT_TRUE(any_contains(config_errors(Json::parse(R"({"scenario": {"kind": "zeta"}, "policies": [{"kind": "GREED"}]})")),
                           "/scenario/kind"));
  EXPECT_TRUE(any_contains(config_errors(Json::parse(R"({"scenario": {"kind": "tiny"}, "policies": []})")),
                           "/policies"));
  EXPECT_TRUE(any_contains(
      config_errors(Json::parse(
          R"({"scenario": {"kind": "tiny", "min_horizon": 9, "max_horizon": 3}, "policies": [{"kind": "GREED"}]})")),
      "min_*"));
}

TEST(Config, ShippedExamplesParse) {
  const std::filesystem::path dir = std::filesystem::path(INVBAL_SOURCE_DIR) / "docs" / "examples";
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    const ExperimentConfig cfg = parse_config(read_json_file(entry.path()), dir);
    EXPECT_NO_THROW(make_factory(cfg)(0).validate()) << entry.path();
  }
  EXPECT_GE(seen, 4);
}

TEST(Csv, StatsAndTraceColumns) {
  const Instance inst = instance_from_json(two_product_json());
  const SimTrace trace = run(inst, PolicySpec::greed(), 1);
  std::ostringstream t;
  write_trace_csv(t, trace);
  std::istringstream lines(t.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "t,chosen,revenue,cumulative");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 5);

  const std::vector<PolicySpec> greed{PolicySpec::greed()};
  const auto stats = monte_carlo([&](std::uint64_t) { return inst; }, greed, 3, 0, Execution::Serial);
  std::ostringstream s;
  write_stats_csv(s, stats);
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "policy,mean,sd,min,max");
  EXPECT_NE(s.str().find("GREED," + fixed6(stats[0].mean)), std::string::npos);
  std::ostringstream v;
  write_values_csv(v, stats);
  const std::string values = v.str();
  EXPECT_EQ(std::count(values.begin(), values.end(), '\n'), 4);
}

TEST(TraceJson, UsesOneBasedProducts) {
  const Instance inst = instance_from_json(two_product_json());
  const SimTrace trace = run(inst, PolicySpec::bib(Penalty::exponential(), 1), 2);
  const Json j = to_json(trace);
  ASSERT_TRUE(j.contains("periods"));
  for (const Json& p : j.at("periods")) {
    if (!p.at("chosen").is_null()) {
      EXPECT_GE(p.at("chosen").get<int>(), 1);
      EXPECT_LE(p.at("chosen").get<int>(), 2);
    }
  }
}

TEST(WriteTextFile, CreatesParents) {
  const auto dir = std::filesystem::temp_directory_path() / "invbal_io_test";
  std::filesystem::remove_all(dir);
  write_text_file(dir / "a" / "b.txt", "hi\n");
  std::ifstream in(dir / "a" / "b.txt");
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "hi");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace invbal::io
