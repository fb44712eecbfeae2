#include "invbal/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace invbal::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

/// Period or product number as written in files: 1-based, null for "none".
Json one_based(std::optional<ProductId> i) { return i ? Json(*i + 1) : Json(nullptr); }

Json duration_json(std::int64_t d) { return d >= kInfiniteDuration ? Json(nullptr) : Json(d); }

template <class T>
T require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw UserError(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UserError(where + ": \"" + key + "\" has the wrong type");
  }
}

// --- config checking ---------------------------------------------------------

class Checker {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) {
    errors.push_back((path.empty() ? "/" : path) + ": " + msg);
  }

  /// Object with only the listed keys; returns false if not an object.
  bool object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed,
              std::initializer_list<const char*> required = {}) {
    if (!j.is_object()) {
      fail(path, "must be an object");
      return false;
    }
    for (const char* key : required) {
      if (!j.contains(key)) fail(path, std::string("missing required property \"") + key + "\"");
    }
    for (const auto& [key, value] : j.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
      if (!known) fail(path + "/" + key, "unknown property");
    }
    return true;
  }

  template <class T>
  void integer(const Json& obj, const char* key, const std::string& path, T& target, long long lo,
               long long hi = std::numeric_limits<long long>::max()) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    const std::string p = path + "/" + key;
    if (!v.is_number_integer()) return fail(p, "must be an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > hi) return fail(p, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    target = static_cast<T>(x);
  }

  void number(const Json& obj, const char* key, const std::string& path, double& target, double lo,
              double hi, bool open_lo = false, bool open_hi = false) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    const std::string p = path + "/" + key;
    if (!v.is_number()) return fail(p, "must be a number");
    const double x = v.get<double>();
    const bool below = open_lo ? x <= lo : x < lo;
    const bool above = open_hi ? x >= hi : x > hi;
    if (below || above || !std::isfinite(x)) {
      std::ostringstream msg;
      msg << "must be in " << (open_lo ? "(" : "[") << lo << ", " << hi << (open_hi ? ")" : "]");
      return fail(p, msg.str());
    }
    target = x;
  }

  void boolean(const Json& obj, const char* key, const std::string& path, bool& target) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_boolean()) return fail(path + "/" + key, "must be a boolean");
    target = obj.at(key).get<bool>();
  }

  void string(const Json& obj, const char* key, const std::string& path, std::string& target) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string()) return fail(path + "/" + key, "must be a string");
    target = obj.at(key).get<std::string>();
  }

  void penalty(const Json& obj, const char* key, const std::string& path, Penalty& target) {
    if (!obj.contains(key)) return;
    try {
      target = penalty_from_json(obj.at(key));
    } catch (const std::exception& e) {
      fail(path + "/" + key, e.what());
    }
  }
};

void check_random(Checker& ck, const Json& s, RandomMnlParams& p) {
  ck.integer(s, "products", "/scenario", p.products, 1, 64);
  ck.integer(s, "horizon", "/scenario", p.horizon, 1, 10'000'000);
  ck.integer(s, "initial_inventory", "/scenario", p.initial_inventory, 0);
  ck.number(s, "price_low", "/scenario", p.price_low, 0.0, 1e12, true);
  ck.number(s, "price_high", "/scenario", p.price_high, 0.0, 1e12, true);
  ck.number(s, "alpha_low", "/scenario", p.alpha_low, 0.0, 1e12, true);
  ck.number(s, "alpha_high", "/scenario", p.alpha_high, 0.0, 1e12, true);
  ck.number(s, "outside", "/scenario", p.outside, 0.0, 1.0, false, true);
  ck.number(s, "shock_success", "/scenario", p.shock_success, 0.0, 1.0, true);
  ck.integer(s, "duration", "/scenario", p.duration, 0);
  ck.number(s, "kappa", "/scenario", p.kappa, 0.0, 1e6);
}

void check_stylized(Checker& ck, const Json& s, StylizedParams& p) {
  if (s.contains("family")) {
    const Json& f = s.at("family");
    const std::string name = f.is_string() ? f.get<std::string>() : "";
    if (name == "G") {
      p.family = StylizedFamily::G;
    } else if (name == "Ghat") {
      p.family = StylizedFamily::GHat;
      if (!s.contains("s")) p.s = 0.3;
    } else if (name == "Gbar") {
      p.family = StylizedFamily::GBar;
    } else {
      ck.fail("/scenario/family", "must be one of \"G\", \"Ghat\", \"Gbar\"");
    }
  }
  ck.integer(s, "levels", "/scenario", p.levels, 0, 1000);
  ck.number(s, "r", "/scenario", p.r, 0.0, 1.0, true, true);
  ck.number(s, "s", "/scenario", p.s, 0.0, 1.0, true, true);
  ck.integer(s, "n0", "/scenario", p.n0, 1);
  ck.integer(s, "c", "/scenario", p.c, 1);
  ck.number(s, "epsilon", "/scenario", p.epsilon, 0.0, 1.0, false, true);
  ck.penalty(s, "psi", "/scenario", p.psi);
}

void check_tiny(Checker& ck, const Json& s, TinyParams& p) {
  ck.integer(s, "min_products", "/scenario", p.min_products, 1, kOracleEnumerationLimit);
  ck.integer(s, "max_products", "/scenario", p.max_products, 1, kOracleEnumerationLimit);
  ck.integer(s, "min_horizon", "/scenario", p.min_horizon, 1, 100000);
  ck.integer(s, "max_horizon", "/scenario", p.max_horizon, 1, 100000);
  ck.integer(s, "min_inventory", "/scenario", p.min_inventory, 0);
  ck.integer(s, "max_inventory", "/scenario", p.max_inventory, 0);
  ck.boolean(s, "deterministic", "/scenario", p.deterministic);
  ck.number(s, "shock_probability", "/scenario", p.shock_probability, 0.0, 1.0);
  ck.integer(s, "max_shock", "/scenario", p.max_shock, 1);
  ck.number(s, "infinite_duration_probability", "/scenario", p.infinite_duration_probability, 0.0, 1.0);
  ck.integer(s, "max_duration", "/scenario", p.max_duration, 1);
}

}  // namespace

// ---------------------------------------------------------------------------

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : UserError("invalid config:\n" + join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string fixed6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UserError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write " + path.string());
  out << text;
}

// --- penalty / policy ----------------------------------------------------------

Penalty penalty_from_json(const Json& j) {
  if (j.is_string()) return parse_penalty(j.get<std::string>());
  if (j.is_object() && j.contains("knots")) {
    std::vector<Knot> knots;
    const Json& arr = j.at("knots");
    if (!arr.is_array()) throw UserError("knots must be an array of [x, y] pairs");
    for (const Json& k : arr) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
        throw UserError("knots must be an array of [x, y] pairs");
      }
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    try {
      return Penalty::tabulated(std::move(knots));
    } catch (const std::invalid_argument& e) {
      throw UserError(e.what());
    }
  }
  throw UserError("penalty must be \"exponential\", \"identity\", \"step\" or {\"knots\": ...}");
}

Json to_json(const Penalty& psi) {
  if (psi.kind() != PenaltyKind::Tabulated) return std::string(to_string(psi.kind()));
  Json knots = Json::array();
  for (const Knot& k : psi.knots()) knots.push_back({k.x, k.y});
  return Json{{"knots", knots}};
}

Penalty parse_penalty(const std::string& text) {
  const std::string t = lower(text);
  if (t == "exponential" || t == "exp") return Penalty::exponential();
  if (t == "identity" || t == "linear") return Penalty::identity();
  if (t == "step") return Penalty::step();
  const std::string prefix = "tabulated:";
  if (t.rfind(prefix, 0) == 0) {
    std::vector<Knot> knots;
    std::stringstream ss(t.substr(prefix.size()));
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) throw UserError("tabulated knots are x:y pairs separated by commas");
      try {
        knots.push_back({std::stod(pair.substr(0, colon)), std::stod(pair.substr(colon + 1))});
      } catch (const std::exception&) {
        throw UserError("bad knot \"" + pair + "\"");
      }
    }
    try {
      return Penalty::tabulated(std::move(knots));
    } catch (const std::invalid_argument& e) {
      throw UserError(e.what());
    }
  }
  throw UserError("unknown penalty \"" + text + "\"");
}

PolicySpec policy_from_json(const Json& j) {
  if (!j.is_object()) throw UserError("policy must be an object");
  const std::string kind = lower(require<std::string>(j, "kind", "policy"));
  const Penalty psi = j.contains("psi") ? penalty_from_json(j.at("psi")) : Penalty::exponential();
  if (kind == "bib") {
    const int gamma = j.contains("gamma") ? require<int>(j, "gamma", "policy") : 1;
    if (gamma < 1) throw UserError("policy gamma must be >= 1");
    return PolicySpec::bib(psi, gamma);
  }
  if (j.contains("gamma")) throw UserError("gamma only applies to BIB");
  if (kind == "scib") return PolicySpec::scib(psi);
  if (kind == "dcib") return PolicySpec::dcib(psi);
  if (kind == "usib") return PolicySpec::usib(psi);
  if (kind == "greed") {
    if (j.contains("psi")) throw UserError("GREED takes no penalty");
    return PolicySpec::greed();
  }
  throw UserError("unknown policy kind \"" + kind + "\"");
}

Json to_json(const PolicySpec& spec) {
  Json j{{"kind", spec.label()}};
  if (spec.kind != PolicyKind::Greed) j["psi"] = to_json(spec.psi);
  if (spec.kind == PolicyKind::Bib) j["gamma"] = spec.gamma;
  return j;
}

// --- instance ------------------------------------------------------------------

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw UserError("instance must be an object");
  const auto horizon = require<Period>(j, "horizon", "instance");
  if (horizon < 1) throw UserError("instance: horizon must be >= 1");
  const Json products = require<Json>(j, "products", "instance");
  if (!products.is_array() || products.empty()) throw UserError("instance: products must be a non-empty array");
  std::vector<Product> prods;
  for (std::size_t k = 0; k < products.size(); ++k) {
    const std::string where = "instance: product " + std::to_string(k + 1);
    const Json& p = products[k];
    Product prod;
    prod.price = require<double>(p, "price", where);
    prod.unlimited = p.contains("unlimited") && require<bool>(p, "unlimited", where);
    prod.initial_inventory = prod.unlimited ? 0 : require<std::int64_t>(p, "inventory", where);
    if (p.contains("duration") && !p.at("duration").is_null()) {
      prod.duration = require<std::int64_t>(p, "duration", where);
      if (prod.duration < 1) throw UserError(where + ": duration must be >= 1 or null");
    }
    prods.push_back(prod);
  }
  Instance inst(std::move(prods), horizon);
  const auto n = static_cast<ProductId>(inst.num_products());
  auto product_id = [&](const Json& v, const std::string& where) {
    if (!v.is_number_integer()) throw UserError(where + ": product numbers are integers");
    const int k = v.get<int>();
    if (k < 1 || k > n) throw UserError(where + ": product " + std::to_string(k) + " out of range");
    return static_cast<ProductId>(k - 1);
  };

  // Identical consumer objects share one model.
  std::map<std::string, std::shared_ptr<const ChoiceModel>> models;
  auto model_from_json = [&](const Json& m, const std::string& where) {
    const std::string kind = lower(require<std::string>(m, "kind", where));
    try {
      if (kind == "mnl") {
        const auto alpha = require<std::vector<double>>(m, "alpha", where);
        if (alpha.size() > static_cast<std::size_t>(n)) throw UserError(where + ": more weights than products");
        return ChoiceModel::mnl(alpha, m.contains("outside") ? require<double>(m, "outside", where) : 0.0);
      }
      if (kind == "singleton") {
        std::vector<ProductId> accepts;
        for (const Json& v : require<Json>(m, "accepts", where)) accepts.push_back(product_id(v, where));
        std::sort(accepts.begin(), accepts.end());
        accepts.erase(std::unique(accepts.begin(), accepts.end()), accepts.end());
        return ChoiceModel::singleton(accepts);
      }
    } catch (const std::invalid_argument& e) {
      throw UserError(where + ": " + e.what());
    }
    throw UserError(where + ": kind must be \"mnl\" or \"singleton\"");
  };
  const Json consumers = require<Json>(j, "consumers", "instance");
  if (!consumers.is_array() || consumers.size() != static_cast<std::size_t>(horizon)) {
    throw UserError("instance: consumers must list one object per period");
  }
  for (Period t = 1; t <= horizon; ++t) {
    const Json& c = consumers[static_cast<std::size_t>(t - 1)];
    const std::string where = "instance: consumer " + std::to_string(t);
    if (!c.is_object()) throw UserError(where + ": must be an object");
    auto& slot = models[c.dump()];
    if (!slot) slot = std::make_shared<const ChoiceModel>(model_from_json(c, where));
    inst.set_consumer(t, slot);
  }
  if (j.contains("shocks")) {
    const Json& rows = j.at("shocks");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
      throw UserError("instance: shocks must be an n x T matrix (one row per product)");
    }
    for (ProductId i = 0; i < n; ++i) {
      const Json& row = rows[static_cast<std::size_t>(i)];
      const std::string where = "instance: shocks row " + std::to_string(i + 1);
      if (!row.is_array() || row.size() != static_cast<std::size_t>(horizon)) {
        throw UserError(where + ": expected " + std::to_string(horizon) + " entries");
      }
      for (Period t = 1; t <= horizon; ++t) {
        const Json& v = row[static_cast<std::size_t>(t - 1)];
        if (!v.is_number_integer()) throw UserError(where + ": entries are integers");
        if (const auto units = v.get<std::int64_t>(); units != 0) inst.add_shock(i, t, units);
      }
    }
  }
  if (j.contains("cardinality_cap") && !j.at("cardinality_cap").is_null()) {
    inst.set_feasible(FeasibleCollection::cardinality(require<int>(j, "cardinality_cap", "instance")));
  }
  if (j.contains("negative_shocks")) inst.set_negative_shocks(require<bool>(j, "negative_shocks", "instance"));
  if (j.contains("duration_success_probability") && !j.at("duration_success_probability").is_null()) {
    inst.set_stochastic_duration(StochasticDuration{require<double>(j, "duration_success_probability", "instance")});
  }
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw UserError(std::string("instance: ") + e.what());
  }
  return inst;
}

Json to_json(const Instance& inst) {
  Json j;
  j["horizon"] = inst.horizon();
  Json products = Json::array();
  for (const Product& p : inst.products()) {
    Json pj{{"price", p.price}};
    if (p.unlimited) {
      pj["unlimited"] = true;
    } else {
      pj["inventory"] = p.initial_inventory;
    }
    pj["duration"] = duration_json(p.duration);
    products.push_back(pj);
  }
  j["products"] = products;

  Json consumers = Json::array();
  for (Period t = 1; t <= inst.horizon(); ++t) {
    const ChoiceModel& m = inst.consumer(t);
    if (m.kind() == ChoiceKind::Mnl) {
      consumers.push_back({{"kind", "mnl"},
                           {"alpha", std::vector<double>(m.alpha().begin(), m.alpha().end())},
                           {"outside", m.outside_target()}});
    } else {
      Json acc = Json::array();
      for (ProductId i : m.accepts()) acc.push_back(i + 1);
      consumers.push_back({{"kind", "singleton"}, {"accepts", acc}});
    }
  }
  j["consumers"] = consumers;

  Json shocks = Json::array();
  for (std::size_t i = 0; i < inst.num_products(); ++i) {
    Json row = Json::array();
    for (Period t = 1; t <= inst.horizon(); ++t) row.push_back(inst.shock(static_cast<ProductId>(i), t));
    shocks.push_back(row);
  }
  j["shocks"] = shocks;
  if (inst.feasible().kind == FeasibleKind::CardinalityCap) j["cardinality_cap"] = inst.feasible().cap;
  j["negative_shocks"] = inst.negative_shocks();
  j["duration_success_probability"] =
      inst.stochastic_duration() ? Json(inst.stochastic_duration()->success_probability) : Json(nullptr);
  return j;
}

// --- traces and stats ------------------------------------------------------------

Json to_json(const SimTrace& trace) {
  Json j;
  j["policy"] = to_json(trace.policy);
  j["seed"] = trace.seed;
  j["horizon"] = trace.horizon;
  j["total_revenue"] = trace.total_revenue;
  Json periods = Json::array();
  for (const PeriodRecord& r : trace.periods) {
    Json p{{"t", r.t}};
    Json shocks = Json::array();
    for (const ShockRecord& s : r.shocks) {
      shocks.push_back({{"product", s.product + 1}, {"requested", s.requested}, {"applied", s.applied}});
    }
    p["shocks"] = shocks;
    Json returns = Json::array();
    for (const ReturnRecord& rr : r.returns) {
      returns.push_back({{"product", rr.product + 1}, {"batch", rr.batch < 0 ? Json(nullptr) : Json(rr.batch + 1)}});
    }
    p["returns"] = returns;
    Json offered = Json::array();
    for (ProductId i : r.offered) offered.push_back(i + 1);
    p["offered"] = offered;
    Json designated = Json::array();
    for (int b : r.designated) designated.push_back(b < 0 ? Json(nullptr) : Json(b + 1));
    p["designated"] = designated;
    p["reduced_prices"] = r.reduced_prices;
    p["chosen"] = one_based(r.chosen);
    p["revenue"] = r.revenue;
    periods.push_back(p);
  }
  j["periods"] = periods;
  Json sales = Json::array();
  for (const SaleRecord& s : trace.sales) {
    sales.push_back({{"t", s.t},
                     {"product", s.product + 1},
                     {"batch", s.batch < 0 ? Json(nullptr) : Json(s.batch + 1)},
                     {"revenue", s.revenue},
                     {"level", s.level},
                     {"return_time", s.return_time == kNoReturn ? Json(nullptr) : Json(s.return_time)}});
  }
  j["sales"] = sales;
  j["ready_counts"] = trace.ready_counts;
  Json batches = Json::array();
  for (const BatchRecord& b : trace.batches) {
    batches.push_back({{"product", b.product + 1},
                       {"batch", b.index + 1},
                       {"members", b.members},
                       {"ready", b.ready},
                       {"ready_time", b.ready ? Json(b.ready_time) : Json(nullptr)},
                       {"allocation_times", b.allocation_times}});
  }
  j["batches"] = batches;
  return j;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "t,chosen,revenue,cumulative\n";
  double cumulative = 0.0;
  for (const PeriodRecord& r : trace.periods) {
    cumulative += r.revenue;
    out << r.t << ',';
    if (r.chosen) out << *r.chosen + 1;
    out << ',' << fixed6(r.revenue) << ',' << fixed6(cumulative) << '\n';
  }
}

void write_stats_csv(std::ostream& out, std::span<const RunStats> stats) {
  out << "policy,mean,sd,min,max\n";
  for (const RunStats& s : stats) {
    out << s.label << ',' << fixed6(s.mean) << ',' << fixed6(s.sd) << ',' << fixed6(s.min) << ','
        << fixed6(s.max) << '\n';
  }
}

void write_values_csv(std::ostream& out, std::span<const RunStats> stats) {
  out << "policy,replication,seed,revenue\n";
  for (const RunStats& s : stats) {
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      out << s.label << ',' << k + 1 << ',' << s.seeds[k] << ',' << fixed6(s.values[k]) << '\n';
    }
  }
}

IntervalFile read_intervals(std::istream& in) {
  IntervalFile file;
  std::string line;
  int number = 0;
  int columns = -1;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<long long> values;
    std::string token;
    while (ss >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stoll(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw UserError("line " + std::to_string(number) + ": \"" + token + "\" is not an integer");
      }
    }
    if (values.empty()) continue;
    if (values.size() != 2 && values.size() != 3) {
      throw UserError("line " + std::to_string(number) + ": expected \"a b\" or \"a b label\"");
    }
    if (columns >= 0 && static_cast<int>(values.size()) != columns) {
      throw UserError("line " + std::to_string(number) + ": inconsistent column count");
    }
    columns = static_cast<int>(values.size());
    if (values[1] < values[0]) {
      throw UserError("line " + std::to_string(number) + ": right endpoint before left endpoint");
    }
    if (!file.intervals.empty() && values[0] <= file.intervals.back().a) {
      throw UserError("line " + std::to_string(number) + ": left endpoints must strictly increase");
    }
    file.intervals.push_back({values[0], values[1]});
    if (values.size() == 3) {
      if (values[2] < 1) throw UserError("line " + std::to_string(number) + ": labels are positive");
      file.labels.push_back(static_cast<int>(values[2]));
    }
  }
  if (file.intervals.empty()) throw UserError("no intervals in input");
  return file;
}

// --- experiment config -------------------------------------------------------------

ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir) {
  Checker ck;
  ExperimentConfig cfg;
  if (!ck.object(j, "", {"$schema", "scenario", "variants", "policies", "replications", "seed", "outputs"},
                 {"scenario", "policies"})) {
    throw ConfigError(ck.errors);
  }
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  if (j.contains("scenario")) {
    const Json& s = j.at("scenario");
    const std::string kind = s.is_object() && s.contains("kind") && s.at("kind").is_string()
                                 ? s.at("kind").get<std::string>()
                                 : "";
    if (kind == "random-mnl") {
      cfg.scenario = ScenarioKind::RandomMnl;
      if (ck.object(s, "/scenario", {"kind", "products", "horizon", "initial_inventory", "price_low",
                                      "price_high", "alpha_low", "alpha_high", "outside", "shock_success",
                                      "duration", "kappa"})) {
        check_random(ck, s, cfg.random);
        try {
          cfg.random.validate();
        } catch (const std::invalid_argument& e) {
          ck.fail("/scenario", e.what());
        }
      }
    } else if (kind == "stylized") {
      cfg.scenario = ScenarioKind::Stylized;
      if (ck.object(s, "/scenario", {"kind", "family", "levels", "r", "s", "n0", "c", "epsilon", "psi"})) {
        check_stylized(ck, s, cfg.stylized);
        try {
          cfg.stylized.validate();
        } catch (const std::invalid_argument& e) {
          ck.fail("/scenario", e.what());
        }
      }
    } else if (kind == "tiny") {
      cfg.scenario = ScenarioKind::Tiny;
      if (ck.object(s, "/scenario", {"kind", "min_products", "max_products", "min_horizon", "max_horizon",
                                      "min_inventory", "max_inventory", "deterministic", "shock_probability",
                                      "max_shock", "infinite_duration_probability", "max_duration"})) {
        check_tiny(ck, s, cfg.tiny);
        if (cfg.tiny.min_products > cfg.tiny.max_products || cfg.tiny.min_horizon > cfg.tiny.max_horizon ||
            cfg.tiny.min_inventory > cfg.tiny.max_inventory) {
          ck.fail("/scenario", "min_* must not exceed max_*");
        }
      }
    } else if (kind == "instance") {
      cfg.scenario = ScenarioKind::InstanceFile;
      if (ck.object(s, "/scenario", {"kind", "path"}, {"path"})) {
        std::string path;
        ck.string(s, "path", "/scenario", path);
        cfg.instance_path = resolve(path);
      }
    } else {
      ck.fail("/scenario/kind", "must be one of \"random-mnl\", \"stylized\", \"tiny\", \"instance\"");
    }
  }

  if (j.contains("variants")) {
    const Json& v = j.at("variants");
    if (ck.object(v, "/variants", {"negative_shocks", "stochastic_durations"})) {
      if (v.contains("negative_shocks")) {
        const Json& ns = v.at("negative_shocks");
        if (ck.object(ns, "/variants/negative_shocks", {"flip_probability"}, {"flip_probability"})) {
          double p = 0.0;
          ck.number(ns, "flip_probability", "/variants/negative_shocks", p, 0.0, 1.0);
          cfg.negative_flip_probability = p;
        }
      }
      if (v.contains("stochastic_durations")) {
        const Json& sd = v.at("stochastic_durations");
        if (ck.object(sd, "/variants/stochastic_durations", {"success_probability"}, {"success_probability"})) {
          double p = 1.0;
          ck.number(sd, "success_probability", "/variants/stochastic_durations", p, 0.0, 1.0, true);
          cfg.duration_success_probability = p;
        }
      }
    }
  }

  if (j.contains("policies")) {
    const Json& ps = j.at("policies");
    if (!ps.is_array() || ps.empty()) {
      ck.fail("/policies", "must be a non-empty array");
    } else {
      for (std::size_t k = 0; k < ps.size(); ++k) {
        const std::string path = "/policies/" + std::to_string(k);
        if (!ck.object(ps[k], path, {"kind", "psi", "gamma"}, {"kind"})) continue;
        try {
          cfg.policies.push_back(policy_from_json(ps[k]));
        } catch (const std::exception& e) {
          ck.fail(path, e.what());
        }
      }
    }
  }
  ck.integer(j, "replications", "", cfg.replications, 1, 1'000'000);
  ck.integer(j, "seed", "", cfg.seed, 0);

  if (j.contains("outputs")) {
    const Json& o = j.at("outputs");
    if (ck.object(o, "/outputs", {"stats_csv", "values_csv", "traces_json", "trace_csv"})) {
      std::string p;
      auto take = [&](const char* key, std::filesystem::path& target) {
        p.clear();
        ck.string(o, key, "/outputs", p);
        if (!p.empty()) target = resolve(p);
      };
      take("stats_csv", cfg.stats_csv);
      take("values_csv", cfg.values_csv);
      take("traces_json", cfg.traces_json);
      take("trace_csv", cfg.trace_csv);
    }
  }
  if (!ck.errors.empty()) throw ConfigError(ck.errors);
  return cfg;
}

InstanceFactory make_factory(const ExperimentConfig& config) {
  InstanceFactory base;
  switch (config.scenario) {
    case ScenarioKind::RandomMnl: {
      const RandomMnlParams p = config.random;
      base = [p](std::uint64_t seed) {
        RandomMnlParams q = p;
        q.seed = seed;
        return gen_random_mnl(q);
      };
      break;
    }
    case ScenarioKind::Stylized: {
      const StylizedParams p = config.stylized;
      const auto inst = std::make_shared<const Instance>(gen_stylized(p, default_target(p)));
      base = [inst](std::uint64_t) { return *inst; };
      break;
    }
    case ScenarioKind::Tiny: {
      const TinyParams p = config.tiny;
      base = [p](std::uint64_t seed) { return gen_tiny(p, seed); };
      break;
    }
    case ScenarioKind::InstanceFile: {
      const auto inst = std::make_shared<const Instance>(instance_from_json(read_json_file(config.instance_path)));
      base = [inst](std::uint64_t) { return *inst; };
      break;
    }
  }
  const auto flip = config.negative_flip_probability;
  const auto success = config.duration_success_probability;
  if (!flip && !success) return base;
  return [base, flip, success](std::uint64_t seed) {
    Instance inst = base(seed);
    if (flip) inst = apply_negative_shocks(std::move(inst), *flip, seed);
    if (success) inst = apply_stochastic_durations(std::move(inst), *success);
    return inst;
  };
}

}  // namespace invbal::io
