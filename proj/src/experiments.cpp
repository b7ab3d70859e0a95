#include "meddispatch/experiments.h"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "csv.h"

namespace meddispatch {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const std::string& key, T& into, const std::string& where) {
  if (obj.contains(key)) into = get_as<T>(obj, key, where);
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw DataError(std::string("cannot open ") + what + " " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::string fmt(double v) { return format_double(v); }

std::string route_text(const DispatchPlan& plan, const Network& net) {
  std::string out;
  for (const LegAssignment& leg : plan.legs) {
    if (!out.empty()) out += '|';
    out += std::string(to_string(leg.mode)) + ":" + net.id(leg.origin) + ">" + net.id(leg.destination);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

ordered_json weights_json(const ObjectiveWeights& w) { return {{"time", w.time}, {"cost", w.cost}}; }

ordered_json counts_json(const FleetCounts& c) {
  return {{"ambulances", c.ambulances}, {"evtols", c.evtols}, {"uavs", c.uavs}};
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::m2dh:
      return "m2dh";
    case Algorithm::baseline:
      return "baseline";
    case Algorithm::exhaustive:
      return "exhaustive";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "m2dh") return Algorithm::m2dh;
  if (s == "baseline") return Algorithm::baseline;
  if (s == "exhaustive") return Algorithm::exhaustive;
  throw ConfigError("unknown algorithm '" + std::string(s) + "' (m2dh, baseline, exhaustive)");
}

std::string priority_label(const ObjectiveWeights& w) { return "wt" + fmt(w.time) + "_wc" + fmt(w.cost); }

FleetCounts ScenarioConfig::fleet_counts() const {
  return configuration ? FleetCounts::configuration(*configuration, per_type) : counts;
}

SpecSet ScenarioConfig::specs() const {
  SpecSet set;
  for (Mode m : kAllModes) {
    VehicleSpec s = default_spec(m, ambulance_capacity);
    const SpecOverride& o = overrides[index_of(m)];
    if (o.capacity) s.capacity = *o.capacity;
    if (o.cruise_kmh) s.cruise_kmh = *o.cruise_kmh;
    if (o.range_km) s.range_km = *o.range_km;
    if (o.op_cost_per_km) s.op_cost_per_km = *o.op_cost_per_km;
    if (o.energy_cost_per_km) s.energy_cost_per_km = *o.energy_cost_per_km;
    set.set(s);
  }
  return set;
}

int ScenarioConfig::table_hours() const { return static_cast<int>(std::ceil(schedule_end() / 60.0)); }

void ScenarioConfig::check() const {
  weights.check();
  if (!(horizon_minutes >= 1.0)) throw ConfigError("horizon_minutes must be >= 1");
  if (!(tail_minutes >= 0.0)) throw ConfigError("tail_minutes must be >= 0");
  if (per_type < 0) throw ConfigError("fleet.per_type must be >= 0");
  if (ambulance_capacity < 1) throw ConfigError("ambulance_capacity must be >= 1");
  if (max_wind_kmh && !(*max_wind_kmh > 0.0)) throw ConfigError("max_wind_kmh must be positive");
  if (!requests_path) {
    check_params(demand);
    if (demand.horizon_end > horizon_minutes) throw ConfigError("demand horizon ends after horizon_minutes");
  }
  const FleetCounts c = fleet_counts();
  if (c.ambulances < 0 || c.evtols < 0 || c.uavs < 0) throw ConfigError("fleet counts must be nonnegative");
  (void)specs();
}

ScenarioConfig parse_scenario_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario config: ") + e.what());
  }
  const std::string w = "config";
  reject_unknown_keys(doc,
                      {"schema_version", "network", "congestion", "wind", "requests", "demand", "seed", "fleet",
                       "vehicles", "ambulance_capacity", "weights", "algorithm", "output_dir", "horizon_minutes",
                       "tail_minutes", "max_wind_kmh", "nearest_by", "bpr"},
                      w);
  ScenarioConfig c;
  if (doc.contains("schema_version") && get_as<int>(doc, "schema_version", w) != kConfigSchemaVersion) {
    throw ConfigError("config: unsupported schema_version");
  }
  for (const char* key : {"network", "congestion", "wind"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("config: missing '") + key + "'");
  }
  c.network_path = resolve_path(base_dir, get_as<std::string>(doc, "network", w));
  c.congestion_path = resolve_path(base_dir, get_as<std::string>(doc, "congestion", w));
  c.wind_path = resolve_path(base_dir, get_as<std::string>(doc, "wind", w));
  if (doc.contains("requests")) c.requests_path = resolve_path(base_dir, get_as<std::string>(doc, "requests", w));
  read_opt(doc, "seed", c.seed, w);
  read_opt(doc, "horizon_minutes", c.horizon_minutes, w);
  read_opt(doc, "tail_minutes", c.tail_minutes, w);
  read_opt(doc, "ambulance_capacity", c.ambulance_capacity, w);
  c.demand.horizon_end = c.horizon_minutes;

  if (doc.contains("demand")) {
    const json& d = doc["demand"];
    const std::string dw = "config.demand";
    reject_unknown_keys(d,
                        {"request_count", "horizon_start", "horizon_end", "hub", "hub_weight", "buffer_min",
                         "buffer_max", "kind_mix", "baseline"},
                        dw);
    read_opt(d, "request_count", c.demand.request_count, dw);
    read_opt(d, "horizon_start", c.demand.horizon_start, dw);
    read_opt(d, "horizon_end", c.demand.horizon_end, dw);
    read_opt(d, "hub", c.demand.hub_hospital, dw);
    read_opt(d, "hub_weight", c.demand.hub_weight, dw);
    read_opt(d, "buffer_min", c.demand.buffer_min, dw);
    read_opt(d, "buffer_max", c.demand.buffer_max, dw);
    if (d.contains("kind_mix")) {
      const auto mix = get_as<std::vector<double>>(d, "kind_mix", dw);
      if (mix.size() != 3) throw ConfigError(dw + ".kind_mix: expected [patient, organ, supply]");
      std::copy(mix.begin(), mix.end(), c.demand.kind_mix.begin());
    }
    if (d.contains("baseline")) {
      const auto b = get_as<std::string>(d, "baseline", dw);
      if (b == "congested") {
        c.demand.baseline = DeadlineBaseline::congested;
      } else if (b == "free_flow") {
        c.demand.baseline = DeadlineBaseline::free_flow;
      } else {
        throw ConfigError(dw + ".baseline: expected congested or free_flow");
      }
    }
  }
  c.demand.seed = c.seed;

  if (doc.contains("fleet")) {
    const json& f = doc["fleet"];
    const std::string fw = "config.fleet";
    reject_unknown_keys(f, {"configuration", "per_type", "ambulances", "evtols", "uavs"}, fw);
    const bool explicit_counts = f.contains("ambulances") || f.contains("evtols") || f.contains("uavs");
    if (explicit_counts && f.contains("configuration")) {
      throw ConfigError(fw + ": give either configuration or explicit counts");
    }
    read_opt(f, "per_type", c.per_type, fw);
    if (explicit_counts) {
      c.configuration.reset();
      read_opt(f, "ambulances", c.counts.ambulances, fw);
      read_opt(f, "evtols", c.counts.evtols, fw);
      read_opt(f, "uavs", c.counts.uavs, fw);
    } else if (f.contains("configuration")) {
      c.configuration = get_as<int>(f, "configuration", fw);
    }
  }

  if (doc.contains("vehicles")) {
    const json& v = doc["vehicles"];
    reject_unknown_keys(v, {"ambulance", "evtol", "uav"}, "config.vehicles");
    for (const auto& item : v.items()) {
      const std::string vw = "config.vehicles." + item.key();
      const json& o = item.value();
      reject_unknown_keys(o, {"capacity", "cruise_kmh", "range_km", "op_cost_per_km", "energy_cost_per_km"}, vw);
      SpecOverride& ov = c.overrides[index_of(parse_mode(item.key()))];
      if (o.contains("capacity")) ov.capacity = get_as<int>(o, "capacity", vw);
      if (o.contains("cruise_kmh")) ov.cruise_kmh = get_as<double>(o, "cruise_kmh", vw);
      if (o.contains("range_km")) ov.range_km = get_as<double>(o, "range_km", vw);
      if (o.contains("op_cost_per_km")) ov.op_cost_per_km = get_as<double>(o, "op_cost_per_km", vw);
      if (o.contains("energy_cost_per_km")) ov.energy_cost_per_km = get_as<double>(o, "energy_cost_per_km", vw);
    }
  }

  if (doc.contains("weights")) {
    const json& ww = doc["weights"];
    reject_unknown_keys(ww, {"time", "cost"}, "config.weights");
    read_opt(ww, "time", c.weights.time, "config.weights");
    read_opt(ww, "cost", c.weights.cost, "config.weights");
  }
  if (doc.contains("algorithm")) c.algorithm = parse_algorithm(get_as<std::string>(doc, "algorithm", w));
  if (doc.contains("output_dir")) c.output_dir = resolve_path(base_dir, get_as<std::string>(doc, "output_dir", w));
  if (doc.contains("max_wind_kmh") && !doc["max_wind_kmh"].is_null()) {
    c.max_wind_kmh = get_as<double>(doc, "max_wind_kmh", w);
  }
  if (doc.contains("nearest_by")) {
    const auto nb = get_as<std::string>(doc, "nearest_by", w);
    if (nb == "air") {
      c.nearest_by = NearestBy::air;
    } else if (nb == "road") {
      c.nearest_by = NearestBy::road;
    } else {
      throw ConfigError("config.nearest_by: expected air or road");
    }
  }
  if (doc.contains("bpr")) {
    const json& b = doc["bpr"];
    reject_unknown_keys(b, {"alpha", "beta"}, "config.bpr");
    read_opt(b, "alpha", c.bpr.alpha, "config.bpr");
    read_opt(b, "beta", c.bpr.beta, "config.bpr");
  }
  c.check();
  return c;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  return parse_scenario_config(read_file(path, "scenario config"), path.parent_path());
}

std::string scenario_config_to_json(const ScenarioConfig& c) {
  ordered_json doc;
  doc["schema_version"] = kConfigSchemaVersion;
  doc["network"] = c.network_path.string();
  doc["congestion"] = c.congestion_path.string();
  doc["wind"] = c.wind_path.string();
  if (c.requests_path) doc["requests"] = c.requests_path->string();
  doc["demand"] = {{"request_count", c.demand.request_count},
                   {"horizon_start", c.demand.horizon_start},
                   {"horizon_end", c.demand.horizon_end},
                   {"hub", c.demand.hub_hospital},
                   {"hub_weight", c.demand.hub_weight},
                   {"buffer_min", c.demand.buffer_min},
                   {"buffer_max", c.demand.buffer_max},
                   {"kind_mix", c.demand.kind_mix},
                   {"baseline", c.demand.baseline == DeadlineBaseline::congested ? "congested" : "free_flow"}};
  doc["seed"] = c.seed;
  if (c.configuration) {
    doc["fleet"] = {{"configuration", *c.configuration}, {"per_type", c.per_type}};
  } else {
    doc["fleet"] = counts_json(c.counts);
  }
  ordered_json vehicles = ordered_json::object();
  for (Mode m : kAllModes) {
    const SpecOverride& o = c.overrides[index_of(m)];
    ordered_json v = ordered_json::object();
    if (o.capacity) v["capacity"] = *o.capacity;
    if (o.cruise_kmh) v["cruise_kmh"] = *o.cruise_kmh;
    if (o.range_km) v["range_km"] = *o.range_km;
    if (o.op_cost_per_km) v["op_cost_per_km"] = *o.op_cost_per_km;
    if (o.energy_cost_per_km) v["energy_cost_per_km"] = *o.energy_cost_per_km;
    if (!v.empty()) vehicles[std::string(to_string(m))] = v;
  }
  if (!vehicles.empty()) doc["vehicles"] = vehicles;
  doc["ambulance_capacity"] = c.ambulance_capacity;
  doc["weights"] = weights_json(c.weights);
  doc["algorithm"] = std::string(to_string(c.algorithm));
  doc["output_dir"] = c.output_dir.string();
  doc["horizon_minutes"] = c.horizon_minutes;
  doc["tail_minutes"] = c.tail_minutes;
  doc["max_wind_kmh"] = c.max_wind_kmh ? json(*c.max_wind_kmh) : json(nullptr);
  doc["nearest_by"] = c.nearest_by == NearestBy::air ? "air" : "road";
  doc["bpr"] = {{"alpha", c.bpr.alpha}, {"beta", c.bpr.beta}};
  return doc.dump(2) + "\n";
}

namespace {

ScenarioData assemble(Network network, std::span<const CongestionProfile> congestion,
                      std::span<const WindRecord> wind, const ScenarioConfig& config,
                      std::optional<std::vector<Request>> requests) {
  ScenarioData d;
  d.network = std::move(network);
  d.specs = config.specs();
  d.schedule_end = config.schedule_end();
  TableOptions opts;
  opts.bpr = config.bpr;
  opts.air.max_wind_kmh = config.max_wind_kmh;
  d.table = build_travel_time_table(d.network, congestion, wind, d.specs, config.table_hours(), opts);
  if (requests) {
    d.requests = std::move(*requests);
  } else {
    DemandParams p = config.demand;
    p.seed = config.seed;
    d.requests = generate_demand(p, d.network, d.table);
  }
  std::set<std::string> ids;
  for (const Request& r : d.requests) {
    check_request(r, d.network);
    if (r.ready >= d.schedule_end) throw DataError("request '" + r.id + "' is ready after the schedule ends");
    if (!ids.insert(r.id).second) throw DataError("duplicate request id '" + r.id + "'");
  }
  std::stable_sort(d.requests.begin(), d.requests.end(),
                   [](const Request& a, const Request& b) { return a.ready < b.ready; });
  d.norms = NormalizationConstants::for_scenario(d.network, d.specs, d.schedule_end);
  return d;
}

}  // namespace

ScenarioData load_scenario_data(const ScenarioConfig& config) {
  config.check();
  Network network = load_network(config.network_path, config.nearest_by);
  const auto congestion = load_congestion(config.congestion_path);
  const auto wind = load_wind(config.wind_path);
  std::optional<std::vector<Request>> requests;
  if (config.requests_path) requests = load_requests(*config.requests_path, network);
  return assemble(std::move(network), congestion, wind, config, std::move(requests));
}

ScenarioData scenario_data_from_fixture(const FixtureBundle& bundle, const ScenarioConfig& config,
                                        std::optional<std::vector<Request>> requests) {
  config.check();
  Network network = bundle.network;
  if (config.nearest_by != network.nearest_by()) {
    network = Network::build(network.nodes(), [&] {
      std::vector<GroundEdge> edges;
      for (NodeIndex a = 0; a < network.size(); ++a) {
        for (NodeIndex b = 0; b < network.size(); ++b) {
          if (auto km = network.ground_km(a, b); km && a != b) edges.push_back({network.id(a), network.id(b), *km});
        }
      }
      return edges;
    }(), config.nearest_by);
  }
  return assemble(std::move(network), bundle.congestion, bundle.wind, config, std::move(requests));
}

std::optional<DispatchPlan> dispatch_with(Algorithm algorithm, const Request& request, Fleet& fleet,
                                          const DispatchContext& ctx) {
  switch (algorithm) {
    case Algorithm::m2dh:
      return dispatch_request(request, fleet, ctx);
    case Algorithm::baseline:
      return baseline_dispatch(request, fleet, ctx);
    case Algorithm::exhaustive:
      return exhaustive_dispatch(request, fleet, ctx);
  }
  return std::nullopt;
}

ScenarioReport run_scenario(const ScenarioData& data, const RunSettings& settings) {
  settings.weights.check();
  ScenarioReport report;
  report.settings = settings;
  report.demand_hash = demand_hash(data.requests, data.network);
  report.fleet = initialize_fleet(settings.counts, data.specs, data.network, data.schedule_end);
  const DispatchContext ctx{&data.network, &data.table, data.specs, settings.weights, data.norms};

  std::vector<GapRecord> gaps;
  std::vector<DispatchPlan> plans;
  for (const Request& r : data.requests) {
    std::optional<DispatchPlan> oracle;
    if (settings.track_gap) {
      Fleet copy = report.fleet;
      oracle = exhaustive_dispatch(r, copy, ctx);
    }
    const auto start = std::chrono::steady_clock::now();
    auto plan = dispatch_with(settings.algorithm, r, report.fleet, ctx);
    const auto stop = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(stop - start).count();

    if (settings.track_gap) {
      if (plan && oracle) {
        gaps.push_back(make_gap_record(r.id, plan->z, oracle->z));
      } else if (oracle) {
        GapRecord g{r.id, kUnbounded, oracle->z, kUnbounded, true};
        gaps.push_back(g);
      }
    }

    ScenarioAggregates& t = report.totals;
    if (plan) {
      ++t.served;
      t.waiting += plan->totals.waiting;
      t.travel += plan->totals.travel;
      t.energy += plan->totals.energy;
      t.operating += plan->totals.operating;
      t.z += plan->z;
      for (const LegAssignment& leg : plan->legs) {
        ++t.legs_by_mode[index_of(leg.mode)];
        if (leg.consolidated) ++t.consolidated_legs;
      }
      plans.push_back(*plan);
    } else {
      ++t.infeasible;
    }
    report.max_ms = std::max(report.max_ms, ms);
    report.mean_ms += ms;
    report.rows.push_back({r, std::move(plan), ms});
  }
  if (!report.rows.empty()) report.mean_ms /= static_cast<double>(report.rows.size());
  report.audit = audit_plans(data.network, data.specs, data.requests, plans, report.fleet);
  if (settings.track_gap) report.gap = optimality_gap(std::move(gaps));
  return report;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t demand_hash(const std::vector<Request>& requests, const Network& network) {
  return fnv1a(requests_to_csv(requests, network));
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return out;
}

std::string requests_csv(const ScenarioReport& report, const Network& net) {
  std::string out =
      "request_id,kind,origin,destination,ready,deadline,status,route,legs,final_dropoff,waiting,travel,energy,"
      "operating,z\n";
  for (const RequestOutcome& row : report.rows) {
    const Request& r = row.request;
    std::vector<std::string> f = {r.id, std::string(to_string(r.kind)), net.id(r.origin), net.id(r.destination),
                                  fmt(r.ready), fmt(r.deadline)};
    if (row.plan) {
      const DispatchPlan& p = *row.plan;
      f.insert(f.end(), {"served", route_text(p, net), std::to_string(p.legs.size()), fmt(p.final_dropoff()),
                         fmt(p.totals.waiting), fmt(p.totals.travel), fmt(p.totals.energy), fmt(p.totals.operating),
                         fmt(p.z)});
    } else {
      f.insert(f.end(), {"infeasible", "", "0", "", "", "", "", "", ""});
    }
    out += csv::join(f) + "\n";
  }
  return out;
}

std::string legs_csv(const ScenarioReport& report, const Network& net) {
  std::string out =
      "request_id,leg,vehicle_id,mode,origin,destination,reposition_from,reposition_start,pickup,dropoff,"
      "consolidated,timing_case,reposition_km,service_km,return_to,return_end,return_km,waiting,travel,energy,"
      "operating\n";
  for (const RequestOutcome& row : report.rows) {
    if (!row.plan) continue;
    for (std::size_t s = 0; s < row.plan->legs.size(); ++s) {
      const LegAssignment& l = row.plan->legs[s];
      out += csv::join({row.request.id, std::to_string(s + 1), l.vehicle_id, std::string(to_string(l.mode)),
                        net.id(l.origin), net.id(l.destination), net.id(l.reposition_from), fmt(l.reposition_start),
                        fmt(l.pickup), fmt(l.dropoff), l.consolidated ? "1" : "0",
                        std::to_string(static_cast<int>(l.timing_case)), fmt(l.reposition_km), fmt(l.service_km),
                        l.return_to ? net.id(*l.return_to) : "", l.return_to ? fmt(l.return_end) : "",
                        fmt(l.return_km), fmt(l.cost.waiting), fmt(l.cost.travel), fmt(l.cost.energy),
                        fmt(l.cost.operating)}) +
             "\n";
    }
  }
  return out;
}

std::string summary_json(const ScenarioReport& report, const ScenarioData& data) {
  const ScenarioAggregates& t = report.totals;
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["algorithm"] = std::string(to_string(report.settings.algorithm));
  doc["weights"] = weights_json(report.settings.weights);
  doc["fleet"] = counts_json(report.settings.counts);
  doc["demand_hash"] = hex64(report.demand_hash);
  doc["requests"] = report.rows.size();
  doc["served"] = t.served;
  doc["infeasible"] = t.infeasible;
  doc["totals"] = {{"time_minutes", t.waiting + t.travel},
                   {"waiting_minutes", t.waiting},
                   {"travel_minutes", t.travel},
                   {"operating_usd", t.operating},
                   {"energy_usd", t.energy},
                   {"z", t.z}};
  doc["legs_by_mode"] = {{"ambulance", t.legs_by_mode[0]}, {"evtol", t.legs_by_mode[1]}, {"uav", t.legs_by_mode[2]}};
  doc["consolidated_legs"] = t.consolidated_legs;
  doc["normalization"] = {{"time_minutes", data.norms.time_denominator},
                          {"energy_usd", data.norms.energy_denominator},
                          {"operating_usd", data.norms.operating_denominator}};
  ordered_json audit = {{"plans", report.audit.plans_checked},
                        {"legs", report.audit.legs_checked},
                        {"violations", report.audit.violations.size()}};
  ordered_json details = ordered_json::array();
  for (const Violation& v : report.audit.violations) {
    details.push_back({{"rule", std::string(to_string(v.rule))}, {"subject", v.subject}, {"detail", v.detail}});
  }
  audit["details"] = details;
  doc["audit"] = audit;
  if (report.gap) {
    doc["gap"] = {{"average_pct", report.gap->average_pct},
                  {"maximum_pct", report.gap->maximum_pct},
                  {"minimum_pct", report.gap->minimum_pct},
                  {"records", report.gap->records.size()},
                  {"infinite", report.gap->infinite}};
  }
  return doc.dump(2) + "\n";
}

std::string timing_json(const ScenarioReport& report) {
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["mean_ms_per_request"] = report.mean_ms;
  doc["max_ms_per_request"] = report.max_ms;
  ordered_json per = ordered_json::object();
  for (const RequestOutcome& row : report.rows) per[row.request.id] = row.wall_ms;
  doc["per_request_ms"] = per;
  return doc.dump(2) + "\n";
}

void write_report(const ScenarioReport& report, const ScenarioData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "requests.csv", requests_csv(report, data.network));
  write_file(dir / "legs.csv", legs_csv(report, data.network));
  write_file(dir / "summary.json", summary_json(report, data));
  write_file(dir / "timing.json", timing_json(report));
}

std::optional<double> CellResult::improvement_pct() const {
  if (!baseline || baseline->totals.z == 0.0) return std::nullopt;
  return 100.0 * (baseline->totals.z - m2dh.totals.z) / baseline->totals.z;
}

std::vector<CellResult> compare_configurations(const ScenarioData& data, std::span<const int> configurations,
                                               std::span<const ObjectiveWeights> priorities, int per_type,
                                               bool with_baseline) {
  std::vector<CellResult> cells;
  for (int config : configurations) {
    const FleetCounts counts = FleetCounts::configuration(config, per_type);
    for (const ObjectiveWeights& w : priorities) {
      CellResult cell{config, w, run_scenario(data, {counts, w, Algorithm::m2dh, false}), std::nullopt};
      if (with_baseline) cell.baseline = run_scenario(data, {counts, w, Algorithm::baseline, false});
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string comparison_csv(std::span<const CellResult> cells) {
  std::string out =
      "configuration,w_t,w_c,served,infeasible,time_minutes,operating_usd,energy_usd,z,baseline_z,"
      "improvement_pct,audit_violations,demand_hash\n";
  for (const CellResult& c : cells) {
    const ScenarioAggregates& t = c.m2dh.totals;
    const auto imp = c.improvement_pct();
    out += csv::join({std::to_string(c.configuration), fmt(c.weights.time), fmt(c.weights.cost),
                      std::to_string(t.served), std::to_string(t.infeasible), fmt(t.waiting + t.travel),
                      fmt(t.operating), fmt(t.energy), fmt(t.z), c.baseline ? fmt(c.baseline->totals.z) : "",
                      imp ? fmt(*imp) : "", std::to_string(c.m2dh.audit.violations.size()),
                      hex64(c.m2dh.demand_hash)}) +
           "\n";
  }
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string comparison_markdown(std::span<const CellResult> cells) {
  std::string out =
      "| config | w_t | w_c | served | infeasible | time (min) | operating (USD) | energy (USD) | z | baseline z | "
      "improvement % |\n|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const CellResult& c : cells) {
    const ScenarioAggregates& t = c.m2dh.totals;
    const auto imp = c.improvement_pct();
    out += "| " + std::to_string(c.configuration) + " | " + fmt(c.weights.time) + " | " + fmt(c.weights.cost) +
           " | " + std::to_string(t.served) + " | " + std::to_string(t.infeasible) + " | " +
           fixed(t.waiting + t.travel, 1) + " | " + fixed(t.operating, 2) + " | " + fixed(t.energy, 2) + " | " +
           fixed(t.z, 4) + " | " + (c.baseline ? fixed(c.baseline->totals.z, 4) : "-") + " | " +
           (imp ? fixed(*imp, 2) : "-") + " |\n";
  }
  return out;
}

std::vector<GapCell> gap_study(const ScenarioData& data, std::span<const int> configurations,
                               std::span<const ObjectiveWeights> priorities, int per_type) {
  std::vector<GapCell> cells;
  for (int config : configurations) {
    const FleetCounts counts = FleetCounts::configuration(config, per_type);
    for (const ObjectiveWeights& w : priorities) {
      ScenarioReport r = run_scenario(data, {counts, w, Algorithm::m2dh, true});
      cells.push_back({config, w, std::move(*r.gap)});
    }
  }
  return cells;
}

std::string gap_csv(std::span<const GapCell> cells) {
  std::string out = "configuration,w_t,w_c,records,average_pct,maximum_pct,minimum_pct,infinite\n";
  for (const GapCell& c : cells) {
    out += csv::join({std::to_string(c.configuration), fmt(c.weights.time), fmt(c.weights.cost),
                      std::to_string(c.summary.records.size()), fmt(c.summary.average_pct),
                      fmt(c.summary.maximum_pct), fmt(c.summary.minimum_pct),
                      std::to_string(c.summary.infinite.size())}) +
           "\n";
  }
  return out;
}

std::string gap_markdown(std::span<const GapCell> cells) {
  std::string out = "| w_t | w_c |";
  std::vector<int> configs;
  for (const GapCell& c : cells) {
    if (std::find(configs.begin(), configs.end(), c.configuration) == configs.end()) {
      configs.push_back(c.configuration);
    }
  }
  for (int c : configs) out += " config " + std::to_string(c) + " |";
  out += "\n|---|---|";
  for (std::size_t i = 0; i < configs.size(); ++i) out += "---|";
  out += "\n";
  std::vector<ObjectiveWeights> rows;
  for (const GapCell& c : cells) {
    if (std::find(rows.begin(), rows.end(), c.weights) == rows.end()) rows.push_back(c.weights);
  }
  for (const ObjectiveWeights& w : rows) {
    out += "| " + fmt(w.time) + " | " + fmt(w.cost) + " |";
    for (int config : configs) {
      const auto it = std::find_if(cells.begin(), cells.end(), [&](const GapCell& c) {
        return c.configuration == config && c.weights == w;
      });
      out += it == cells.end() ? " - |"
                               : " " + fixed(it->summary.average_pct, 2) + " (" + fixed(it->summary.maximum_pct, 2) +
                                     ") |";
    }
    out += "\n";
  }
  return out;
}

FleetCounts split_fleet(int size) {
  if (size < 0) throw ConfigError("fleet size must be >= 0");
  FleetCounts c{size / 3, size / 3, size / 3};
  const int rest = size - 3 * (size / 3);
  if (rest >= 1) ++c.ambulances;
  if (rest >= 2) ++c.uavs;
  return c;
}

std::vector<BenchPoint> runtime_bench(const ScenarioData& data, std::span<const int> fleet_sizes,
                                      std::span<const Algorithm> algorithms, const ObjectiveWeights& weights,
                                      int repeats) {
  if (repeats < 1) throw ConfigError("bench repeats must be >= 1");
  std::vector<BenchPoint> out;
  for (Algorithm a : algorithms) {
    for (int size : fleet_sizes) {
      BenchPoint p;
      p.algorithm = a;
      p.fleet_size = size;
      p.counts = split_fleet(size);
      for (int i = 0; i < repeats; ++i) p.repeats_ms.push_back(run_scenario(data, {p.counts, weights, a, false}).mean_ms);
      p.mean_ms = median(p.repeats_ms);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::string bench_csv(std::span<const BenchPoint> points) {
  std::string out = "algorithm,fleet_size,ambulances,evtols,uavs,median_mean_ms,repeats_ms\n";
  for (const BenchPoint& p : points) {
    std::string reps;
    for (double r : p.repeats_ms) reps += (reps.empty() ? "" : ";") + fmt(r);
    out += csv::join({std::string(to_string(p.algorithm)), std::to_string(p.fleet_size),
                      std::to_string(p.counts.ambulances), std::to_string(p.counts.evtols),
                      std::to_string(p.counts.uavs), fmt(p.mean_ms), reps}) +
           "\n";
  }
  return out;
}

std::string environment_json() {
  ordered_json doc;
#if defined(__clang__)
  doc["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  doc["compiler"] = std::string("gcc ") + __VERSION__;
#else
  doc["compiler"] = "unknown";
#endif
  doc["cplusplus"] = static_cast<long>(__cplusplus);
#ifdef NDEBUG
  doc["assertions"] = false;
#else
  doc["assertions"] = true;
#endif
  doc["hardware_threads"] = std::thread::hardware_concurrency();
  utsname u{};
  if (uname(&u) == 0) {
    doc["system"] = std::string(u.sysname) + " " + u.release;
    doc["machine"] = u.machine;
  }
  return doc.dump(2) + "\n";
}

}  // namespace meddispatch
