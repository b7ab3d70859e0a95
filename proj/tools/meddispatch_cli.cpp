// Command-line front end: fixture and demand generation, single runs,
// configuration studies, gap study, runtime benchmark and input validation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "meddispatch/experiments.h"

namespace md = meddispatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;

// Scenario flags shared by the subcommands that run dispatching.
struct ScenarioFlags {
  std::string config;
  std::string network, congestion, wind, requests, output_dir, algorithm, nearest_by;
  std::optional<std::uint64_t> seed;
  std::optional<int> configuration, ambulances, evtols, uavs, per_type, request_count;
  std::optional<double> wt, wc, horizon, tail, max_wind;

  void add_to(CLI::App& app) {
    app.add_option("-c,--config", config, "Scenario config JSON");
    app.add_option("--network", network, "Network JSON");
    app.add_option("--congestion", congestion, "Congestion CSV");
    app.add_option("--wind", wind, "Wind CSV");
    app.add_option("--requests", requests, "Requests CSV (otherwise generated)");
    app.add_option("--seed", seed, "Demand seed");
    app.add_option("--configuration", configuration, "Fleet configuration 1-4")->check(CLI::Range(1, 4));
    app.add_option("--ambulances", ambulances, "Explicit ambulance count");
    app.add_option("--evtols", evtols, "Explicit eVTOL count");
    app.add_option("--uavs", uavs, "Explicit UAV count");
    app.add_option("--per-type", per_type, "Vehicles per type for configurations");
    app.add_option("--request-count", request_count, "Generated request count");
    app.add_option("--wt", wt, "Time weight");
    app.add_option("--wc", wc, "Cost weight");
    app.add_option("--algorithm", algorithm, "m2dh, baseline or exhaustive");
    app.add_option("-o,--output-dir", output_dir, "Output directory");
    app.add_option("--horizon", horizon, "Demand horizon in minutes");
    app.add_option("--tail", tail, "Extra schedule minutes after the demand horizon");
    app.add_option("--max-wind", max_wind, "Grounding wind threshold, km/h");
    app.add_option("--nearest-by", nearest_by, "air or road");
  }

  md::ScenarioConfig resolve() const {
    md::ScenarioConfig c;
    if (!config.empty()) {
      c = md::load_scenario_config(config);
    } else if (network.empty() || congestion.empty() || wind.empty()) {
      throw md::ConfigError("give --config or all of --network, --congestion, --wind");
    }
    if (!network.empty()) c.network_path = network;
    if (!congestion.empty()) c.congestion_path = congestion;
    if (!wind.empty()) c.wind_path = wind;
    if (!requests.empty()) c.requests_path = requests;
    if (seed) c.seed = c.demand.seed = *seed;
    if (configuration) c.configuration = *configuration;
    if (ambulances || evtols || uavs) {
      c.configuration.reset();
      c.counts = {ambulances.value_or(0), evtols.value_or(0), uavs.value_or(0)};
    }
    if (per_type) c.per_type = *per_type;
    if (request_count) c.demand.request_count = *request_count;
    if (wt) c.weights.time = *wt;
    if (wc) c.weights.cost = *wc;
    if (!algorithm.empty()) c.algorithm = md::parse_algorithm(algorithm);
    if (!output_dir.empty()) c.output_dir = output_dir;
    if (horizon) {
      if (c.demand.horizon_end == c.horizon_minutes) c.demand.horizon_end = *horizon;
      c.horizon_minutes = *horizon;
    }
    if (tail) c.tail_minutes = *tail;
    if (max_wind) c.max_wind_kmh = *max_wind;
    if (nearest_by == "road") c.nearest_by = md::NearestBy::road;
    if (nearest_by == "air") c.nearest_by = md::NearestBy::air;
    if (!nearest_by.empty() && nearest_by != "air" && nearest_by != "road") {
      throw md::ConfigError("--nearest-by must be air or road");
    }
    c.check();
    return c;
  }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw md::DataError("cannot write " + path.string());
  out << text;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw md::ConfigError("expected a comma-separated integer list, got '" + text + "'");
    }
  }
  return out;
}

int gen_network_fixture(const std::string& name, const std::string& out_dir, std::uint64_t seed, bool calm) {
  md::FixtureOptions opts;
  opts.seed = seed;
  opts.calm = calm;
  md::FixtureBundle b;
  std::string hub = "MainCampus";
  if (name == "ohio") {
    b = md::ohio_fixture(opts);
  } else if (name == "ohio-plain") {
    b = md::ohio_fixture(opts, false);
  } else if (name == "single-vertiport") {
    b = md::single_vertiport_fixture(opts);
    hub = "Centre";
  } else {
    throw md::ConfigError("unknown fixture '" + name + "' (ohio, ohio-plain, single-vertiport)");
  }
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  md::save_network(b.network, dir / "network.json");
  md::save_congestion(b.congestion, dir / "congestion.csv");
  md::save_wind(b.wind, dir / "wind.csv");
  md::ScenarioConfig c;
  c.network_path = "network.json";
  c.congestion_path = "congestion.csv";
  c.wind_path = "wind.csv";
  c.demand.hub_hospital = hub;
  c.output_dir = "out";
  write_text(dir / "scenario.json", md::scenario_config_to_json(c));
  std::cout << "wrote " << name << " fixture (" << b.network.hospitals().size() << " hospitals, "
            << b.network.vertiports().size() << (b.network.vertiports().size() == 1 ? " vertiport" : " vertiports")
            << ") to " << dir.string() << "\n";
  return kExitOk;
}

int run_dispatch(const md::ScenarioConfig& c) {
  const md::ScenarioData data = md::load_scenario_data(c);
  const md::ScenarioReport r = md::run_scenario(data, {c.fleet_counts(), c.weights, c.algorithm, false});
  md::write_report(r, data, c.output_dir);
  std::cout << "served " << r.totals.served << "/" << r.rows.size() << ", infeasible " << r.totals.infeasible
            << ", total z " << md::format_double(r.totals.z) << ", audit violations " << r.audit.violations.size()
            << "\nreport written to " << c.output_dir.string() << "\n";
  for (const md::Violation& v : r.audit.violations) {
    std::cerr << "violation [" << md::to_string(v.rule) << "] " << v.subject << ": " << v.detail << "\n";
  }
  return r.audit.ok() ? kExitOk : kExitInvalid;
}

int run_compare(const md::ScenarioConfig& c, const std::string& configs, bool with_baseline) {
  const md::ScenarioData data = md::load_scenario_data(c);
  const auto ids = parse_int_list(configs);
  const auto cells = md::compare_configurations(data, ids, md::kPrioritySettings, c.per_type, with_baseline);
  std::filesystem::create_directories(c.output_dir);
  std::size_t violations = 0;
  for (const auto& cell : cells) {
    const auto dir = c.output_dir / ("config" + std::to_string(cell.configuration) + "_" +
                                     md::priority_label(cell.weights));
    md::write_report(cell.m2dh, data, dir);
    if (cell.baseline) md::write_report(*cell.baseline, data, dir / "baseline");
    violations += cell.m2dh.audit.violations.size();
    if (cell.baseline) violations += cell.baseline->audit.violations.size();
  }
  write_text(c.output_dir / "comparison.csv", md::comparison_csv(cells));
  const std::string table = md::comparison_markdown(cells);
  write_text(c.output_dir / "comparison.md", table);
  std::cout << table;
  return violations == 0 ? kExitOk : kExitInvalid;
}

int run_gap(const md::ScenarioConfig& c, const std::string& configs) {
  const md::ScenarioData data = md::load_scenario_data(c);
  const auto cells = md::gap_study(data, parse_int_list(configs), md::kPrioritySettings, c.per_type);
  std::filesystem::create_directories(c.output_dir);
  write_text(c.output_dir / "gap.csv", md::gap_csv(cells));
  const std::string table = md::gap_markdown(cells);
  write_text(c.output_dir / "gap.md", table);
  std::cout << "average (maximum) optimality gap, %\n" << table;
  bool negative = false;
  for (const auto& cell : cells) negative = negative || cell.summary.minimum_pct < -1e-9;
  return negative ? kExitInvalid : kExitOk;
}

int run_bench(const md::ScenarioConfig& c, const std::string& sizes, const std::string& algorithms, int repeats) {
  const md::ScenarioData data = md::load_scenario_data(c);
  std::vector<md::Algorithm> algs;
  std::stringstream ss(algorithms);
  for (std::string a; std::getline(ss, a, ',');) algs.push_back(md::parse_algorithm(a));
  const auto points = md::runtime_bench(data, parse_int_list(sizes), algs, c.weights, repeats);
  std::filesystem::create_directories(c.output_dir);
  const std::string table = md::bench_csv(points);
  write_text(c.output_dir / "bench.csv", table);
  write_text(c.output_dir / "environment.json", md::environment_json());
  std::cout << table;
  return kExitOk;
}

int run_validate(const md::ScenarioConfig& c) {
  const md::ScenarioData data = md::load_scenario_data(c);
  std::cout << "network: " << data.network.hospitals().size() << " hospitals, " << data.network.vertiports().size()
            << " vertiports\n";
  for (md::NodeIndex h : data.network.hospitals()) {
    if (!data.network.vertiports().empty()) {
      std::cout << "  " << data.network.id(h) << " -> " << data.network.id(data.network.nearest_vertiport(h))
                << "\n";
    }
  }
  std::cout << "travel-time table: " << data.table.hours() << " hours, complete\n"
            << "requests: " << data.requests.size() << " (hash "
            << md::hex64(md::demand_hash(data.requests, data.network)) << ")\n"
            << "fleet: " << c.fleet_counts().ambulances << " ambulances, " << c.fleet_counts().evtols << " eVTOLs, "
            << c.fleet_counts().uavs << " UAVs\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal medical dispatch: ambulances, eVTOLs and UAVs"};
  app.require_subcommand(1);

  auto* fixture_cmd = app.add_subcommand("gen-network-fixture", "Write a bundled fixture network and inputs");
  std::string fixture_name = "ohio", fixture_out = "data/ohio";
  std::uint64_t fixture_seed = 7;
  bool fixture_calm = false;
  fixture_cmd->add_option("--fixture", fixture_name, "ohio, ohio-plain or single-vertiport");
  fixture_cmd->add_option("-o,--output-dir", fixture_out, "Destination directory");
  fixture_cmd->add_option("--seed", fixture_seed, "Seed for synthetic roads, traffic and wind");
  fixture_cmd->add_flag("--calm", fixture_calm, "Zero wind everywhere");

  ScenarioFlags demand_flags;
  auto* demand_cmd = app.add_subcommand("gen-demand", "Generate a request list");
  demand_flags.add_to(*demand_cmd);
  std::string demand_out = "requests.csv";
  demand_cmd->add_option("--out", demand_out, "Requests CSV to write");

  ScenarioFlags dispatch_flags;
  auto* dispatch_cmd = app.add_subcommand("dispatch", "Run one scenario and write its report");
  dispatch_flags.add_to(*dispatch_cmd);

  ScenarioFlags compare_flags;
  auto* compare_cmd = app.add_subcommand("compare", "Run every configuration under every priority setting");
  compare_flags.add_to(*compare_cmd);
  std::string compare_configs = "1,2,3,4";
  bool compare_baseline = false;
  compare_cmd->add_option("--configurations", compare_configs, "Comma-separated configuration ids");
  compare_cmd->add_flag("--baseline", compare_baseline, "Also run the benchmark heuristic per cell");

  ScenarioFlags gap_flags;
  auto* gap_cmd = app.add_subcommand("gap", "Optimality gap against the exhaustive oracle");
  gap_flags.add_to(*gap_cmd);
  std::string gap_configs = "1,2,3,4";
  gap_cmd->add_option("--configurations", gap_configs, "Comma-separated configuration ids");

  ScenarioFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "Per-request runtime against fleet size");
  bench_flags.add_to(*bench_cmd);
  std::string bench_sizes = "10,20,30,40,50", bench_algs = "m2dh,baseline,exhaustive";
  int bench_repeats = 3;
  bench_cmd->add_option("--sizes", bench_sizes, "Comma-separated fleet sizes");
  bench_cmd->add_option("--algorithms", bench_algs, "Comma-separated algorithms");
  bench_cmd->add_option("--repeats", bench_repeats, "Repeats per point (median reported)");

  ScenarioFlags validate_flags;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario's inputs without dispatching");
  validate_flags.add_to(*validate_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (fixture_cmd->parsed()) return gen_network_fixture(fixture_name, fixture_out, fixture_seed, fixture_calm);
    if (demand_cmd->parsed()) {
      const auto c = demand_flags.resolve();
      const md::ScenarioData data = md::load_scenario_data(c);
      md::save_requests(data.requests, data.network, demand_out);
      std::cout << "wrote " << data.requests.size() << " requests to " << demand_out << "\n";
      return kExitOk;
    }
    if (dispatch_cmd->parsed()) return run_dispatch(dispatch_flags.resolve());
    if (compare_cmd->parsed()) return run_compare(compare_flags.resolve(), compare_configs, compare_baseline);
    if (gap_cmd->parsed()) return run_gap(gap_flags.resolve(), gap_configs);
    if (bench_cmd->parsed()) return run_bench(bench_flags.resolve(), bench_sizes, bench_algs, bench_repeats);
    if (validate_cmd->parsed()) return run_validate(validate_flags.resolve());
  } catch (const md::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const md::DataError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
