#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meddispatch/audit.h"
#include "meddispatch/baselines.h"
#include "meddispatch/demand.h"
#include "meddispatch/dispatcher.h"
#include "meddispatch/fixtures.h"

namespace meddispatch {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kConfigSchemaVersion = 1;

enum class Algorithm { m2dh, baseline, exhaustive };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);

// (w_t, w_c) pairs of the standard study: three time-leaning, three
// cost-leaning, and parity.
inline constexpr std::array<ObjectiveWeights, 7> kPrioritySettings = {{
    {10, 1}, {5, 1}, {2, 1}, {1, 10}, {1, 5}, {1, 2}, {1, 1},
}};

// "wt10_wc1" style label.
std::string priority_label(const ObjectiveWeights& w);

struct SpecOverride {
  std::optional<int> capacity;
  std::optional<double> cruise_kmh;
  std::optional<double> range_km;
  std::optional<double> op_cost_per_km;
  std::optional<double> energy_cost_per_km;
};

struct ScenarioConfig {
  std::filesystem::path network_path;
  std::filesystem::path congestion_path;
  std::filesystem::path wind_path;
  std::optional<std::filesystem::path> requests_path;  // otherwise demand is generated
  DemandParams demand;
  std::optional<int> configuration = 4;
  int per_type = 12;
  FleetCounts counts;  // used when configuration is empty
  std::array<SpecOverride, 3> overrides;  // by Mode
  int ambulance_capacity = kDefaultAmbulanceCapacity;
  ObjectiveWeights weights;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::m2dh;
  std::filesystem::path output_dir = "out";
  Minutes horizon_minutes = 360.0;
  Minutes tail_minutes = 180.0;
  std::optional<double> max_wind_kmh;
  NearestBy nearest_by = NearestBy::air;
  BprParameters bpr;

  FleetCounts fleet_counts() const;
  SpecSet specs() const;
  Minutes schedule_end() const { return horizon_minutes + tail_minutes; }
  int table_hours() const;
  void check() const;  // throws ConfigError
};

// Relative paths in the document are resolved against `base_dir`. Unknown
// keys are rejected.
ScenarioConfig parse_scenario_config(std::string_view json_text, const std::filesystem::path& base_dir);
ScenarioConfig load_scenario_config(const std::filesystem::path& path);
std::string scenario_config_to_json(const ScenarioConfig& config);

// Everything a run reads, shared read-only across cells.
struct ScenarioData {
  Network network;
  TravelTimeTable table;
  SpecSet specs;
  std::vector<Request> requests;
  Minutes schedule_end = 540.0;
  NormalizationConstants norms;
};

// Loads files named by the config, builds the travel-time table and the
// requests (file or generator seeded with config.seed).
ScenarioData load_scenario_data(const ScenarioConfig& config);

// Same from an in-memory fixture; requests are generated from config.demand
// with config.seed unless `requests` is given.
ScenarioData scenario_data_from_fixture(const FixtureBundle& bundle, const ScenarioConfig& config,
                                        std::optional<std::vector<Request>> requests = std::nullopt);

struct RunSettings {
  FleetCounts counts;
  ObjectiveWeights weights;
  Algorithm algorithm = Algorithm::m2dh;
  bool track_gap = false;  // evaluate the oracle on a fleet copy before each request
};

struct RequestOutcome {
  Request request;
  std::optional<DispatchPlan> plan;
  double wall_ms = 0.0;
};

struct ScenarioAggregates {
  std::size_t served = 0;
  std::size_t infeasible = 0;
  Minutes waiting = 0.0;
  Minutes travel = 0.0;
  double energy = 0.0;
  double operating = 0.0;
  double z = 0.0;
  std::size_t consolidated_legs = 0;
  std::array<std::size_t, 3> legs_by_mode{};
};

struct ScenarioReport {
  RunSettings settings;
  std::uint64_t demand_hash = 0;
  std::vector<RequestOutcome> rows;
  ScenarioAggregates totals;
  double mean_ms = 0.0;
  double max_ms = 0.0;
  AuditReport audit;
  std::optional<GapSummary> gap;
  Fleet fleet;  // final state
};

std::optional<DispatchPlan> dispatch_with(Algorithm algorithm, const Request& request, Fleet& fleet,
                                          const DispatchContext& ctx);

// Processes the requests in ready-time order on a fresh fleet, then audits
// every plan.
ScenarioReport run_scenario(const ScenarioData& data, const RunSettings& settings);

// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t demand_hash(const std::vector<Request>& requests, const Network& network);
std::string hex64(std::uint64_t v);

// Report documents. CSVs and summary are deterministic; wall-clock figures
// only appear in the timing document.
std::string requests_csv(const ScenarioReport& report, const Network& network);
std::string legs_csv(const ScenarioReport& report, const Network& network);
std::string summary_json(const ScenarioReport& report, const ScenarioData& data);
std::string timing_json(const ScenarioReport& report);

// Writes requests.csv, legs.csv, summary.json and timing.json.
void write_report(const ScenarioReport& report, const ScenarioData& data, const std::filesystem::path& dir);

struct CellResult {
  int configuration = 0;
  ObjectiveWeights weights;
  ScenarioReport m2dh;
  std::optional<ScenarioReport> baseline;

  // 100 (z_baseline - z_m2dh) / z_baseline over aggregate z.
  std::optional<double> improvement_pct() const;
};

// One cell per (configuration, priority); every cell shares data.requests.
std::vector<CellResult> compare_configurations(const ScenarioData& data, std::span<const int> configurations,
                                               std::span<const ObjectiveWeights> priorities, int per_type = 12,
                                               bool with_baseline = false);

std::string comparison_csv(std::span<const CellResult> cells);
std::string comparison_markdown(std::span<const CellResult> cells);

struct GapCell {
  int configuration = 0;
  ObjectiveWeights weights;
  GapSummary summary;
};

std::vector<GapCell> gap_study(const ScenarioData& data, std::span<const int> configurations,
                               std::span<const ObjectiveWeights> priorities, int per_type = 12);

std::string gap_csv(std::span<const GapCell> cells);
std::string gap_markdown(std::span<const GapCell> cells);

struct BenchPoint {
  Algorithm algorithm = Algorithm::m2dh;
  int fleet_size = 0;
  FleetCounts counts;
  double mean_ms = 0.0;  // median over repeats of the per-request mean
  std::vector<double> repeats_ms;
};

// Splits each size as evenly as possible over the three modes; leftover
// vehicles go to ambulances, then UAVs.
FleetCounts split_fleet(int size);

std::vector<BenchPoint> runtime_bench(const ScenarioData& data, std::span<const int> fleet_sizes,
                                      std::span<const Algorithm> algorithms, const ObjectiveWeights& weights,
                                      int repeats = 3);

std::string bench_csv(std::span<const BenchPoint> points);
std::string environment_json();

}  // namespace meddispatch
