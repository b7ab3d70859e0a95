#pragma once

#include <cstdint>
#include <vector>

#include "meddispatch/network.h"
#include "meddispatch/travel_time.h"

namespace meddispatch {

// Synthetic inputs around a fixture network. Road distances are great-circle
// distances stretched by a per-pair detour factor; congestion follows a
// two-peak daily curve; wind is a seeded prevailing westerly.
struct FixtureOptions {
  int hours = 9;                 // hourly buckets from the horizon start
  double clock_start_hour = 9.0; // wall-clock hour of horizon minute 0
  double free_flow_kmh = 75.0;
  double capacity_vph = 4000.0;
  double detour_min = 1.2;
  double detour_max = 1.35;
  double wind_min_kmh = 12.0;
  double wind_max_kmh = 30.0;
  double prevailing_from_deg = 250.0;
  bool calm = false;             // zero wind everywhere
  std::uint64_t seed = 7;
};

struct FixtureBundle {
  Network network;
  std::vector<CongestionProfile> congestion;
  std::vector<WindRecord> wind;
};

// Volume-to-capacity ratio at a wall-clock hour: morning and evening rush
// peaks near 8:00 and 17:00.
double congestion_factor(double clock_hour);

// Eight hospitals and five airports in Northeast Ohio. Main Campus has a
// co-located vertiport (BKL) unless `co_location` is false.
std::vector<Node> ohio_nodes(bool co_location = true);

// Five hospitals around a single vertiport, so every hospital pairs with the
// only vertiport.
std::vector<Node> single_vertiport_nodes();

// Full ground matrix over `nodes` with seeded detour factors.
std::vector<GroundEdge> synthetic_ground_edges(const std::vector<Node>& nodes, const FixtureOptions& options);

std::vector<CongestionProfile> synthetic_congestion(const Network& network, const FixtureOptions& options);
std::vector<WindRecord> synthetic_wind(const Network& network, const FixtureOptions& options);

FixtureBundle make_fixture(std::vector<Node> nodes, const FixtureOptions& options = {});
FixtureBundle ohio_fixture(const FixtureOptions& options = {}, bool co_location = true);
FixtureBundle single_vertiport_fixture(const FixtureOptions& options = {});

}  // namespace meddispatch
