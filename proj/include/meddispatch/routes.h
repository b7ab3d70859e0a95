#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "meddispatch/demand.h"
#include "meddispatch/fleet.h"
#include "meddispatch/network.h"
#include "meddispatch/specs.h"
#include "meddispatch/travel_time.h"

namespace meddispatch {

// Node sequence from the origin hospital to the destination hospital with
// zero to two intermediate vertiports.
struct RoutePattern {
  std::vector<NodeIndex> nodes;

  std::size_t leg_count() const { return nodes.size() - 1; }
  friend bool operator==(const RoutePattern&, const RoutePattern&) = default;
};

// Legs reference pattern nodes. Air legs land on a hospital's co-located
// vertiport; see resolve().
struct RouteLeg {
  NodeIndex from = 0;
  NodeIndex to = 0;
  Mode mode = Mode::ambulance;

  friend bool operator==(const RouteLeg&, const RouteLeg&) = default;
};

struct CandidateRoute {
  std::vector<RouteLeg> legs;
  std::size_t pattern = 0;  // index into the pattern list it came from

  friend bool operator==(const CandidateRoute&, const CandidateRoute&) = default;
};

struct ResolvedLeg {
  NodeIndex origin = 0;
  NodeIndex destination = 0;
};

// Physical endpoints for the leg's mode.
ResolvedLeg resolve(const Network& network, const RouteLeg& leg);

// Merges consecutive nodes that are the same place (a hospital and its
// co-located vertiport, or a repeated vertiport). Endpoints are kept.
RoutePattern collapse(const Network& network, const RoutePattern& pattern);

// Direct; via the origin's nearest vertiport; via the destination's nearest
// vertiport; via both. Collapsed and deduplicated.
std::vector<RoutePattern> enumerate_patterns(const Network& network, const Request& request);

// Every ordered choice of 0, 1 or 2 intermediate vertiports without
// immediate repeats. With `collapse_degenerate`, co-location collapses are
// applied and duplicates removed.
std::vector<RoutePattern> exhaustive_patterns(const Network& network, const Request& request,
                                              bool collapse_degenerate = true);

// Cartesian product of modes per leg, for every pattern.
std::vector<CandidateRoute> enumerate_candidates(std::span<const RoutePattern> patterns);

enum class LegViolation {
  none,
  payload,      // vehicle type may not carry the payload kind
  node_kind,    // endpoint kind not allowed for the mode
  range,        // flight longer than the vehicle range
  weather,      // wind makes the leg infeasible at this hour
  unreachable,  // no ground connection
  no_vehicle,   // fleet has no vehicle of this mode
};

std::string_view to_string(LegViolation v);

LegViolation validate_leg(const Network& network, const RouteLeg& leg, const VehicleSpec& spec,
                          PayloadKind kind, const TravelTimeTable& table, int hour, int vehicles_of_mode);

// Candidates whose every leg passes validate_leg at the request's ready hour.
std::vector<CandidateRoute> feasible_candidates(const Network& network, const TravelTimeTable& table,
                                                const SpecSet& specs, const FleetCounts& counts,
                                                const Request& request,
                                                std::span<const CandidateRoute> candidates);

}  // namespace meddispatch
