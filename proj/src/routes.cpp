#include "meddispatch/routes.h"

#include <algorithm>

namespace meddispatch {

namespace {

void push_unique(std::vector<RoutePattern>& out, RoutePattern p) {
  if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
}

}  // namespace

ResolvedLeg resolve(const Network& network, const RouteLeg& leg) {
  if (is_air(leg.mode)) return {network.air_endpoint(leg.from), network.air_endpoint(leg.to)};
  return {leg.from, leg.to};
}

RoutePattern collapse(const Network& network, const RoutePattern& pattern) {
  RoutePattern out;
  const std::size_t last = pattern.nodes.size() - 1;
  for (std::size_t i = 0; i < pattern.nodes.size(); ++i) {
    const NodeIndex n = pattern.nodes[i];
    if (out.nodes.empty() || network.place(out.nodes.back()) != network.place(n)) {
      out.nodes.push_back(n);
    } else if (i == last && out.nodes.size() > 1) {
      // The merged intermediate gives way to the destination hospital.
      out.nodes.back() = n;
    } else if (i == last) {
      // Origin and destination share a place; keep both endpoints.
      out.nodes.push_back(n);
    }
  }
  return out;
}

std::vector<RoutePattern> enumerate_patterns(const Network& network, const Request& request) {
  const NodeIndex o = request.origin;
  const NodeIndex d = request.destination;
  std::vector<RoutePattern> out;
  push_unique(out, collapse(network, {{o, d}}));
  if (network.vertiports().empty()) return out;
  const NodeIndex vo = network.nearest_vertiport(o);
  const NodeIndex vd = network.nearest_vertiport(d);
  push_unique(out, collapse(network, {{o, vo, d}}));
  push_unique(out, collapse(network, {{o, vd, d}}));
  push_unique(out, collapse(network, {{o, vo, vd, d}}));
  return out;
}

std::vector<RoutePattern> exhaustive_patterns(const Network& network, const Request& request,
                                              bool collapse_degenerate) {
  const NodeIndex o = request.origin;
  const NodeIndex d = request.destination;
  std::vector<RoutePattern> raw;
  raw.push_back({{o, d}});
  for (NodeIndex v : network.vertiports()) raw.push_back({{o, v, d}});
  for (NodeIndex v1 : network.vertiports()) {
    for (NodeIndex v2 : network.vertiports()) {
      if (v1 != v2) raw.push_back({{o, v1, v2, d}});
    }
  }
  if (!collapse_degenerate) return raw;
  std::vector<RoutePattern> out;
  for (const auto& p : raw) push_unique(out, collapse(network, p));
  return out;
}

std::vector<CandidateRoute> enumerate_candidates(std::span<const RoutePattern> patterns) {
  std::vector<CandidateRoute> out;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const auto& nodes = patterns[p].nodes;
    const std::size_t legs = nodes.size() - 1;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < legs; ++i) combos *= kAllModes.size();
    for (std::size_t c = 0; c < combos; ++c) {
      CandidateRoute route;
      route.pattern = p;
      std::size_t code = c;
      // Most significant digit is the first leg, so ambulance-first routes come first.
      std::vector<Mode> modes(legs);
      for (std::size_t i = legs; i-- > 0;) {
        modes[i] = kAllModes[code % kAllModes.size()];
        code /= kAllModes.size();
      }
      for (std::size_t i = 0; i < legs; ++i) route.legs.push_back({nodes[i], nodes[i + 1], modes[i]});
      out.push_back(std::move(route));
    }
  }
  return out;
}

std::string_view to_string(LegViolation v) {
  switch (v) {
    case LegViolation::none:
      return "none";
    case LegViolation::payload:
      return "payload";
    case LegViolation::node_kind:
      return "node-kind";
    case LegViolation::range:
      return "range";
    case LegViolation::weather:
      return "weather";
    case LegViolation::unreachable:
      return "unreachable";
    case LegViolation::no_vehicle:
      return "no-vehicle";
  }
  return "?";
}

LegViolation validate_leg(const Network& network, const RouteLeg& leg, const VehicleSpec& spec,
                          PayloadKind kind, const TravelTimeTable& table, int hour, int vehicles_of_mode) {
  if (!spec.carries(kind)) return LegViolation::payload;
  const ResolvedLeg r = resolve(network, leg);
  if (!spec.lands_at(network.kind(r.origin)) || !spec.lands_at(network.kind(r.destination))) {
    return LegViolation::node_kind;
  }
  if (is_air(leg.mode) && network.air_km(r.origin, r.destination) > spec.range_km) {
    return LegViolation::range;
  }
  if (table.infeasible(leg.mode, r.origin, r.destination, hour)) return LegViolation::weather;
  if (!table.minutes(leg.mode, r.origin, r.destination, hour)) return LegViolation::unreachable;
  if (vehicles_of_mode < 1) return LegViolation::no_vehicle;
  return LegViolation::none;
}

std::vector<CandidateRoute> feasible_candidates(const Network& network, const TravelTimeTable& table,
                                                const SpecSet& specs, const FleetCounts& counts,
                                                const Request& request,
                                                std::span<const CandidateRoute> candidates) {
  const int hour = hour_of(request.ready);
  std::vector<CandidateRoute> out;
  for (const CandidateRoute& c : candidates) {
    const bool ok = std::all_of(c.legs.begin(), c.legs.end(), [&](const RouteLeg& leg) {
      return validate_leg(network, leg, specs[leg.mode], request.kind, table, hour, counts.of(leg.mode)) ==
             LegViolation::none;
    });
    if (ok) out.push_back(c);
  }
  return out;
}

}  // namespace meddispatch
