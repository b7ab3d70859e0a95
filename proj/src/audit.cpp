#include "meddispatch/audit.h"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

#include "meddispatch/geo.h"

namespace meddispatch {

namespace {

constexpr double kEps = 1e-6;

class Auditor {
 public:
  Auditor(const Network& net, const SpecSet& specs, AuditReport& report)
      : net_(net), specs_(specs), report_(report) {}

  void flag(AuditRule rule, const std::string& subject, std::string detail) {
    report_.violations.push_back({rule, subject, std::move(detail)});
  }

  double flight_km(NodeIndex a, NodeIndex b) const {
    if (a == b) return 0.0;
    return haversine_km(net_.node(a).position, net_.node(b).position);
  }

  void check_range(const std::string& who, const VehicleSpec& spec, NodeIndex a, NodeIndex b, const char* what) {
    if (!is_air(spec.mode)) return;
    const double km = flight_km(a, b);
    if (km > spec.range_km + kEps) {
      flag(AuditRule::range, who,
           std::string(what) + " " + net_.id(a) + "->" + net_.id(b) + " is " + format_double(km) + " km");
    }
  }

  void plan(const Request& r, const DispatchPlan& p, const std::vector<Vehicle>& vehicles) {
    ++report_.plans_checked;
    if (p.legs.empty()) {
      flag(AuditRule::bookkeeping, r.id, "plan without legs");
      return;
    }
    if (p.legs.size() > 3) flag(AuditRule::bookkeeping, r.id, "more than three legs");

    if (net_.place(p.legs.front().origin) != net_.place(r.origin)) {
      flag(AuditRule::continuity, r.id, "first leg does not leave the origin");
    }
    if (net_.place(p.legs.back().destination) != net_.place(r.destination)) {
      flag(AuditRule::continuity, r.id, "last leg does not reach the destination");
    }
    if (p.legs.back().dropoff > r.deadline + kEps) {
      flag(AuditRule::deadline, r.id, "final dropoff " + format_double(p.legs.back().dropoff) + " after deadline " +
                                          format_double(r.deadline));
    }
    if (p.legs.front().pickup + kEps < r.ready) flag(AuditRule::temporal, r.id, "pickup before ready time");

    for (std::size_t s = 0; s < p.legs.size(); ++s) {
      const LegAssignment& leg = p.legs[s];
      ++report_.legs_checked;
      const std::string who = r.id + " leg " + std::to_string(s + 1);
      if (s > 0) {
        const LegAssignment& prev = p.legs[s - 1];
        if (net_.place(prev.destination) != net_.place(leg.origin)) {
          flag(AuditRule::continuity, who, "does not start where the previous leg ended");
        }
        if (leg.pickup + kEps < prev.dropoff) flag(AuditRule::temporal, who, "pickup before previous dropoff");
      }
      if (!(leg.reposition_start <= leg.pickup + kEps && leg.pickup <= leg.dropoff + kEps)) {
        flag(AuditRule::temporal, who, "reposition, pickup and dropoff out of order");
      }
      if (leg.vehicle >= vehicles.size() || vehicles[leg.vehicle].id != leg.vehicle_id) {
        flag(AuditRule::bookkeeping, who, "unknown vehicle " + leg.vehicle_id);
        continue;
      }
      const Vehicle& v = vehicles[leg.vehicle];
      const VehicleSpec& spec = specs_[v.mode()];
      if (v.mode() != leg.mode) flag(AuditRule::vehicle_mode, who, "leg mode differs from vehicle type");
      if (!spec.carries(r.kind)) {
        flag(AuditRule::payload, who, std::string(to_string(v.mode())) + " cannot carry " +
                                          std::string(to_string(r.kind)));
      }
      for (NodeIndex n : {leg.origin, leg.destination}) {
        if (!spec.lands_at(net_.kind(n))) {
          flag(AuditRule::node_kind, who, std::string(to_string(v.mode())) + " cannot use " + net_.id(n));
        }
      }
      check_range(who, spec, leg.origin, leg.destination, "service");
      if (!leg.consolidated) {
        check_range(who, spec, leg.reposition_from, leg.origin, "reposition");
        if (leg.return_to) check_range(who, spec, leg.destination, *leg.return_to, "return");
      }

      const auto key = std::make_tuple(leg.vehicle, leg.pickup, leg.dropoff, leg.origin, leg.destination);
      riders_[key] += r.units;
    }
  }

  void capacities(const std::vector<Vehicle>& vehicles) {
    for (const auto& [key, units] : riders_) {
      const Vehicle& v = vehicles[std::get<0>(key)];
      if (units > v.spec.capacity) {
        flag(AuditRule::capacity, v.id,
             std::to_string(units) + " units on a leg of capacity " + std::to_string(v.spec.capacity));
      }
    }
  }

  void timeline(const Vehicle& v) {
    NodeIndex at = v.initial_location;
    Minutes free_from = 0.0;
    for (const ScheduledLeg& leg : v.timeline.legs()) {
      if (leg.reposition_start + kEps < free_from) {
        flag(AuditRule::overlap, v.id, "leg at " + format_double(leg.reposition_start) + " overlaps earlier work");
      }
      if (leg.reposition_from != at) {
        flag(AuditRule::chaining, v.id, "leg repositions from " + net_.id(leg.reposition_from) + " but vehicle is at " +
                                            net_.id(at));
      }
      if (leg.occupied_units > v.spec.capacity) flag(AuditRule::capacity, v.id, "timeline leg over capacity");
      for (PayloadKind k : leg.payloads) {
        if (!v.spec.carries(k)) flag(AuditRule::payload, v.id, "timeline leg carries a forbidden payload");
      }
      check_range(v.id, v.spec, leg.reposition_from, leg.origin, "reposition");
      check_range(v.id, v.spec, leg.origin, leg.destination, "service");
      if (leg.return_to) check_range(v.id, v.spec, leg.destination, *leg.return_to, "return");
      at = leg.return_to ? *leg.return_to : leg.destination;
      free_from = leg.return_to ? leg.return_end : leg.dropoff;
    }
  }

 private:
  const Network& net_;
  const SpecSet& specs_;
  AuditReport& report_;
  std::map<std::tuple<std::size_t, Minutes, Minutes, NodeIndex, NodeIndex>, int> riders_;
};

}  // namespace

std::string_view to_string(AuditRule r) {
  switch (r) {
    case AuditRule::capacity:
      return "capacity";
    case AuditRule::deadline:
      return "deadline";
    case AuditRule::continuity:
      return "continuity";
    case AuditRule::temporal:
      return "temporal";
    case AuditRule::node_kind:
      return "node-kind";
    case AuditRule::payload:
      return "payload";
    case AuditRule::range:
      return "range";
    case AuditRule::vehicle_mode:
      return "vehicle-mode";
    case AuditRule::overlap:
      return "overlap";
    case AuditRule::chaining:
      return "chaining";
    case AuditRule::bookkeeping:
      return "bookkeeping";
  }
  return "?";
}

std::size_t AuditReport::count(AuditRule r) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [r](const Violation& v) { return v.rule == r; }));
}

AuditReport audit_plans(const Network& network, const SpecSet& specs, std::span<const Request> requests,
                        std::span<const DispatchPlan> plans, const Fleet& fleet) {
  AuditReport report;
  Auditor a(network, specs, report);
  std::unordered_map<std::string, const Request*> by_id;
  for (const Request& r : requests) by_id.emplace(r.id, &r);

  for (const DispatchPlan& p : plans) {
    const auto it = by_id.find(p.request_id);
    if (it == by_id.end()) {
      a.flag(AuditRule::bookkeeping, p.request_id, "plan for an unknown request");
      continue;
    }
    a.plan(*it->second, p, fleet.vehicles());
  }
  a.capacities(fleet.vehicles());
  for (const Vehicle& v : fleet.vehicles()) a.timeline(v);

  // Every planned leg must be on its vehicle's timeline with the request aboard.
  for (const DispatchPlan& p : plans) {
    for (const LegAssignment& leg : p.legs) {
      if (leg.vehicle >= fleet.size()) continue;
      const auto& legs = fleet.vehicle(leg.vehicle).timeline.legs();
      const bool found = std::any_of(legs.begin(), legs.end(), [&](const ScheduledLeg& s) {
        return s.pickup == leg.pickup && s.dropoff == leg.dropoff && s.origin == leg.origin &&
               s.destination == leg.destination &&
               std::find(s.requests.begin(), s.requests.end(), p.request_id) != s.requests.end();
      });
      if (!found) a.flag(AuditRule::bookkeeping, p.request_id, "leg missing from " + leg.vehicle_id + " timeline");
    }
  }
  return report;
}

}  // namespace meddispatch
