#include "meddispatch/fleet.h"

#include <algorithm>
#include <cmath>

namespace meddispatch {

namespace {

constexpr double kTimeSlack = 1e-9;

std::string describe(const Vehicle& v, const std::string& what) { return v.id + ": " + what; }

}  // namespace

int FleetCounts::of(Mode m) const {
  switch (m) {
    case Mode::ambulance:
      return ambulances;
    case Mode::evtol:
      return evtols;
    case Mode::uav:
      return uavs;
  }
  return 0;
}

FleetCounts FleetCounts::configuration(int id, int per_type) {
  switch (id) {
    case 1:
      return {per_type, 0, 0};
    case 2:
      return {per_type, 0, per_type};
    case 3:
      return {per_type, per_type, 0};
    case 4:
      return {per_type, per_type, per_type};
    default:
      throw ConfigError("fleet configuration id must be 1..4, got " + std::to_string(id));
  }
}

std::string vehicle_id_prefix(Mode m) {
  switch (m) {
    case Mode::ambulance:
      return "Ambulance";
    case Mode::evtol:
      return "eVTOL";
    case Mode::uav:
      return "UAV";
  }
  return "Vehicle";
}

std::vector<FreeSlot> Timeline::free_slots(NodeIndex initial_location, Minutes horizon_end,
                                           Minutes not_before) const {
  std::vector<FreeSlot> slots;
  Minutes cursor = 0.0;
  NodeIndex location = initial_location;
  for (const ScheduledLeg& leg : legs_) {
    if (leg.reposition_start > cursor && leg.reposition_start > not_before) {
      slots.push_back({cursor, leg.reposition_start, location, leg.reposition_from});
    }
    cursor = leg.end_time();
    location = leg.end_location();
  }
  if (horizon_end > cursor && horizon_end > not_before) {
    slots.push_back({cursor, horizon_end, location, std::nullopt});
  }
  return slots;
}

NodeIndex Vehicle::location_at(Minutes t) const {
  NodeIndex loc = initial_location;
  for (const ScheduledLeg& leg : timeline.legs()) {
    if (t < leg.reposition_start) break;
    loc = t >= leg.end_time() ? leg.end_location() : leg.destination;
  }
  return loc;
}

Fleet::Fleet(std::vector<Vehicle> vehicles, Minutes horizon_end)
    : vehicles_(std::move(vehicles)), horizon_end_(horizon_end) {}

int Fleet::count(Mode m) const {
  return static_cast<int>(std::count_if(vehicles_.begin(), vehicles_.end(),
                                        [m](const Vehicle& v) { return v.mode() == m; }));
}

std::vector<FreeSlot> Fleet::free_slots(std::size_t vehicle, Minutes not_before) const {
  const Vehicle& v = vehicles_.at(vehicle);
  return v.timeline.free_slots(v.initial_location, horizon_end_, not_before);
}

std::vector<ConsolidationMatch> Fleet::find_consolidation_slots(std::size_t vehicle, NodeIndex origin,
                                                                NodeIndex destination, int units,
                                                                PayloadKind kind) const {
  std::vector<ConsolidationMatch> out;
  const Vehicle& v = vehicles_.at(vehicle);
  if (units < 1 || !v.spec.carries(kind)) return out;
  const auto& legs = v.timeline.legs();
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const ScheduledLeg& leg = legs[i];
    if (leg.origin == origin && leg.destination == destination &&
        leg.occupied_units + units <= v.spec.capacity) {
      out.push_back({vehicle, i});
    }
  }
  return out;
}

CommitToken Fleet::commit(std::size_t vehicle, const ScheduledLeg& leg, const Network& network) {
  if (vehicle >= vehicles_.size()) throw CommitRejected("unknown vehicle index");
  Vehicle& v = vehicles_[vehicle];
  auto reject = [&v](const std::string& why) { throw CommitRejected(describe(v, why)); };

  if (!(leg.reposition_start >= -kTimeSlack && leg.reposition_start <= leg.pickup + kTimeSlack &&
        leg.pickup <= leg.dropoff + kTimeSlack && leg.dropoff <= leg.end_time() + kTimeSlack)) {
    reject("leg times out of order");
  }
  if (leg.end_time() > horizon_end_ + kTimeSlack) reject("leg ends after the horizon");
  if (leg.requests.empty() || leg.requests.size() != leg.payloads.size()) {
    reject("leg must carry at least one request");
  }
  if (leg.occupied_units < 1 || leg.occupied_units > v.spec.capacity) reject("capacity exceeded");
  for (PayloadKind k : leg.payloads) {
    if (!v.spec.carries(k)) reject(std::string("cannot carry ") + std::string(to_string(k)));
  }
  for (NodeIndex n : {leg.reposition_from, leg.origin, leg.destination, leg.end_location()}) {
    if (!v.spec.lands_at(network.kind(n))) reject("cannot operate at " + network.id(n));
  }
  const double range_slack = 1e-9 * std::max(1.0, v.spec.range_km);
  if (leg.reposition_km > v.spec.range_km + range_slack || leg.service_km > v.spec.range_km + range_slack ||
      leg.return_km > v.spec.range_km + range_slack) {
    reject("flight exceeds range");
  }

  auto& legs = v.timeline.legs_;
  const auto pos = static_cast<std::size_t>(
      std::upper_bound(legs.begin(), legs.end(), leg.reposition_start,
                       [](Minutes t, const ScheduledLeg& l) { return t < l.reposition_start; }) -
      legs.begin());
  const NodeIndex expected_from = pos == 0 ? v.initial_location : legs[pos - 1].end_location();
  if (pos > 0 && legs[pos - 1].end_time() > leg.reposition_start + kTimeSlack) {
    reject("overlaps the previous leg");
  }
  if (pos < legs.size() && leg.end_time() > legs[pos].reposition_start + kTimeSlack) {
    reject("overlaps the next leg");
  }
  if (leg.reposition_from != expected_from) reject("does not start where the vehicle is");
  if (pos < legs.size() && leg.end_location() != legs[pos].reposition_from) {
    reject("does not end where the next leg starts");
  }

  legs.insert(legs.begin() + static_cast<std::ptrdiff_t>(pos), leg);
  const CommitToken token{next_token_++};
  journal_.push_back({token.id, vehicle, pos, false, 0});
  return token;
}

CommitToken Fleet::commit_consolidation(std::size_t vehicle, std::size_t leg_index,
                                        const std::string& request, PayloadKind kind, int units) {
  if (vehicle >= vehicles_.size()) throw CommitRejected("unknown vehicle index");
  Vehicle& v = vehicles_[vehicle];
  auto& legs = v.timeline.legs_;
  if (leg_index >= legs.size()) throw CommitRejected(describe(v, "unknown leg"));
  ScheduledLeg& leg = legs[leg_index];
  if (units < 1 || leg.occupied_units + units > v.spec.capacity) {
    throw CommitRejected(describe(v, "capacity exceeded"));
  }
  if (!v.spec.carries(kind)) {
    throw CommitRejected(describe(v, std::string("cannot carry ") + std::string(to_string(kind))));
  }
  leg.requests.push_back(request);
  leg.payloads.push_back(kind);
  leg.occupied_units += units;
  const CommitToken token{next_token_++};
  journal_.push_back({token.id, vehicle, leg_index, true, units});
  return token;
}

void Fleet::rollback(CommitToken token) {
  if (journal_.empty() || journal_.back().id != token.id) {
    throw std::logic_error("rollback: token " + std::to_string(token.id) +
                           " is not the most recent pending commit");
  }
  const JournalEntry e = journal_.back();
  journal_.pop_back();
  auto& legs = vehicles_[e.vehicle].timeline.legs_;
  if (e.consolidation) {
    ScheduledLeg& leg = legs[e.leg];
    leg.requests.pop_back();
    leg.payloads.pop_back();
    leg.occupied_units -= e.units;
  } else {
    legs.erase(legs.begin() + static_cast<std::ptrdiff_t>(e.leg));
  }
}

std::vector<std::string> Fleet::check(const Network& network) const {
  std::vector<std::string> problems;
  for (const Vehicle& v : vehicles_) {
    NodeIndex location = v.initial_location;
    Minutes cursor = 0.0;
    if (!v.spec.lands_at(network.kind(v.initial_location))) {
      problems.push_back(describe(v, "initial location kind not allowed"));
    }
    for (const ScheduledLeg& leg : v.timeline.legs()) {
      if (leg.reposition_start + kTimeSlack < cursor) problems.push_back(describe(v, "overlapping legs"));
      if (leg.reposition_from != location) problems.push_back(describe(v, "broken spatial chain"));
      if (!(leg.reposition_start <= leg.pickup + kTimeSlack && leg.pickup <= leg.dropoff + kTimeSlack)) {
        problems.push_back(describe(v, "leg times out of order"));
      }
      if (leg.end_time() > horizon_end_ + kTimeSlack) problems.push_back(describe(v, "leg past horizon"));
      if (leg.occupied_units > v.spec.capacity) problems.push_back(describe(v, "capacity exceeded"));
      cursor = leg.end_time();
      location = leg.end_location();
    }
  }
  return problems;
}

Fleet initialize_fleet(const FleetCounts& counts, const SpecSet& specs, const Network& network,
                       Minutes horizon_end) {
  if (counts.ambulances < 0 || counts.evtols < 0 || counts.uavs < 0) {
    throw ConfigError("fleet counts must be nonnegative");
  }
  if (counts.evtols > 0 && network.vertiports().empty()) {
    throw ConfigError("eVTOLs requested but the network has no vertiports");
  }
  if (counts.ambulances + counts.uavs > 0 && network.hospitals().empty()) {
    throw ConfigError("ground vehicles and UAVs need at least one hospital");
  }
  std::vector<Vehicle> vehicles;
  auto add = [&](Mode mode, int count, const std::vector<NodeIndex>& homes) {
    check_spec(specs[mode]);
    for (int i = 0; i < count; ++i) {
      Vehicle v;
      v.id = vehicle_id_prefix(mode) + std::to_string(i + 1);
      v.spec = specs[mode];
      v.initial_location = homes[static_cast<std::size_t>(i) % homes.size()];
      vehicles.push_back(std::move(v));
    }
  };
  add(Mode::ambulance, counts.ambulances, network.hospitals());
  add(Mode::evtol, counts.evtols, network.vertiports());
  add(Mode::uav, counts.uavs, network.hospitals());
  return Fleet(std::move(vehicles), horizon_end);
}

}  // namespace meddispatch
