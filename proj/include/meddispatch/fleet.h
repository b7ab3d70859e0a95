#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meddispatch/core.h"
#include "meddispatch/network.h"
#include "meddispatch/specs.h"

namespace meddispatch {

struct FleetCounts {
  int ambulances = 0;
  int evtols = 0;
  int uavs = 0;

  int of(Mode m) const;
  int total() const { return ambulances + evtols + uavs; }

  // 1: ambulances only, 2: +UAVs, 3: +eVTOLs, 4: all three.
  static FleetCounts configuration(int id, int per_type = 12);

  friend bool operator==(const FleetCounts&, const FleetCounts&) = default;
};

// One vehicle movement on a timeline: an empty reposition from
// `reposition_from` to `origin`, the loaded service leg to `destination`,
// and, when the leg was inserted ahead of later work, an empty return to the
// location that work starts from.
struct ScheduledLeg {
  std::vector<std::string> requests;
  std::vector<PayloadKind> payloads;  // parallel to requests
  NodeIndex reposition_from = 0;
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  Minutes reposition_start = 0.0;
  Minutes pickup = 0.0;
  Minutes dropoff = 0.0;
  std::optional<NodeIndex> return_to;
  Minutes return_end = 0.0;
  int occupied_units = 0;
  double reposition_km = 0.0;
  double service_km = 0.0;
  double return_km = 0.0;
  double energy_cost = 0.0;
  double operating_cost = 0.0;

  Minutes end_time() const { return return_to ? return_end : dropoff; }
  NodeIndex end_location() const { return return_to ? *return_to : destination; }

  friend bool operator==(const ScheduledLeg&, const ScheduledLeg&) = default;
};

// An idle interval. `end_location` is where the vehicle must be at `end`
// (the start of the next leg's reposition); empty for the trailing slot.
struct FreeSlot {
  Minutes start = 0.0;
  Minutes end = 0.0;
  NodeIndex location = 0;
  std::optional<NodeIndex> end_location;

  friend bool operator==(const FreeSlot&, const FreeSlot&) = default;
};

class Timeline {
 public:
  const std::vector<ScheduledLeg>& legs() const { return legs_; }
  bool empty() const { return legs_.empty(); }

  // Idle intervals (in time order) that end after `not_before`.
  std::vector<FreeSlot> free_slots(NodeIndex initial_location, Minutes horizon_end,
                                   Minutes not_before = 0.0) const;

  friend bool operator==(const Timeline&, const Timeline&) = default;

 private:
  friend class Fleet;
  std::vector<ScheduledLeg> legs_;  // ordered by reposition_start
};

struct Vehicle {
  std::string id;
  VehicleSpec spec;
  NodeIndex initial_location = 0;
  Timeline timeline;

  Mode mode() const { return spec.mode; }
  // Position at time t: the last completed leg's end location, otherwise
  // the initial location. While a leg is in progress, its destination.
  NodeIndex location_at(Minutes t) const;
};

class CommitRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommitToken {
  std::uint64_t id = 0;
};

// Positions of legs on one vehicle that can absorb another payload.
struct ConsolidationMatch {
  std::size_t vehicle = 0;
  std::size_t leg = 0;
};

// The fleet state of one dispatch run. Every mutation goes through commit
// and is journaled until seal(), so tentative assignments can be undone in
// LIFO order.
class Fleet {
 public:
  Fleet() = default;
  Fleet(std::vector<Vehicle> vehicles, Minutes horizon_end);

  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  const Vehicle& vehicle(std::size_t i) const { return vehicles_.at(i); }
  std::size_t size() const { return vehicles_.size(); }
  Minutes horizon_end() const { return horizon_end_; }
  int count(Mode m) const;

  std::vector<FreeSlot> free_slots(std::size_t vehicle, Minutes not_before = 0.0) const;

  // Scheduled legs on `vehicle` with the same origin/destination, spare
  // capacity for `units`, and a vehicle that may carry `kind`.
  std::vector<ConsolidationMatch> find_consolidation_slots(std::size_t vehicle, NodeIndex origin,
                                                           NodeIndex destination, int units,
                                                           PayloadKind kind) const;

  // Inserts a new leg. Throws CommitRejected when it would overlap another
  // leg, break spatial chaining, leave the horizon, exceed capacity or
  // range, or use a payload/node kind the vehicle does not allow.
  CommitToken commit(std::size_t vehicle, const ScheduledLeg& leg, const Network& network);

  // Adds a payload to an existing leg; times are unchanged.
  CommitToken commit_consolidation(std::size_t vehicle, std::size_t leg, const std::string& request,
                                   PayloadKind kind, int units);

  // Undoes the most recent unsealed commit. Throws std::logic_error for any
  // other token.
  void rollback(CommitToken token);

  // Makes all pending commits permanent.
  void seal() { journal_.clear(); }
  std::size_t pending() const { return journal_.size(); }

  // Checks timeline invariants of every vehicle; returns human-readable
  // violations (empty when consistent).
  std::vector<std::string> check(const Network& network) const;

 private:
  struct JournalEntry {
    std::uint64_t id;
    std::size_t vehicle;
    std::size_t leg;
    bool consolidation;
    int units;
  };

  std::vector<Vehicle> vehicles_;
  Minutes horizon_end_ = 0.0;
  std::vector<JournalEntry> journal_;
  std::uint64_t next_token_ = 1;
};

// Ambulances and UAVs round-robin over hospitals in id order, eVTOLs over
// vertiports in id order. Ids are "Ambulance1", "eVTOL1", "UAV1", ...
// Throws ConfigError when eVTOLs are requested and there are no vertiports.
Fleet initialize_fleet(const FleetCounts& counts, const SpecSet& specs, const Network& network,
                       Minutes horizon_end);

std::string vehicle_id_prefix(Mode m);

}  // namespace meddispatch
