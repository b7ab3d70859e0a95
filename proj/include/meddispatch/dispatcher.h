#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meddispatch/demand.h"
#include "meddispatch/fleet.h"
#include "meddispatch/network.h"
#include "meddispatch/routes.h"
#include "meddispatch/specs.h"
#include "meddispatch/travel_time.h"

namespace meddispatch {

struct ObjectiveWeights {
  double time = 1.0;  // w_t
  double cost = 1.0;  // w_c

  void check() const;  // throws ConfigError
  friend bool operator==(const ObjectiveWeights&, const ObjectiveWeights&) = default;
};

// Denominators that put minutes and dollars on a common scale. Fixed per
// scenario before any dispatching.
struct NormalizationConstants {
  Minutes time_denominator = 1.0;     // max waiting + max travel
  double energy_denominator = 1.0;    // max recharging/fuel cost, USD
  double operating_denominator = 1.0; // max operating cost, USD

  // time: horizon length. costs: largest per-km rate across the vehicle
  // types x 3 legs x twice the network's air diameter. Independent of fleet
  // counts, so configurations of one study share the same scale.
  static NormalizationConstants for_scenario(const Network& network, const SpecSet& specs,
                                             Minutes horizon_length);
};

struct LegCost {
  Minutes waiting = 0.0;
  Minutes travel = 0.0;
  double energy = 0.0;     // USD
  double operating = 0.0;  // USD

  LegCost& operator+=(const LegCost& o) {
    waiting += o.waiting;
    travel += o.travel;
    energy += o.energy;
    operating += o.operating;
    return *this;
  }
  friend bool operator==(const LegCost&, const LegCost&) = default;
};

// w_t * (waiting + travel) / time_den + w_c * (energy / energy_den + operating / operating_den)
double request_objective(const LegCost& totals, const ObjectiveWeights& weights,
                         const NormalizationConstants& norms);

enum class TimingCase {
  vehicle_free_after_request = 1,  // request time <= slot start
  late_reposition = 2,             // vehicle free earlier but cannot arrive by the request time
  early_reposition = 3,            // vehicle arrives exactly at the request time
  consolidation = 4,               // joins an already scheduled leg
};

struct LegTiming {
  TimingCase timing_case = TimingCase::vehicle_free_after_request;
  Minutes reposition_start = 0.0;
  Minutes pickup = 0.0;
  Minutes dropoff = 0.0;
  Minutes waiting = 0.0;
  Minutes travel = 0.0;
};

// Waiting, travel, and schedule times for a free slot starting at
// `slot_start`, a leg requested at `request_time`, a reposition of
// `reposition_minutes` and a loaded leg of `service_minutes`.
LegTiming leg_timing(Minutes slot_start, Minutes request_time, Minutes reposition_minutes,
                     Minutes service_minutes);

// Joining a scheduled leg keeps its times: waiting until its pickup and its
// in-vehicle duration.
LegTiming consolidation_timing(Minutes request_time, Minutes scheduled_pickup, Minutes scheduled_dropoff);

// Per-km billing of a movement of `km` kilometres, returned as the cost
// half of a LegCost.
LegCost score_distance(const VehicleSpec& spec, double km);

// Everything dispatching reads besides the fleet.
struct DispatchContext {
  const Network* network = nullptr;
  const TravelTimeTable* table = nullptr;
  SpecSet specs;
  ObjectiveWeights weights;
  NormalizationConstants norms;
};

// One leg of one request, with physical endpoints for its mode.
struct LegRequest {
  std::string request_id;
  PayloadKind kind = PayloadKind::supply;
  int units = 1;
  Mode mode = Mode::ambulance;
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  Minutes request_time = 0.0;  // ready time for leg 1, previous dropoff afterwards
  Minutes deadline = 0.0;
};

struct SlotOption {
  std::size_t vehicle = 0;
  bool consolidation = false;
  std::size_t leg_position = 0;  // consolidation target on the vehicle's timeline
  FreeSlot slot;
  NodeIndex reposition_from = 0;
  LegTiming timing;
  LegCost cost;
  double reposition_km = 0.0;
  double service_km = 0.0;
  double return_km = 0.0;
  std::optional<NodeIndex> return_to;
  Minutes return_end = 0.0;
  double z = 0.0;  // objective restricted to this leg
};

// Free-slot and (optionally) consolidation options on vehicles of the leg's
// mode that finish by both the slot end and the deadline. A free slot
// followed by other work also needs time to return to where that work
// starts; the return is billed to this leg.
std::vector<SlotOption> eligible_slots(const Fleet& fleet, const DispatchContext& ctx, const LegRequest& leg,
                                       bool allow_consolidation = true);

// Minimum leg objective; ties go to the earlier dropoff, then the smaller
// vehicle id.
const SlotOption& best_slot(std::span<const SlotOption> options, const Fleet& fleet);

struct LegAssignment {
  std::string vehicle_id;
  std::size_t vehicle = 0;
  Mode mode = Mode::ambulance;
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  NodeIndex reposition_from = 0;
  Minutes request_time = 0.0;
  Minutes reposition_start = 0.0;
  Minutes pickup = 0.0;
  Minutes dropoff = 0.0;
  bool consolidated = false;
  TimingCase timing_case = TimingCase::vehicle_free_after_request;
  LegCost cost;
  double reposition_km = 0.0;
  double service_km = 0.0;
  double return_km = 0.0;
  std::optional<NodeIndex> return_to;
  Minutes return_end = 0.0;

  friend bool operator==(const LegAssignment&, const LegAssignment&) = default;
};

struct AssignedLeg {
  LegAssignment assignment;
  CommitToken token;
};

// Commits the option to the fleet. Throws CommitRejected when the fleet
// refuses it.
AssignedLeg assign_leg(Fleet& fleet, const DispatchContext& ctx, const SlotOption& option,
                       const LegRequest& leg);

struct DispatchPlan {
  std::string request_id;
  CandidateRoute route;
  std::vector<LegAssignment> legs;
  LegCost totals;
  double z = 0.0;

  Minutes final_dropoff() const { return legs.back().dropoff; }
  friend bool operator==(const DispatchPlan&, const DispatchPlan&) = default;
};

struct RouteEvaluation {
  std::vector<LegAssignment> legs;
  std::vector<CommitToken> tokens;  // pending on the fleet, in commit order
  LegCost totals;
  double z = 0.0;
};

// Greedy leg-by-leg assignment of one candidate route. On success the legs
// stay committed (pending) on the fleet; on failure nothing is left behind.
std::optional<RouteEvaluation> evaluate_route(Fleet& fleet, const DispatchContext& ctx, const Request& request,
                                              const CandidateRoute& route, bool allow_consolidation);

// Undo a successful evaluate_route.
void rollback_route(Fleet& fleet, const RouteEvaluation& evaluation);

// Plan ordering: smaller z, then fewer legs, then earlier final dropoff,
// then lexicographically smaller vehicle-id tuple.
bool better_plan(const DispatchPlan& a, const DispatchPlan& b);

struct DispatchOptions {
  bool allow_consolidation = true;
};

// Evaluates every candidate tentatively, keeps the best complete one, and
// leaves exactly its legs committed (the fleet journal is sealed). Returns
// nullopt when no candidate can meet the deadline.
std::optional<DispatchPlan> dispatch_among(const Request& request, std::span<const CandidateRoute> candidates,
                                           Fleet& fleet, const DispatchContext& ctx,
                                           const DispatchOptions& options = {});

// Candidates over the nearest-vertiport patterns, filtered by leg validity.
std::vector<CandidateRoute> multimodal_candidates(const Request& request, const Fleet& fleet,
                                                  const DispatchContext& ctx);

// The multimodal greedy dispatcher over nearest-vertiport routes with
// payload consolidation.
std::optional<DispatchPlan> dispatch_request(const Request& request, Fleet& fleet, const DispatchContext& ctx);

FleetCounts counts_of(const Fleet& fleet);

}  // namespace meddispatch
