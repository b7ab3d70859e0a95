#include "meddispatch/dispatcher.h"

#include <algorithm>
#include <cmath>

namespace meddispatch {

namespace {

constexpr double kTimeSlack = 1e-9;
constexpr double kRelativeTie = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kRelativeTie * std::max(std::abs(a), std::abs(b));
}

struct Movement {
  Minutes minutes = 0.0;
  double km = 0.0;
};

// Travel of one vehicle between two physical nodes at a horizon hour, or
// nullopt when there is no connection, the weather grounds it, or the
// flight exceeds the vehicle's range.
std::optional<Movement> move(const DispatchContext& ctx, const VehicleSpec& spec, NodeIndex from, NodeIndex to,
                             int hour) {
  if (from == to) return Movement{};
  const auto minutes = ctx.table->minutes(spec.mode, from, to, hour);
  if (!minutes) return std::nullopt;
  double km = 0.0;
  if (is_air(spec.mode)) {
    km = ctx.network->air_km(from, to);
    if (km > spec.range_km) return std::nullopt;
  } else {
    const auto road = ctx.network->ground_km(from, to);
    if (!road) return std::nullopt;
    km = *road;
  }
  return Movement{*minutes, km};
}

std::optional<SlotOption> evaluate_free_slot(const Fleet& fleet, const DispatchContext& ctx, std::size_t vehicle,
                                             const FreeSlot& slot, const LegRequest& leg) {
  const VehicleSpec& spec = fleet.vehicle(vehicle).spec;
  const auto reposition = move(ctx, spec, slot.location, leg.origin, hour_of(slot.start));
  if (!reposition) return std::nullopt;
  const Minutes pickup = std::max(slot.start + reposition->minutes, leg.request_time);
  const auto service = move(ctx, spec, leg.origin, leg.destination, hour_of(pickup));
  if (!service) return std::nullopt;

  SlotOption opt;
  opt.vehicle = vehicle;
  opt.slot = slot;
  opt.reposition_from = slot.location;
  opt.timing = leg_timing(slot.start, leg.request_time, reposition->minutes, service->minutes);
  opt.reposition_km = reposition->km;
  opt.service_km = service->km;
  if (opt.timing.dropoff > leg.deadline + kTimeSlack) return std::nullopt;

  Minutes busy_until = opt.timing.dropoff;
  if (slot.end_location && *slot.end_location != leg.destination) {
    const auto back = move(ctx, spec, leg.destination, *slot.end_location, hour_of(opt.timing.dropoff));
    if (!back) return std::nullopt;
    opt.return_to = *slot.end_location;
    opt.return_km = back->km;
    opt.return_end = opt.timing.dropoff + back->minutes;
    busy_until = opt.return_end;
  }
  if (busy_until > slot.end + kTimeSlack) return std::nullopt;

  const LegCost billed = score_distance(spec, opt.reposition_km + opt.service_km + opt.return_km);
  opt.cost = {opt.timing.waiting, opt.timing.travel, billed.energy, billed.operating};
  opt.z = request_objective(opt.cost, ctx.weights, ctx.norms);
  return opt;
}

LegAssignment assignment_from(const Fleet& fleet, const SlotOption& opt, const LegRequest& leg) {
  LegAssignment a;
  a.vehicle = opt.vehicle;
  a.vehicle_id = fleet.vehicle(opt.vehicle).id;
  a.mode = leg.mode;
  a.origin = leg.origin;
  a.destination = leg.destination;
  a.reposition_from = opt.reposition_from;
  a.request_time = leg.request_time;
  a.reposition_start = opt.timing.reposition_start;
  a.pickup = opt.timing.pickup;
  a.dropoff = opt.timing.dropoff;
  a.consolidated = opt.consolidation;
  a.timing_case = opt.timing.timing_case;
  a.cost = opt.cost;
  a.reposition_km = opt.reposition_km;
  a.service_km = opt.service_km;
  a.return_km = opt.return_km;
  a.return_to = opt.return_to;
  a.return_end = opt.return_end;
  return a;
}

}  // namespace

void ObjectiveWeights::check() const {
  if (!(time >= 0.0) || !(cost >= 0.0) || !(time + cost > 0.0)) {
    throw ConfigError("objective weights must be nonnegative with a positive sum");
  }
}

NormalizationConstants NormalizationConstants::for_scenario(const Network& network, const SpecSet& specs,
                                                            Minutes horizon_length) {
  const double worst_km = 3.0 * 2.0 * network.air_diameter_km();
  NormalizationConstants n;
  n.time_denominator = horizon_length;
  n.energy_denominator = specs.max_energy_cost_per_km() * worst_km;
  n.operating_denominator = specs.max_op_cost_per_km() * worst_km;
  if (!(n.time_denominator > 0.0) || !(n.energy_denominator > 0.0) || !(n.operating_denominator > 0.0)) {
    throw ConfigError("normalization constants must be strictly positive");
  }
  return n;
}

double request_objective(const LegCost& totals, const ObjectiveWeights& weights,
                         const NormalizationConstants& norms) {
  return weights.time * (totals.waiting + totals.travel) / norms.time_denominator +
         weights.cost * (totals.energy / norms.energy_denominator + totals.operating / norms.operating_denominator);
}

LegTiming leg_timing(Minutes slot_start, Minutes request_time, Minutes reposition_minutes,
                     Minutes service_minutes) {
  LegTiming t;
  if (request_time <= slot_start) {
    t.timing_case = TimingCase::vehicle_free_after_request;
  } else if (reposition_minutes > request_time - slot_start) {
    t.timing_case = TimingCase::late_reposition;
  } else {
    t.timing_case = TimingCase::early_reposition;
  }
  if (t.timing_case == TimingCase::early_reposition) {
    t.reposition_start = request_time - reposition_minutes;
    t.pickup = request_time;
    t.waiting = 0.0;
  } else {
    t.reposition_start = slot_start;
    t.pickup = slot_start + reposition_minutes;
    t.waiting = slot_start + reposition_minutes - request_time;
  }
  t.dropoff = t.pickup + service_minutes;
  t.travel = reposition_minutes + service_minutes;
  return t;
}

LegTiming consolidation_timing(Minutes request_time, Minutes scheduled_pickup, Minutes scheduled_dropoff) {
  LegTiming t;
  t.timing_case = TimingCase::consolidation;
  t.reposition_start = scheduled_pickup;
  t.pickup = scheduled_pickup;
  t.dropoff = scheduled_dropoff;
  t.waiting = scheduled_pickup - request_time;
  t.travel = scheduled_dropoff - scheduled_pickup;
  return t;
}

LegCost score_distance(const VehicleSpec& spec, double km) {
  LegCost c;
  c.energy = km * spec.energy_cost_per_km;
  c.operating = km * spec.op_cost_per_km;
  return c;
}

std::vector<SlotOption> eligible_slots(const Fleet& fleet, const DispatchContext& ctx, const LegRequest& leg,
                                       bool allow_consolidation) {
  std::vector<SlotOption> out;
  for (std::size_t v = 0; v < fleet.size(); ++v) {
    const Vehicle& vehicle = fleet.vehicle(v);
    if (vehicle.mode() != leg.mode || !vehicle.spec.carries(leg.kind)) continue;

    for (const FreeSlot& slot : fleet.free_slots(v, leg.request_time)) {
      if (auto opt = evaluate_free_slot(fleet, ctx, v, slot, leg)) out.push_back(std::move(*opt));
    }

    if (!allow_consolidation) continue;
    for (const ConsolidationMatch& m :
         fleet.find_consolidation_slots(v, leg.origin, leg.destination, leg.units, leg.kind)) {
      const ScheduledLeg& scheduled = vehicle.timeline.legs()[m.leg];
      if (scheduled.pickup + kTimeSlack < leg.request_time) continue;
      if (scheduled.dropoff > leg.deadline + kTimeSlack) continue;
      SlotOption opt;
      opt.vehicle = v;
      opt.consolidation = true;
      opt.leg_position = m.leg;
      opt.reposition_from = scheduled.reposition_from;
      opt.timing = consolidation_timing(leg.request_time, scheduled.pickup, scheduled.dropoff);
      opt.timing.reposition_start = scheduled.reposition_start;
      opt.cost = {opt.timing.waiting, opt.timing.travel, 0.0, 0.0};
      opt.z = request_objective(opt.cost, ctx.weights, ctx.norms);
      out.push_back(std::move(opt));
    }
  }
  return out;
}

const SlotOption& best_slot(std::span<const SlotOption> options, const Fleet& fleet) {
  if (options.empty()) throw std::logic_error("best_slot: no options");
  const SlotOption* best = &options.front();
  for (const SlotOption& o : options.subspan(1)) {
    if (!nearly_equal(o.z, best->z)) {
      if (o.z < best->z) best = &o;
      continue;
    }
    if (o.timing.dropoff != best->timing.dropoff) {
      if (o.timing.dropoff < best->timing.dropoff) best = &o;
      continue;
    }
    if (fleet.vehicle(o.vehicle).id < fleet.vehicle(best->vehicle).id) best = &o;
  }
  return *best;
}

AssignedLeg assign_leg(Fleet& fleet, const DispatchContext& ctx, const SlotOption& option, const LegRequest& leg) {
  AssignedLeg out;
  out.assignment = assignment_from(fleet, option, leg);
  if (option.consolidation) {
    out.token = fleet.commit_consolidation(option.vehicle, option.leg_position, leg.request_id, leg.kind, leg.units);
    return out;
  }
  const VehicleSpec& spec = fleet.vehicle(option.vehicle).spec;
  const LegCost billed = score_distance(spec, option.reposition_km + option.service_km + option.return_km);
  ScheduledLeg s;
  s.requests = {leg.request_id};
  s.payloads = {leg.kind};
  s.reposition_from = option.reposition_from;
  s.origin = leg.origin;
  s.destination = leg.destination;
  s.reposition_start = option.timing.reposition_start;
  s.pickup = option.timing.pickup;
  s.dropoff = option.timing.dropoff;
  s.return_to = option.return_to;
  s.return_end = option.return_end;
  s.occupied_units = leg.units;
  s.reposition_km = option.reposition_km;
  s.service_km = option.service_km;
  s.return_km = option.return_km;
  s.energy_cost = billed.energy;
  s.operating_cost = billed.operating;
  out.token = fleet.commit(option.vehicle, s, *ctx.network);
  return out;
}

std::optional<RouteEvaluation> evaluate_route(Fleet& fleet, const DispatchContext& ctx, const Request& request,
                                              const CandidateRoute& route, bool allow_consolidation) {
  RouteEvaluation eval;
  Minutes request_time = request.ready;
  for (const RouteLeg& leg : route.legs) {
    const ResolvedLeg ends = resolve(*ctx.network, leg);
    LegRequest lr;
    lr.request_id = request.id;
    lr.kind = request.kind;
    lr.units = request.units;
    lr.mode = leg.mode;
    lr.origin = ends.origin;
    lr.destination = ends.destination;
    lr.request_time = request_time;
    lr.deadline = request.deadline;

    const auto options = eligible_slots(fleet, ctx, lr, allow_consolidation);
    bool assigned = false;
    if (!options.empty()) {
      try {
        AssignedLeg a = assign_leg(fleet, ctx, best_slot(options, fleet), lr);
        request_time = a.assignment.dropoff;
        eval.totals += a.assignment.cost;
        eval.legs.push_back(std::move(a.assignment));
        eval.tokens.push_back(a.token);
        assigned = true;
      } catch (const CommitRejected&) {
        assigned = false;
      }
    }
    if (!assigned) {
      rollback_route(fleet, eval);
      return std::nullopt;
    }
  }
  eval.z = request_objective(eval.totals, ctx.weights, ctx.norms);
  return eval;
}

void rollback_route(Fleet& fleet, const RouteEvaluation& evaluation) {
  for (auto it = evaluation.tokens.rbegin(); it != evaluation.tokens.rend(); ++it) fleet.rollback(*it);
}

bool better_plan(const DispatchPlan& a, const DispatchPlan& b) {
  if (!nearly_equal(a.z, b.z)) return a.z < b.z;
  if (a.legs.size() != b.legs.size()) return a.legs.size() < b.legs.size();
  if (a.final_dropoff() != b.final_dropoff()) return a.final_dropoff() < b.final_dropoff();
  for (std::size_t i = 0; i < a.legs.size(); ++i) {
    if (a.legs[i].vehicle_id != b.legs[i].vehicle_id) return a.legs[i].vehicle_id < b.legs[i].vehicle_id;
  }
  return false;
}

std::optional<DispatchPlan> dispatch_among(const Request& request, std::span<const CandidateRoute> candidates,
                                           Fleet& fleet, const DispatchContext& ctx, const DispatchOptions& options) {
  std::optional<DispatchPlan> best;
  for (const CandidateRoute& route : candidates) {
    auto eval = evaluate_route(fleet, ctx, request, route, options.allow_consolidation);
    if (!eval) continue;
    DispatchPlan plan{request.id, route, eval->legs, eval->totals, eval->z};
    rollback_route(fleet, *eval);
    if (!best || better_plan(plan, *best)) best = std::move(plan);
  }
  if (best) {
    // The fleet is back in its initial state, so re-running the winner
    // reproduces the same assignment.
    auto final_eval = evaluate_route(fleet, ctx, request, best->route, options.allow_consolidation);
    if (!final_eval || final_eval->legs != best->legs) {
      throw std::logic_error("dispatch: re-evaluating the chosen route diverged");
    }
  }
  fleet.seal();
  return best;
}

FleetCounts counts_of(const Fleet& fleet) {
  return {fleet.count(Mode::ambulance), fleet.count(Mode::evtol), fleet.count(Mode::uav)};
}

std::vector<CandidateRoute> multimodal_candidates(const Request& request, const Fleet& fleet,
                                                  const DispatchContext& ctx) {
  const auto patterns = enumerate_patterns(*ctx.network, request);
  const auto all = enumerate_candidates(patterns);
  return feasible_candidates(*ctx.network, *ctx.table, ctx.specs, counts_of(fleet), request, all);
}

std::optional<DispatchPlan> dispatch_request(const Request& request, Fleet& fleet, const DispatchContext& ctx) {
  const auto candidates = multimodal_candidates(request, fleet, ctx);
  return dispatch_among(request, candidates, fleet, ctx, {.allow_consolidation = true});
}

}  // namespace meddispatch
