#include "meddispatch/baselines.h"

#include <algorithm>

namespace meddispatch {

std::vector<CandidateRoute> baseline_candidates(const Request& request, const Fleet& fleet,
                                                const DispatchContext& ctx) {
  const Network& net = *ctx.network;
  const NodeIndex o = request.origin;
  const NodeIndex d = request.destination;
  std::vector<CandidateRoute> routes;
  for (Mode m : kAllModes) routes.push_back({{{o, d, m}}, 0});

  if (!net.vertiports().empty()) {
    const NodeIndex vo = net.nearest_vertiport(o);
    const NodeIndex vd = net.nearest_vertiport(d);
    const RouteLeg full[] = {{o, vo, Mode::ambulance}, {vo, vd, Mode::evtol}, {vd, d, Mode::ambulance}};
    CandidateRoute via;
    via.pattern = 1;
    for (const RouteLeg& leg : full) {
      if (net.place(leg.from) != net.place(leg.to)) via.legs.push_back(leg);
    }
    const bool flies = std::any_of(via.legs.begin(), via.legs.end(),
                                   [](const RouteLeg& l) { return l.mode == Mode::evtol; });
    if (flies) routes.push_back(std::move(via));
  }
  return feasible_candidates(net, *ctx.table, ctx.specs, counts_of(fleet), request, routes);
}

std::optional<DispatchPlan> baseline_dispatch(const Request& request, Fleet& fleet, const DispatchContext& ctx) {
  const auto candidates = baseline_candidates(request, fleet, ctx);
  return dispatch_among(request, candidates, fleet, ctx, {.allow_consolidation = false});
}

std::vector<CandidateRoute> exhaustive_candidates(const Request& request, const Fleet& fleet,
                                                  const DispatchContext& ctx) {
  const auto patterns = exhaustive_patterns(*ctx.network, request);
  const auto all = enumerate_candidates(patterns);
  return feasible_candidates(*ctx.network, *ctx.table, ctx.specs, counts_of(fleet), request, all);
}

std::optional<DispatchPlan> exhaustive_dispatch(const Request& request, Fleet& fleet, const DispatchContext& ctx) {
  const auto candidates = exhaustive_candidates(request, fleet, ctx);
  return dispatch_among(request, candidates, fleet, ctx, {.allow_consolidation = true});
}

GapRecord make_gap_record(std::string request_id, double z_m2dh, double z_oracle) {
  GapRecord r{std::move(request_id), z_m2dh, z_oracle, 0.0, false};
  if (z_oracle == 0.0) {
    r.infinite = z_m2dh != 0.0;
  } else {
    r.gap_pct = 100.0 * (z_m2dh - z_oracle) / z_oracle;
  }
  return r;
}

GapSummary optimality_gap(std::vector<GapRecord> records) {
  GapSummary s;
  s.records = std::move(records);
  double sum = 0.0;
  std::size_t finite = 0;
  for (const GapRecord& r : s.records) {
    if (r.infinite) {
      s.infinite.push_back(r.request_id);
      continue;
    }
    sum += r.gap_pct;
    s.maximum_pct = finite == 0 ? r.gap_pct : std::max(s.maximum_pct, r.gap_pct);
    s.minimum_pct = finite == 0 ? r.gap_pct : std::min(s.minimum_pct, r.gap_pct);
    ++finite;
  }
  if (finite > 0) s.average_pct = sum / static_cast<double>(finite);
  return s;
}

}  // namespace meddispatch
