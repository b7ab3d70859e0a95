#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meddispatch/dispatcher.h"

namespace meddispatch {

// The four fixed routes of the simple benchmark: direct ambulance, direct
// eVTOL, direct UAV, and ambulance / eVTOL / ambulance via the nearest
// vertiports. Zero-length legs of the last route are dropped, and the route
// disappears when its flight collapses. Only routes whose legs pass
// validate_leg are returned.
std::vector<CandidateRoute> baseline_candidates(const Request& request, const Fleet& fleet,
                                                const DispatchContext& ctx);

// Benchmark dispatch over baseline_candidates, without consolidation.
std::optional<DispatchPlan> baseline_dispatch(const Request& request, Fleet& fleet, const DispatchContext& ctx);

// Every pattern with up to two intermediate vertiports from the whole
// network, with every mode assignment, filtered by leg validity.
std::vector<CandidateRoute> exhaustive_candidates(const Request& request, const Fleet& fleet,
                                                  const DispatchContext& ctx);

// Search-space oracle: same slot scoring and selection as the dispatcher,
// over exhaustive_candidates, with consolidation.
std::optional<DispatchPlan> exhaustive_dispatch(const Request& request, Fleet& fleet, const DispatchContext& ctx);

struct GapRecord {
  std::string request_id;
  double z_m2dh = 0.0;
  double z_oracle = 0.0;
  double gap_pct = 0.0;   // 100 (z_m2dh - z_oracle) / z_oracle; 0 when both are 0
  bool infinite = false;  // oracle z is 0 while the dispatcher's is not
};

GapRecord make_gap_record(std::string request_id, double z_m2dh, double z_oracle);

struct GapSummary {
  std::vector<GapRecord> records;
  double average_pct = 0.0;  // over finite records
  double maximum_pct = 0.0;
  double minimum_pct = 0.0;
  std::vector<std::string> infinite;  // request ids with an undefined ratio
};

GapSummary optimality_gap(std::vector<GapRecord> records);

}  // namespace meddispatch
