#pragma once

#include <span>
#include <string>
#include <vector>

#include "meddispatch/demand.h"
#include "meddispatch/dispatcher.h"
#include "meddispatch/fleet.h"
#include "meddispatch/network.h"
#include "meddispatch/specs.h"

namespace meddispatch {

// Rule families checked by audit_plans.
enum class AuditRule {
  capacity,
  deadline,
  continuity,
  temporal,
  node_kind,
  payload,
  range,
  vehicle_mode,
  overlap,
  chaining,
  bookkeeping,
};

std::string_view to_string(AuditRule r);

struct Violation {
  AuditRule rule = AuditRule::bookkeeping;
  std::string subject;  // request or vehicle id
  std::string detail;
};

struct AuditReport {
  std::vector<Violation> violations;
  std::size_t plans_checked = 0;
  std::size_t legs_checked = 0;

  bool ok() const { return violations.empty(); }
  std::size_t count(AuditRule r) const;
};

// Rechecks emitted plans from their own fields, recomputing air distances
// from coordinates, and then the vehicle timelines they were committed to.
// Shares no code with the dispatcher beyond the data types.
AuditReport audit_plans(const Network& network, const SpecSet& specs, std::span<const Request> requests,
                        std::span<const DispatchPlan> plans, const Fleet& fleet);

}  // namespace meddispatch
