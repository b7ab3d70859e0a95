#include <doctest.h>

#include <algorithm>

#include "meddispatch/audit.h"
#include "test_support.h"

using namespace meddispatch;

namespace {

struct Served {
  ScenarioData data = testsupport::ohio_data(11, 50);
  ScenarioReport report = run_scenario(data, {{12, 12, 12}, {1, 1}, Algorithm::m2dh, false});

  std::vector<DispatchPlan> plans() const {
    std::vector<DispatchPlan> out;
    for (const auto& row : report.rows) {
      if (row.plan) out.push_back(*row.plan);
    }
    return out;
  }
  AuditReport audit(const std::vector<DispatchPlan>& p, const std::vector<Request>& reqs) const {
    return audit_plans(data.network, data.specs, reqs, p, report.fleet);
  }
  AuditReport audit(const std::vector<DispatchPlan>& p) const { return audit(p, data.requests); }
  std::size_t index_of_vehicle(Mode m) const {
    const auto& vs = report.fleet.vehicles();
    return static_cast<std::size_t>(
        std::find_if(vs.begin(), vs.end(), [m](const Vehicle& v) { return v.mode() == m; }) - vs.begin());
  }
};

}  // namespace

TEST_CASE("dispatched plans pass the audit") {
  const Served s;
  const auto plans = s.plans();
  REQUIRE(plans.size() > 40);
  const AuditReport a = s.audit(plans);
  CHECK(a.ok());
  CHECK(a.plans_checked == plans.size());
  CHECK(s.report.audit.ok());
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const ScenarioData d = testsupport::ohio_data(seed, 50);
    for (Algorithm alg : {Algorithm::m2dh, Algorithm::baseline, Algorithm::exhaustive}) {
      CHECK(run_scenario(d, {{3, 3, 3}, {5, 1}, alg, false}).audit.ok());
    }
  }
}

TEST_CASE("injected faults are caught") {
  const Served s;
  const auto plans = s.plans();

  SUBCASE("deadline") {
    auto reqs = s.data.requests;
    for (Request& r : reqs) r.deadline = r.ready;
    CHECK(s.audit(plans, reqs).count(AuditRule::deadline) > 0);
  }
  SUBCASE("pickup before ready") {
    auto reqs = s.data.requests;
    for (Request& r : reqs) r.ready += 500;
    CHECK(s.audit(plans, reqs).count(AuditRule::temporal) > 0);
  }
  SUBCASE("continuity") {
    auto bad = plans;
    bad[0].legs[0].origin = bad[0].legs.back().destination;
    CHECK(s.audit(bad).count(AuditRule::continuity) > 0);
  }
  SUBCASE("leg order") {
    auto bad = plans;
    std::swap(bad[0].legs[0].pickup, bad[0].legs[0].dropoff);
    CHECK(s.audit(bad).count(AuditRule::temporal) > 0);
  }
  SUBCASE("vehicle type, payload, node kind and range") {
    auto bad = plans;
    const std::size_t uav = s.index_of_vehicle(Mode::uav);
    auto reqs = s.data.requests;
    const Network& net = s.data.network;
    Request& r = *std::find_if(reqs.begin(), reqs.end(), [&](const Request& x) { return x.id == bad[0].request_id; });
    r.kind = PayloadKind::patient;
    LegAssignment& l = bad[0].legs[0];
    l.vehicle = uav;
    l.vehicle_id = s.report.fleet.vehicle(uav).id;
    l.mode = Mode::ambulance;
    l.origin = net.index_of("LorainFHC");
    l.destination = net.index_of("BoardmanSTAR");
    const AuditReport a = s.audit(bad, reqs);
    CHECK(a.count(AuditRule::vehicle_mode) > 0);
    CHECK(a.count(AuditRule::payload) > 0);
    CHECK(a.count(AuditRule::range) > 0);

    const std::size_t evtol = s.index_of_vehicle(Mode::evtol);
    l.vehicle = evtol;
    l.vehicle_id = s.report.fleet.vehicle(evtol).id;
    CHECK(s.audit(bad, reqs).count(AuditRule::node_kind) > 0);
  }
  SUBCASE("capacity") {
    auto bad = plans;
    for (std::size_t i = 1; i <= 4; ++i) {
      DispatchPlan copy = plans[0];
      copy.request_id = plans[i].request_id;
      bad.push_back(copy);
    }
    CHECK(s.audit(bad).count(AuditRule::capacity) > 0);
  }
  SUBCASE("bookkeeping") {
    auto bad = plans;
    bad[0].request_id = "nobody";
    CHECK(s.audit(bad).count(AuditRule::bookkeeping) > 0);
    bad = plans;
    bad[0].legs[0].vehicle_id = "Ghost";
    CHECK(s.audit(bad).count(AuditRule::bookkeeping) > 0);
    bad = plans;
    bad[0].legs[0].pickup += 1.0;
    CHECK(s.audit(bad).count(AuditRule::bookkeeping) > 0);
    bad = plans;
    bad[0].legs.clear();
    CHECK(s.audit(bad).count(AuditRule::bookkeeping) > 0);
  }
  SUBCASE("chaining") {
    std::vector<Vehicle> vs = s.report.fleet.vehicles();
    const auto busy = std::find_if(vs.begin(), vs.end(), [](const Vehicle& v) { return !v.timeline.empty(); });
    REQUIRE(busy != vs.end());
    busy->initial_location = busy->timeline.legs()[0].reposition_from == 0 ? 1 : 0;
    const Fleet moved(vs, s.report.fleet.horizon_end());
    const AuditReport a = audit_plans(s.data.network, s.data.specs, s.data.requests, plans, moved);
    CHECK(a.count(AuditRule::chaining) > 0);
  }
}

TEST_CASE("rule names") {
  CHECK(to_string(AuditRule::node_kind) == "node-kind");
  CHECK(to_string(AuditRule::vehicle_mode) == "vehicle-mode");
  CHECK(to_string(AuditRule::overlap) == "overlap");
}
