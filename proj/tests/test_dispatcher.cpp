#include <doctest.h>

#include <algorithm>
#include <limits>

#include "meddispatch/dispatcher.h"
#include "test_support.h"

using namespace meddispatch;
using testsupport::chord_distance_km;
using testsupport::hospital;
using testsupport::make_request;
using testsupport::vertiport;

namespace {

// Two hospitals 0.2 degrees of longitude apart, straight-ish road at 60 km/h.
ScenarioData two_hospitals(std::vector<Request> (*requests)(const Network&)) {
  const FixtureBundle b = testsupport::calm_bundle({hospital("A", 41.0, -81.0), hospital("B", 41.0, -80.8)});
  return scenario_data_from_fixture(b, testsupport::fixture_config("A"), requests(b.network));
}

}  // namespace

TEST_CASE("timing cases") {
  SUBCASE("vehicle frees up after the request") {
    const LegTiming t = leg_timing(10.0, 5.0, 7.0, 30.0);
    CHECK(t.timing_case == TimingCase::vehicle_free_after_request);
    CHECK(t.pickup == 17.0);
    CHECK(t.waiting == 12.0);
    CHECK(t.travel == 37.0);
    CHECK(t.dropoff == 47.0);
  }
  SUBCASE("free before the request but the reposition runs late") {
    const LegTiming t = leg_timing(0.0, 5.0, 20.0, 30.0);
    CHECK(t.timing_case == TimingCase::late_reposition);
    CHECK(t.reposition_start == 0.0);
    CHECK(t.pickup == 20.0);
    CHECK(t.waiting == 15.0);
    CHECK(t.travel == 50.0);
    CHECK(t.dropoff == 50.0);
  }
  SUBCASE("reposition fits exactly in the wait") {
    const LegTiming t = leg_timing(0.0, 20.0, 20.0, 30.0);
    CHECK(t.timing_case == TimingCase::early_reposition);
    CHECK(t.reposition_start == 0.0);
    CHECK(t.pickup == 20.0);
    CHECK(t.waiting == 0.0);
  }
  SUBCASE("reposition starts late enough to arrive on time") {
    const LegTiming t = leg_timing(0.0, 30.0, 10.0, 5.0);
    CHECK(t.timing_case == TimingCase::early_reposition);
    CHECK(t.reposition_start == 20.0);
    CHECK(t.pickup == 30.0);
    CHECK(t.dropoff == 35.0);
    CHECK(t.waiting == 0.0);
    CHECK(t.travel == 15.0);
  }
  SUBCASE("request time equal to slot start") {
    const LegTiming t = leg_timing(12.0, 12.0, 0.0, 8.0);
    CHECK(t.timing_case == TimingCase::vehicle_free_after_request);
    CHECK(t.waiting == 0.0);
  }
  SUBCASE("consolidation keeps the scheduled times") {
    const LegTiming t = consolidation_timing(10.0, 25.0, 70.0);
    CHECK(t.timing_case == TimingCase::consolidation);
    CHECK(t.waiting == 15.0);
    CHECK(t.travel == 45.0);
  }
}

TEST_CASE("property: waiting is never negative and dropoff follows pickup") {
  for (int s = 0; s < 40; s += 3) {
    for (int r = 0; r < 40; r += 4) {
      for (int tau = 0; tau < 30; tau += 5) {
        const LegTiming t = leg_timing(s, r, tau, 9.0);
        CHECK(t.waiting >= 0.0);
        CHECK(t.pickup >= r);
        CHECK(t.pickup >= s + tau);
        CHECK(t.reposition_start >= s);
        CHECK(t.dropoff == t.pickup + 9.0);
      }
    }
  }
}

TEST_CASE("objective on normalized terms") {
  const NormalizationConstants n{300.0, 50.0, 200.0};
  CHECK(request_objective({}, {3, 7}, n) == 0.0);
  const LegCost c{100.0, 200.0, 25.0, 40.0};
  CHECK(request_objective(c, {2, 0}, n) == doctest::Approx(2.0));
  CHECK(request_objective(c, {0, 1}, n) == doctest::Approx(0.5 + 0.2));
  CHECK(request_objective({150.0, 150.0, 50.0, 200.0}, {1, 1}, n) == doctest::Approx(3.0));
  CHECK_THROWS_AS(ObjectiveWeights({0, 0}).check(), ConfigError);
  CHECK_THROWS_AS(ObjectiveWeights({-1, 2}).check(), ConfigError);
}

TEST_CASE("normalization uses the largest rates and the air diameter") {
  const FixtureBundle b = testsupport::calm_bundle({hospital("A", 41.0, -81.0), hospital("B", 41.0, -80.8)});
  const SpecSet specs;
  const auto n = NormalizationConstants::for_scenario(b.network, specs, 540.0);
  const double worst = 6.0 * chord_distance_km({41.0, -81.0}, {41.0, -80.8});
  CHECK(n.time_denominator == 540.0);
  CHECK(n.energy_denominator == doctest::Approx(0.32 * worst).epsilon(1e-9));
  CHECK(n.operating_denominator == doctest::Approx(1.81 * worst).epsilon(1e-9));
}

TEST_CASE("hand-simulated two-hospital plan") {
  const ScenarioData data = two_hospitals([](const Network& net) {
    return std::vector<Request>{make_request(net, "R1", PayloadKind::patient, "A", "B", 10, 200),
                                make_request(net, "R2", PayloadKind::organ, "B", "A", 15, 200)};
  });
  const DispatchContext ctx = testsupport::context(data);
  Fleet fleet = initialize_fleet({2, 0, 0}, data.specs, data.network, data.schedule_end);

  const double km = 1.25 * chord_distance_km({41.0, -81.0}, {41.0, -80.8});
  const double minutes = km;  // 60 km/h
  const double time_den = 540.0, energy_den = 0.32 * 6 * km / 1.25, op_den = 1.81 * 6 * km / 1.25;
  const double expected_z = minutes / time_den + km * 0.29 / energy_den + km * 0.33 / op_den;

  // R1: Ambulance1 waits at A; zero reposition, pickup at the ready time.
  const auto p1 = dispatch_request(data.requests[0], fleet, ctx);
  REQUIRE(p1);
  REQUIRE(p1->legs.size() == 1);
  const LegAssignment& l1 = p1->legs[0];
  CHECK(l1.vehicle_id == "Ambulance1");
  CHECK(l1.timing_case == TimingCase::early_reposition);
  CHECK(l1.pickup == 10.0);
  CHECK(l1.dropoff == doctest::Approx(10.0 + minutes));
  CHECK(l1.cost.waiting == 0.0);
  CHECK(l1.cost.travel == doctest::Approx(minutes));
  CHECK(p1->z == doctest::Approx(expected_z).epsilon(1e-12));

  // R2: Ambulance2 waits at B; Ambulance1 would only reach B later.
  const auto p2 = dispatch_request(data.requests[1], fleet, ctx);
  REQUIRE(p2);
  CHECK(p2->legs[0].vehicle_id == "Ambulance2");
  CHECK(p2->legs[0].pickup == 15.0);
  CHECK(p2->z == doctest::Approx(expected_z).epsilon(1e-12));
  CHECK(fleet.pending() == 0);
  CHECK(fleet.vehicle(0).timeline.legs().size() == 1);
  CHECK(fleet.vehicle(1).timeline.legs().size() == 1);
  CHECK(fleet.check(data.network).empty());
}

TEST_CASE("a busy vehicle is reused through its trailing slot") {
  const ScenarioData data = two_hospitals([](const Network& net) {
    return std::vector<Request>{make_request(net, "R1", PayloadKind::patient, "A", "B", 0, 200),
                                make_request(net, "R2", PayloadKind::patient, "A", "B", 5, 300)};
  });
  const DispatchContext ctx = testsupport::context(data);
  Fleet fleet = initialize_fleet({1, 0, 0}, data.specs, data.network, data.schedule_end);
  const double m = 1.25 * chord_distance_km({41.0, -81.0}, {41.0, -80.8});
  REQUIRE(dispatch_request(data.requests[0], fleet, ctx));
  // Capacity 2 and the scheduled pickup (0) precedes R2's ready time (5),
  // so R2 cannot join; the ambulance drives back empty.
  const auto p = dispatch_request(data.requests[1], fleet, ctx);
  REQUIRE(p);
  const LegAssignment& l = p->legs[0];
  CHECK_FALSE(l.consolidated);
  CHECK(l.timing_case == TimingCase::vehicle_free_after_request);
  CHECK(l.reposition_start == doctest::Approx(m));
  CHECK(l.pickup == doctest::Approx(2 * m));
  CHECK(l.cost.waiting == doctest::Approx(2 * m - 5));
  CHECK(l.reposition_km == doctest::Approx(m));
}

TEST_CASE("identical requests consolidate at zero cost") {
  const ScenarioData data = two_hospitals([](const Network& net) {
    return std::vector<Request>{make_request(net, "R1", PayloadKind::patient, "A", "B", 10, 200),
                                make_request(net, "R2", PayloadKind::supply, "A", "B", 10, 200)};
  });
  const DispatchContext ctx = testsupport::context(data);
  Fleet fleet = initialize_fleet({1, 0, 0}, data.specs, data.network, data.schedule_end);
  const auto p1 = dispatch_request(data.requests[0], fleet, ctx);
  const auto p2 = dispatch_request(data.requests[1], fleet, ctx);
  REQUIRE(p1);
  REQUIRE(p2);
  const LegAssignment& l = p2->legs[0];
  CHECK(l.consolidated);
  CHECK(l.timing_case == TimingCase::consolidation);
  CHECK(l.cost.energy == 0.0);
  CHECK(l.cost.operating == 0.0);
  CHECK(l.pickup == p1->legs[0].pickup);
  CHECK(l.dropoff == p1->legs[0].dropoff);
  CHECK(p2->z < p1->z);
  REQUIRE(fleet.vehicle(0).timeline.legs().size() == 1);
  CHECK(fleet.vehicle(0).timeline.legs()[0].occupied_units == 2);
  CHECK(fleet.vehicle(0).timeline.legs()[0].requests == std::vector<std::string>{"R1", "R2"});

  // A third request finds the ambulance full.
  Fleet copy = fleet;
  const Request r3 = make_request(data.network, "R3", PayloadKind::supply, "A", "B", 10, 200);
  const auto p3 = dispatch_request(r3, copy, ctx);
  REQUIRE(p3);
  CHECK_FALSE(p3->legs[0].consolidated);
}

TEST_CASE("flying beats a slow road between co-located sites") {
  const std::vector<Node> nodes = {hospital("H1", 41.0, -81.5, "V1"), hospital("H2", 41.0, -80.3, "V2"),
                                   vertiport("V1", 41.0005, -81.5), vertiport("V2", 41.0005, -80.3)};
  const FixtureBundle b = testsupport::calm_bundle(nodes, 1.4, 30.0);
  const Network& net = b.network;
  const ScenarioData data = scenario_data_from_fixture(
      b, testsupport::fixture_config("H1"),
      std::vector<Request>{make_request(net, "R1", PayloadKind::patient, "H1", "H2", 0, 600)});
  const DispatchContext ctx = testsupport::context(data, {10, 1});
  Fleet fleet = initialize_fleet({1, 1, 0}, data.specs, data.network, data.schedule_end);

  const auto cands = multimodal_candidates(data.requests[0], fleet, ctx);
  CHECK(cands.size() == 2);  // direct ambulance and direct eVTOL
  const auto p = dispatch_request(data.requests[0], fleet, ctx);
  REQUIRE(p);
  REQUIRE(p->legs.size() == 1);
  CHECK(p->legs[0].mode == Mode::evtol);
  CHECK(p->legs[0].origin == net.index_of("V1"));
  CHECK(p->legs[0].destination == net.index_of("V2"));
  CHECK(p->legs[0].dropoff < 60.0);
}

TEST_CASE("patients cannot be served by a UAV-only fleet") {
  const ScenarioData data = two_hospitals([](const Network& net) {
    return std::vector<Request>{make_request(net, "R1", PayloadKind::patient, "A", "B", 10, 200)};
  });
  const DispatchContext ctx = testsupport::context(data);
  Fleet fleet = initialize_fleet({0, 0, 3}, data.specs, data.network, data.schedule_end);
  CHECK(multimodal_candidates(data.requests[0], fleet, ctx).empty());
  CHECK_FALSE(dispatch_request(data.requests[0], fleet, ctx));
  for (const Vehicle& v : fleet.vehicles()) CHECK(v.timeline.empty());
  CHECK(fleet.pending() == 0);
}

TEST_CASE("deadlines that nothing can meet leave the fleet untouched") {
  const ScenarioData data = two_hospitals([](const Network& net) {
    return std::vector<Request>{make_request(net, "R1", PayloadKind::supply, "A", "B", 10, 12)};
  });
  const DispatchContext ctx = testsupport::context(data);
  Fleet fleet = initialize_fleet({2, 0, 2}, data.specs, data.network, data.schedule_end);
  CHECK_FALSE(dispatch_request(data.requests[0], fleet, ctx));
  for (const Vehicle& v : fleet.vehicles()) CHECK(v.timeline.empty());
}

TEST_CASE("property: the chosen plan is the minimum over its candidates") {
  const ScenarioData data = testsupport::ohio_data(3, 40);
  for (const ObjectiveWeights w : {ObjectiveWeights{1, 1}, ObjectiveWeights{10, 1}, ObjectiveWeights{1, 10}}) {
    const DispatchContext ctx = testsupport::context(data, w);
    Fleet fleet = initialize_fleet({4, 4, 4}, data.specs, data.network, data.schedule_end);
    for (const Request& r : data.requests) {
      const auto cands = multimodal_candidates(r, fleet, ctx);
      double best = std::numeric_limits<double>::infinity();
      for (const CandidateRoute& c : cands) {
        Fleet scratch = fleet;
        if (auto e = evaluate_route(scratch, ctx, r, c, true)) best = std::min(best, e->z);
      }
      const std::size_t legs_before = [&] {
        std::size_t n = 0;
        for (const Vehicle& v : fleet.vehicles()) n += v.timeline.legs().size();
        return n;
      }();
      const auto plan = dispatch_request(r, fleet, ctx);
      if (!plan) {
        CHECK(best == std::numeric_limits<double>::infinity());
        continue;
      }
      CHECK(plan->z == doctest::Approx(best).epsilon(1e-12));
      std::size_t added = 0;
      for (const LegAssignment& l : plan->legs) added += l.consolidated ? 0 : 1;
      std::size_t legs_after = 0;
      for (const Vehicle& v : fleet.vehicles()) legs_after += v.timeline.legs().size();
      CHECK(legs_after == legs_before + added);
      CHECK(fleet.pending() == 0);
      CHECK(plan->final_dropoff() <= r.deadline + 1e-9);
    }
    CHECK(fleet.check(data.network).empty());
  }
}

TEST_CASE("property: scaling both weights scales z and keeps every plan") {
  const ScenarioData data = testsupport::ohio_data(5, 30);
  auto run = [&](ObjectiveWeights w) {
    const DispatchContext ctx = testsupport::context(data, w);
    Fleet fleet = initialize_fleet({12, 12, 12}, data.specs, data.network, data.schedule_end);
    std::vector<std::optional<DispatchPlan>> out;
    for (const Request& r : data.requests) out.push_back(dispatch_request(r, fleet, ctx));
    return out;
  };
  for (const ObjectiveWeights base : {ObjectiveWeights{1, 1}, ObjectiveWeights{5, 1}, ObjectiveWeights{1, 2}}) {
    const auto ref = run(base);
    for (double k : {2.0, 0.5, 4.0}) {
      const auto scaled = run({base.time * k, base.cost * k});
      REQUIRE(scaled.size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) {
        REQUIRE(scaled[i].has_value() == ref[i].has_value());
        if (!ref[i]) continue;
        CHECK(scaled[i]->legs == ref[i]->legs);
        CHECK(scaled[i]->z == doctest::Approx(k * ref[i]->z).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("plan ordering") {
  DispatchPlan a, b;
  a.legs.resize(1);
  b.legs.resize(2);
  a.z = b.z = 1.0;
  CHECK(better_plan(a, b));
  CHECK_FALSE(better_plan(b, a));
  b.legs.resize(1);
  a.legs[0].dropoff = 5;
  b.legs[0].dropoff = 6;
  CHECK(better_plan(a, b));
  b.legs[0].dropoff = 5;
  a.legs[0].vehicle_id = "UAV1";
  b.legs[0].vehicle_id = "UAV2";
  CHECK(better_plan(a, b));
  CHECK_FALSE(better_plan(a, a));
  b.z = 0.5;
  CHECK(better_plan(b, a));
}
