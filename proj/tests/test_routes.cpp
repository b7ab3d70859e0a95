#include <doctest.h>

#include <algorithm>
#include <set>

#include "meddispatch/routes.h"
#include "test_support.h"

using namespace meddispatch;
using testsupport::make_request;

namespace {

struct Plain {
  FixtureBundle bundle = ohio_fixture({}, false);
  TravelTimeTable table = build_travel_time_table(bundle.network, bundle.congestion, bundle.wind, SpecSet{}, 9);
};

std::size_t count_with_legs(const std::vector<CandidateRoute>& cs, std::size_t legs) {
  return static_cast<std::size_t>(
      std::count_if(cs.begin(), cs.end(), [&](const CandidateRoute& c) { return c.legs.size() == legs; }));
}

}  // namespace

TEST_CASE("distinct nearest vertiports give 48 candidates") {
  const Plain p;
  const Network& net = p.bundle.network;
  const Request r = make_request(net, "R1", PayloadKind::supply, "LorainFHC", "BoardmanSTAR", 0, 300);
  const auto patterns = enumerate_patterns(net, r);
  REQUIRE(patterns.size() == 4);
  const NodeIndex o = net.index_of("LorainFHC"), d = net.index_of("BoardmanSTAR");
  const NodeIndex lpr = net.index_of("LPR"), yng = net.index_of("YNG");
  CHECK(patterns[0].nodes == std::vector<NodeIndex>{o, d});
  CHECK(patterns[1].nodes == std::vector<NodeIndex>{o, lpr, d});
  CHECK(patterns[2].nodes == std::vector<NodeIndex>{o, yng, d});
  CHECK(patterns[3].nodes == std::vector<NodeIndex>{o, lpr, yng, d});

  const auto cands = enumerate_candidates(patterns);
  CHECK(cands.size() == 48);
  CHECK(count_with_legs(cands, 1) == 3);
  CHECK(count_with_legs(cands, 2) == 18);
  CHECK(count_with_legs(cands, 3) == 27);
  std::set<std::vector<std::tuple<NodeIndex, NodeIndex, Mode>>> unique;
  for (const auto& c : cands) {
    std::vector<std::tuple<NodeIndex, NodeIndex, Mode>> key;
    for (const auto& l : c.legs) key.emplace_back(l.from, l.to, l.mode);
    unique.insert(key);
  }
  CHECK(unique.size() == 48);
}

TEST_CASE("a co-located origin collapses onto fewer patterns") {
  const FixtureBundle b = ohio_fixture();
  const Network& net = b.network;
  const Request r = make_request(net, "R1", PayloadKind::supply, "MainCampus", "BoardmanSTAR", 0, 300);
  const auto patterns = enumerate_patterns(net, r);
  const NodeIndex o = net.index_of("MainCampus"), d = net.index_of("BoardmanSTAR"), yng = net.index_of("YNG");
  REQUIRE(patterns.size() == 2);
  CHECK(patterns[0].nodes == std::vector<NodeIndex>{o, d});
  CHECK(patterns[1].nodes == std::vector<NodeIndex>{o, yng, d});
  CHECK(enumerate_candidates(patterns).size() == 3 + 9);

  // Flights touching MainCampus use BKL.
  const ResolvedLeg air = resolve(net, {o, yng, Mode::evtol});
  CHECK(air.origin == net.index_of("BKL"));
  CHECK(air.destination == yng);
  const ResolvedLeg road = resolve(net, {o, yng, Mode::ambulance});
  CHECK(road.origin == o);
}

TEST_CASE("collapse merges same-place neighbours and keeps endpoints") {
  const FixtureBundle b = ohio_fixture();
  const Network& net = b.network;
  const NodeIndex m = net.index_of("MainCampus"), bkl = net.index_of("BKL"), cak = net.index_of("CAK"),
                  a = net.index_of("AkronGeneral");
  CHECK(collapse(net, {{m, bkl, cak, a}}).nodes == std::vector<NodeIndex>{m, cak, a});
  CHECK(collapse(net, {{a, cak, cak, m}}).nodes == std::vector<NodeIndex>{a, cak, m});
  CHECK(collapse(net, {{a, cak, bkl, m}}).nodes == std::vector<NodeIndex>{a, cak, m});
  CHECK(collapse(net, {{a, m}}).nodes == std::vector<NodeIndex>{a, m});
}

TEST_CASE("exhaustive patterns over five vertiports") {
  const Plain p;
  const Network& net = p.bundle.network;
  const Request r = make_request(net, "R1", PayloadKind::organ, "LorainFHC", "BoardmanSTAR", 0, 300);
  const auto raw = exhaustive_patterns(net, r, false);
  CHECK(raw.size() == 1 + 5 + 5 * 4);
  for (const auto& pat : raw) {
    CHECK(pat.nodes.front() == r.origin);
    CHECK(pat.nodes.back() == r.destination);
    for (std::size_t i = 1; i + 1 < pat.nodes.size(); ++i) {
      CHECK(net.kind(pat.nodes[i]) == NodeKind::vertiport);
      CHECK(pat.nodes[i] != pat.nodes[i - 1]);
    }
  }
  // Nearest-vertiport patterns are a subset.
  for (const auto& pat : enumerate_patterns(net, r)) {
    CHECK(std::find(raw.begin(), raw.end(), pat) != raw.end());
  }
  // No co-location on this network, so collapsing changes nothing.
  CHECK(exhaustive_patterns(net, r, true) == raw);

  const FixtureBundle co = ohio_fixture();
  const Request r2 = make_request(co.network, "R2", PayloadKind::organ, "MainCampus", "BoardmanSTAR", 0, 300);
  const auto collapsed = exhaustive_patterns(co.network, r2, true);
  CHECK(collapsed.size() < 26);
  CHECK(std::set<std::vector<NodeIndex>>([&] {
          std::set<std::vector<NodeIndex>> s;
          for (const auto& x : collapsed) s.insert(x.nodes);
          return s;
        }()).size() == collapsed.size());
}

TEST_CASE("leg validity rules") {
  const Plain p;
  const Network& net = p.bundle.network;
  const SpecSet specs;
  const NodeIndex lor = net.index_of("LorainFHC"), ely = net.index_of("ElyriaFHC"), lpr = net.index_of("LPR"),
                  yng = net.index_of("YNG"), bdm = net.index_of("BoardmanSTAR");
  auto check = [&](RouteLeg leg, PayloadKind kind, int vehicles = 1) {
    return validate_leg(net, leg, specs[leg.mode], kind, p.table, 0, vehicles);
  };
  CHECK(check({lor, bdm, Mode::ambulance}, PayloadKind::patient) == LegViolation::none);
  CHECK(check({lor, ely, Mode::uav}, PayloadKind::patient) == LegViolation::payload);
  CHECK(check({lor, ely, Mode::uav}, PayloadKind::organ) == LegViolation::none);
  CHECK(check({lor, bdm, Mode::evtol}, PayloadKind::organ) == LegViolation::node_kind);
  CHECK(check({lor, lpr, Mode::evtol}, PayloadKind::organ) == LegViolation::node_kind);
  CHECK(check({lpr, yng, Mode::evtol}, PayloadKind::patient) == LegViolation::none);
  CHECK(check({lor, bdm, Mode::uav}, PayloadKind::supply) == LegViolation::range);
  CHECK(check({lor, ely, Mode::uav}, PayloadKind::supply, 0) == LegViolation::no_vehicle);

  auto bundle = testsupport::calm_bundle({testsupport::hospital("A", 41.0, -81.0),
                                          testsupport::hospital("B", 41.0, -80.9)});
  bundle.wind[0].east_kmh = 60.0;  // A, hour 0
  TableOptions opts;
  opts.air.max_wind_kmh = 40.0;
  const auto grounded = build_travel_time_table(bundle.network, bundle.congestion, bundle.wind, specs, 9, opts);
  const RouteLeg ab{0, 1, Mode::uav};
  CHECK(validate_leg(bundle.network, ab, specs[Mode::uav], PayloadKind::supply, grounded, 0, 1) ==
        LegViolation::weather);
  CHECK(validate_leg(bundle.network, ab, specs[Mode::uav], PayloadKind::supply, grounded, 1, 1) ==
        LegViolation::none);
}

TEST_CASE("feasible candidates keep only valid routes") {
  const Plain p;
  const Network& net = p.bundle.network;
  const SpecSet specs;
  const Request patient = make_request(net, "R1", PayloadKind::patient, "LorainFHC", "BoardmanSTAR", 0, 300);
  const auto all = enumerate_candidates(enumerate_patterns(net, patient));
  const auto ok = feasible_candidates(net, p.table, specs, {12, 12, 12}, patient, all);
  for (const auto& c : ok) {
    for (const auto& l : c.legs) {
      CHECK(l.mode != Mode::uav);
      if (l.mode == Mode::evtol) {
        CHECK(net.kind(l.from) == NodeKind::vertiport);
        CHECK(net.kind(l.to) == NodeKind::vertiport);
      }
    }
  }
  // All-ambulance over each of the four patterns, plus ambulance-eVTOL-ambulance.
  CHECK(ok.size() == 5);
  CHECK(feasible_candidates(net, p.table, specs, {12, 0, 0}, patient, all).size() == 4);
  CHECK(feasible_candidates(net, p.table, specs, {0, 0, 12}, patient, all).empty());
}
