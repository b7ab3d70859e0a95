#include <doctest.h>

#include <cmath>
#include <map>

#include "meddispatch/demand.h"
#include "meddispatch/fixtures.h"
#include "test_support.h"

using namespace meddispatch;

namespace {

struct Env {
  FixtureBundle bundle = ohio_fixture();
  TravelTimeTable table = build_travel_time_table(bundle.network, bundle.congestion, bundle.wind, SpecSet{}, 9);
};

}  // namespace

TEST_CASE("generated demand respects every request invariant") {
  const Env env;
  DemandParams p;
  p.request_count = 400;
  const auto reqs = generate_demand(p, env.bundle.network, env.table);
  REQUIRE(reqs.size() == 400);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const Request& r = reqs[i];
    CHECK(r.id == "R" + std::to_string(i + 1));
    CHECK_NOTHROW(check_request(r, env.bundle.network));
    CHECK(r.ready >= 0.0);
    CHECK(r.ready < 360.0);
    CHECK(r.ready == std::floor(r.ready));
    const double ground = *env.table.minutes_at(Mode::ambulance, r.origin, r.destination, r.ready);
    const double buffer = r.deadline - r.ready - ground;
    CHECK(buffer >= 60.0 - 1e-9);
    CHECK(buffer <= 90.0 + 1e-9);
    if (i > 0) CHECK(reqs[i - 1].ready <= r.ready);
  }
}

TEST_CASE("same seed gives the same requests, different seeds differ") {
  const Env env;
  DemandParams p;
  const auto a = generate_demand(p, env.bundle.network, env.table);
  const auto b = generate_demand(p, env.bundle.network, env.table);
  CHECK(a == b);
  p.seed = 2;
  CHECK(generate_demand(p, env.bundle.network, env.table) != a);
}

TEST_CASE("kind mix and hub bias within three standard deviations") {
  const Env env;
  DemandParams p;
  p.request_count = 3000;
  p.seed = 99;
  const auto reqs = generate_demand(p, env.bundle.network, env.table);
  std::map<PayloadKind, int> kinds;
  int hub_touch = 0;
  const NodeIndex hub = env.bundle.network.index_of("MainCampus");
  for (const Request& r : reqs) {
    ++kinds[r.kind];
    if (r.origin == hub || r.destination == hub) ++hub_touch;
  }
  const double n = static_cast<double>(reqs.size());
  for (auto [kind, q] : {std::pair{PayloadKind::patient, 0.4}, {PayloadKind::organ, 0.3}, {PayloadKind::supply, 0.3}}) {
    const double sigma = std::sqrt(n * q * (1 - q));
    CHECK(std::abs(kinds[kind] - n * q) <= 3 * sigma);
  }
  // Uniform over 8 hospitals would touch the hub in about 2/8 of requests.
  CHECK(hub_touch / n > 0.4);
}

TEST_CASE("demand parameter validation") {
  const Env env;
  DemandParams p;
  p.horizon_end = 0.5;
  CHECK_THROWS_AS(generate_demand(p, env.bundle.network, env.table), ConfigError);
  p = {};
  p.kind_mix = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(generate_demand(p, env.bundle.network, env.table), ConfigError);
  p = {};
  p.hub_hospital = "BKL";
  CHECK_THROWS_AS(generate_demand(p, env.bundle.network, env.table), ConfigError);
  p = {};
  p.buffer_min = 100.0;
  CHECK_THROWS_AS(generate_demand(p, env.bundle.network, env.table), ConfigError);
  p = {};
  p.request_count = 0;
  CHECK(generate_demand(p, env.bundle.network, env.table).empty());
}

TEST_CASE("free-flow deadline baseline") {
  const Env env;
  DemandParams p;
  p.baseline = DeadlineBaseline::free_flow;
  p.buffer_min = p.buffer_max = 60.0;
  for (const Request& r : generate_demand(p, env.bundle.network, env.table)) {
    CHECK(r.deadline - r.ready == doctest::Approx(*env.table.free_flow_minutes(r.origin, r.destination) + 60.0));
  }
}

TEST_CASE("requests CSV round trip and errors") {
  const Env env;
  const Network& net = env.bundle.network;
  const auto reqs = generate_demand(DemandParams{}, net, env.table);
  CHECK(parse_requests_csv(requests_to_csv(reqs, net), net) == reqs);

  const std::string head = "id,kind,origin,destination,ready_minute,deadline_minute\n";
  auto error_of = [&](const std::string& body) {
    try {
      parse_requests_csv(head + body, net, "r.csv");
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("R1,patient,MainCampus,MainCampus,1,50\n").find("r.csv:2") == 0);
  CHECK(error_of("R1,patient,MainCampus,LorainFHC,1,50\nR1,organ,MainCampus,LorainFHC,1,50\n").find("r.csv:3") ==
        0);
  CHECK(error_of("R1,animal,MainCampus,LorainFHC,1,50\n").find("r.csv:2") == 0);
  CHECK(error_of("R1,patient,MainCampus,BKL,1,50\n").find("hospitals") != std::string::npos);
  CHECK(error_of("R1,patient,MainCampus,LorainFHC,60,50\n").find("deadline") != std::string::npos);
  CHECK(error_of("R1,patient,Nowhere,LorainFHC,1,50\n").find("Nowhere") != std::string::npos);
  CHECK_FALSE(error_of("R1,patient,MainCampus,LorainFHC,1\n").empty());
  CHECK_THROWS_AS(parse_requests_csv("id,kind\n", net), DataError);
}
