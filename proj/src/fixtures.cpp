#include "meddispatch/fixtures.h"

#include <cmath>
#include <random>

namespace meddispatch {

namespace {

Node hospital(std::string id, double lat, double lon, std::optional<std::string> vertiport = std::nullopt) {
  return {std::move(id), NodeKind::hospital, {lat, lon}, std::move(vertiport)};
}

Node vertiport(std::string id, double lat, double lon) {
  return {std::move(id), NodeKind::vertiport, {lat, lon}, std::nullopt};
}

double bump(double x, double centre, double width) {
  const double u = (x - centre) / width;
  return std::exp(-0.5 * u * u);
}

}  // namespace

double congestion_factor(double clock_hour) {
  return 0.55 + 0.6 * bump(clock_hour, 8.0, 1.3) + 0.65 * bump(clock_hour, 17.0, 1.5);
}

std::vector<Node> ohio_nodes(bool co_location) {
  std::vector<Node> nodes = {
      hospital("MainCampus", 41.5029, -81.6214),
      hospital("AkronGeneral", 41.0748, -81.5335),
      hospital("MercyCanton", 40.8105, -81.3917),
      hospital("BoardmanSTAR", 41.0242, -80.6629),
      hospital("LorainFHC", 41.4247, -82.2126),
      hospital("ElyriaFHC", 41.3829, -82.0722),
      hospital("LakewoodFHC", 41.4846, -81.7980),
      hospital("StowFalls", 41.1525, -81.4868),
      vertiport("BKL", 41.5175, -81.6834),
      vertiport("CAK", 40.9161, -81.4422),
      vertiport("YNG", 41.2607, -80.6791),
      vertiport("LPR", 41.3443, -82.1776),
      vertiport("1G3", 41.1514, -81.4151),
  };
  if (co_location) nodes[0].co_located_vertiport = "BKL";
  return nodes;
}

std::vector<Node> single_vertiport_nodes() {
  return {
      hospital("North", 41.60, -81.60),
      hospital("East", 41.45, -81.35),
      hospital("South", 41.25, -81.55),
      hospital("West", 41.42, -81.90),
      hospital("Centre", 41.45, -81.62),
      vertiport("Hub", 41.40, -81.58),
  };
}

std::vector<GroundEdge> synthetic_ground_edges(const std::vector<Node>& nodes, const FixtureOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> detour(options.detour_min, options.detour_max);
  std::vector<GroundEdge> edges;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const double air = haversine_km(nodes[a].position, nodes[b].position);
      edges.push_back({nodes[a].id, nodes[b].id, air * detour(rng)});
    }
  }
  return edges;
}

std::vector<CongestionProfile> synthetic_congestion(const Network& network, const FixtureOptions& options) {
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  std::vector<CongestionProfile> out;
  for (NodeIndex a = 0; a < network.size(); ++a) {
    for (NodeIndex b = 0; b < network.size(); ++b) {
      if (a == b) continue;
      const auto km = network.ground_km(a, b);
      if (!km) continue;
      CongestionProfile p;
      p.origin = network.id(a);
      p.destination = network.id(b);
      p.free_flow_minutes = std::max(*km, 0.5) / options.free_flow_kmh * 60.0;
      p.capacity_vph = options.capacity_vph;
      const double scale = jitter(rng);
      for (int h = 0; h < options.hours; ++h) {
        p.flow_vph.push_back(options.capacity_vph * scale * congestion_factor(options.clock_start_hour + h));
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<WindRecord> synthetic_wind(const Network& network, const FixtureOptions& options) {
  std::mt19937_64 rng(options.seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::uniform_real_distribution<double> speed(options.wind_min_kmh, options.wind_max_kmh);
  std::uniform_real_distribution<double> veer(-30.0, 30.0);
  std::vector<WindRecord> out;
  for (NodeIndex n = 0; n < network.size(); ++n) {
    for (int h = 0; h < options.hours; ++h) {
      if (options.calm) {
        out.push_back({network.id(n), h, 0.0, 0.0});
        continue;
      }
      const double s = speed(rng);
      const double d = std::fmod(options.prevailing_from_deg + veer(rng) + 360.0, 360.0);
      out.push_back(wind_from_meteorological(network.id(n), h, s, d));
    }
  }
  return out;
}

FixtureBundle make_fixture(std::vector<Node> nodes, const FixtureOptions& options) {
  const auto edges = synthetic_ground_edges(nodes, options);
  FixtureBundle b{Network::build(std::move(nodes), edges), {}, {}};
  b.congestion = synthetic_congestion(b.network, options);
  b.wind = synthetic_wind(b.network, options);
  return b;
}

FixtureBundle ohio_fixture(const FixtureOptions& options, bool co_location) {
  return make_fixture(ohio_nodes(co_location), options);
}

FixtureBundle single_vertiport_fixture(const FixtureOptions& options) {
  return make_fixture(single_vertiport_nodes(), options);
}

}  // namespace meddispatch
