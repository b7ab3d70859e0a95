#include "meddispatch/network.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace meddispatch {

namespace {

using nlohmann::json;

constexpr double kDistanceSlackKm = 1e-9;

[[noreturn]] void fail(const std::string& node_id, const std::string& rule) {
  throw DataError("network: node '" + node_id + "': " + rule);
}

}  // namespace

Network Network::build(std::vector<Node> nodes, const std::vector<GroundEdge>& edges,
                       NearestBy nearest_by) {
  Network net;
  net.nearest_by_ = nearest_by;
  net.nodes_ = std::move(nodes);
  const std::size_t n = net.nodes_.size();

  for (NodeIndex i = 0; i < n; ++i) {
    const Node& node = net.nodes_[i];
    if (node.id.empty()) throw DataError("network: node with empty id");
    if (!net.by_id_.emplace(node.id, i).second) fail(node.id, "duplicate id");
    if (!valid_coordinates(node.position)) fail(node.id, "coordinates out of range");
    if (node.kind == NodeKind::vertiport && node.co_located_vertiport) {
      fail(node.id, "a vertiport cannot have co_located_vertiport");
    }
  }

  net.place_.resize(n);
  for (NodeIndex i = 0; i < n; ++i) {
    const Node& node = net.nodes_[i];
    net.place_[i] = i;
    if (node.co_located_vertiport) {
      auto it = net.by_id_.find(*node.co_located_vertiport);
      if (it == net.by_id_.end()) {
        fail(node.id, "co_located_vertiport '" + *node.co_located_vertiport + "' does not exist");
      }
      if (net.nodes_[it->second].kind != NodeKind::vertiport) {
        fail(node.id, "co_located_vertiport '" + *node.co_located_vertiport +
                          "' is not a vertiport");
      }
      net.place_[i] = it->second;
    }
    if (node.kind == NodeKind::hospital) {
      net.hospitals_.push_back(i);
    } else {
      net.vertiports_.push_back(i);
    }
  }
  auto by_name = [&net](NodeIndex a, NodeIndex b) { return net.nodes_[a].id < net.nodes_[b].id; };
  std::sort(net.hospitals_.begin(), net.hospitals_.end(), by_name);
  std::sort(net.vertiports_.begin(), net.vertiports_.end(), by_name);

  net.air_km_.assign(n * n, 0.0);
  for (NodeIndex a = 0; a < n; ++a) {
    for (NodeIndex b = a + 1; b < n; ++b) {
      const double d = haversine_km(net.nodes_[a].position, net.nodes_[b].position);
      net.air_km_[a * n + b] = d;
      net.air_km_[b * n + a] = d;
      net.diameter_km_ = std::max(net.diameter_km_, d);
    }
  }

  net.ground_km_.assign(n * n, std::nan(""));
  std::vector<bool> explicit_entry(n * n, false);
  for (const GroundEdge& e : edges) {
    auto from = net.find(e.from);
    auto to = net.find(e.to);
    if (!from) fail(e.from, "ground edge references unknown node");
    if (!to) fail(e.to, "ground edge references unknown node");
    if (*from == *to) fail(e.from, "ground edge from a node to itself");
    if (!std::isfinite(e.km) || e.km < 0.0) fail(e.from, "ground distance to '" + e.to + "' is not a nonnegative number");
    const double air = net.air_km(*from, *to);
    if (e.km + kDistanceSlackKm * std::max(1.0, air) < air) {
      fail(e.from, "ground distance to '" + e.to + "' is shorter than the great-circle distance");
    }
    net.ground_km_[*from * n + *to] = e.km;
    explicit_entry[*from * n + *to] = true;
  }
  for (NodeIndex a = 0; a < n; ++a) {
    for (NodeIndex b = 0; b < n; ++b) {
      if (!explicit_entry[a * n + b] && explicit_entry[b * n + a]) {
        net.ground_km_[a * n + b] = net.ground_km_[b * n + a];
      }
    }
  }

  net.nearest_.assign(n, n);
  if (!net.vertiports_.empty()) {
    for (NodeIndex h : net.hospitals_) {
      if (net.place_[h] != h) {
        net.nearest_[h] = net.place_[h];
        continue;
      }
      bool reachable = false;
      double best = kUnbounded;
      for (NodeIndex v : net.vertiports_) {
        const auto road = net.ground_km(h, v);
        reachable = reachable || road.has_value();
        double d = net.air_km(h, v);
        if (nearest_by == NearestBy::road) {
          if (!road) continue;
          d = *road;
        }
        // vertiports_ is sorted by id, so strict < keeps the smallest id on ties.
        if (d < best) {
          best = d;
          net.nearest_[h] = v;
        }
      }
      if (!reachable) fail(net.nodes_[h].id, "no vertiport reachable by ground");
    }
  }
  return net;
}

std::optional<NodeIndex> Network::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) throw DataError("unknown node id '" + std::string(id) + "'");
  return *i;
}

std::optional<double> Network::ground_km(NodeIndex a, NodeIndex b) const {
  if (a == b) return 0.0;
  const double d = ground_km_[a * size() + b];
  if (std::isnan(d)) return std::nullopt;
  return d;
}

NodeIndex Network::nearest_vertiport(NodeIndex hospital) const {
  if (vertiports_.empty()) throw ConfigError("network has no vertiports");
  if (kind(hospital) != NodeKind::hospital) {
    throw DataError("nearest_vertiport: '" + id(hospital) + "' is not a hospital");
  }
  return nearest_[hospital];
}

std::optional<NodeIndex> Network::co_located_vertiport(NodeIndex hospital) const {
  if (place_[hospital] == hospital) return std::nullopt;
  return place_[hospital];
}

std::string nearest_vertiport(const Network& network, std::string_view hospital_id) {
  return network.id(network.nearest_vertiport(network.index_of(hospital_id)));
}

Network parse_network_json(std::string_view text, NearestBy nearest_by) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("network: parse error: ") + e.what());
  }
  std::vector<Node> nodes;
  std::vector<GroundEdge> edges;
  try {
    for (const auto& item : doc.at("nodes")) {
      Node node;
      node.id = item.at("id").get<std::string>();
      node.kind = parse_node_kind(item.at("kind").get<std::string>());
      node.position = {item.at("lat").get<double>(), item.at("lon").get<double>()};
      if (auto it = item.find("co_located_vertiport"); it != item.end() && !it->is_null()) {
        node.co_located_vertiport = it->get<std::string>();
      }
      nodes.push_back(std::move(node));
    }
    if (auto it = doc.find("ground_distance_km"); it != doc.end()) {
      for (const auto& item : *it) {
        edges.push_back({item.at("from").get<std::string>(), item.at("to").get<std::string>(),
                         item.at("km").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("network: ") + e.what());
  }
  return Network::build(std::move(nodes), edges, nearest_by);
}

Network load_network(const std::filesystem::path& path, NearestBy nearest_by) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open network file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network_json(buf.str(), nearest_by);
}

std::string network_to_json(const Network& network) {
  json doc;
  doc["schema_version"] = 1;
  json nodes = json::array();
  for (const Node& node : network.nodes()) {
    json item = {{"id", node.id},
                 {"kind", std::string(to_string(node.kind))},
                 {"lat", node.position.lat},
                 {"lon", node.position.lon}};
    if (node.co_located_vertiport) item["co_located_vertiport"] = *node.co_located_vertiport;
    nodes.push_back(std::move(item));
  }
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (NodeIndex a = 0; a < network.size(); ++a) {
    for (NodeIndex b = 0; b < network.size(); ++b) {
      if (a == b) continue;
      if (auto km = network.ground_km(a, b)) {
        edges.push_back({{"from", network.id(a)}, {"to", network.id(b)}, {"km", *km}});
      }
    }
  }
  doc["ground_distance_km"] = std::move(edges);
  return doc.dump(2);
}

void save_network(const Network& network, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write network file " + path.string());
  out << network_to_json(network) << '\n';
}

}  // namespace meddispatch
