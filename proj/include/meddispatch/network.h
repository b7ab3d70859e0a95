#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "meddispatch/core.h"
#include "meddispatch/geo.h"

namespace meddispatch {

struct Node {
  std::string id;
  NodeKind kind = NodeKind::hospital;
  LatLon position;
  // Hospitals only: a vertiport on the hospital grounds.
  std::optional<std::string> co_located_vertiport;

  friend bool operator==(const Node&, const Node&) = default;
};

struct GroundEdge {
  std::string from;
  std::string to;
  double km = 0.0;
};

// How "closest vertiport" is measured when pairing hospitals.
enum class NearestBy { air, road };

// Immutable hospital/vertiport network. Air distances are always great-circle;
// ground distances come from input data and are mirrored when only one
// direction is given.
class Network {
 public:
  // Validates every invariant and throws DataError naming the node and rule.
  static Network build(std::vector<Node> nodes, const std::vector<GroundEdge>& edges,
                       NearestBy nearest_by = NearestBy::air);

  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  const std::vector<Node>& nodes() const { return nodes_; }

  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex index_of(std::string_view id) const;  // throws DataError
  const std::string& id(NodeIndex i) const { return nodes_.at(i).id; }
  NodeKind kind(NodeIndex i) const { return nodes_.at(i).kind; }

  // Sorted by id.
  const std::vector<NodeIndex>& hospitals() const { return hospitals_; }
  const std::vector<NodeIndex>& vertiports() const { return vertiports_; }

  double air_km(NodeIndex a, NodeIndex b) const { return air_km_[a * size() + b]; }
  std::optional<double> ground_km(NodeIndex a, NodeIndex b) const;

  NodeIndex nearest_vertiport(NodeIndex hospital) const;

  // Where an air vehicle lands when serving node `n`: a hospital's
  // co-located vertiport, otherwise the node itself.
  NodeIndex air_endpoint(NodeIndex n) const { return place_[n]; }
  // Physical place used for transfer and continuity checks. Same mapping as
  // air_endpoint: a hospital and its co-located vertiport are one place.
  NodeIndex place(NodeIndex n) const { return place_[n]; }

  std::optional<NodeIndex> co_located_vertiport(NodeIndex hospital) const;

  // Largest great-circle distance between any two nodes.
  double air_diameter_km() const { return diameter_km_; }

  NearestBy nearest_by() const { return nearest_by_; }

 private:
  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeIndex> by_id_;
  std::vector<NodeIndex> hospitals_;
  std::vector<NodeIndex> vertiports_;
  std::vector<double> air_km_;
  std::vector<double> ground_km_;  // NaN when absent
  std::vector<NodeIndex> nearest_;  // indexed by node; meaningful for hospitals
  std::vector<NodeIndex> place_;
  double diameter_km_ = 0.0;
  NearestBy nearest_by_ = NearestBy::air;
};

// Free-function form keyed by ids. Throws ConfigError when the network has
// no vertiports and DataError for an unknown hospital.
std::string nearest_vertiport(const Network& network, std::string_view hospital_id);

Network load_network(const std::filesystem::path& path, NearestBy nearest_by = NearestBy::air);
void save_network(const Network& network, const std::filesystem::path& path);

// Parsing entry point shared by load_network and tests.
Network parse_network_json(std::string_view text, NearestBy nearest_by = NearestBy::air);
std::string network_to_json(const Network& network);

}  // namespace meddispatch
