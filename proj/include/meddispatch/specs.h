#pragma once

#include <array>
#include <cstdint>

#include "meddispatch/core.h"

namespace meddispatch {

struct VehicleSpec {
  Mode mode = Mode::ambulance;
  int capacity = 1;            // payload units
  double cruise_kmh = 0.0;     // unused for ambulances (ground times come from data)
  double range_km = kUnbounded;
  double op_cost_per_km = 0.0;      // USD
  double energy_cost_per_km = 0.0;  // USD
  std::uint8_t payload_mask = 0;    // bit per PayloadKind
  std::uint8_t node_kind_mask = 0;  // bit per NodeKind

  bool carries(PayloadKind k) const { return (payload_mask >> index_of(k)) & 1U; }
  bool lands_at(NodeKind k) const { return (node_kind_mask >> static_cast<int>(k)) & 1U; }

  friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

inline constexpr int kDefaultAmbulanceCapacity = 2;

// Published defaults: Zipline P2 class UAV, Joby S4 class eVTOL, and a
// ground ambulance whose capacity is a configurable assumption.
VehicleSpec default_spec(Mode mode, int ambulance_capacity = kDefaultAmbulanceCapacity);

// Throws ConfigError when a spec breaks a per-mode rule (UAVs never carry
// patients, eVTOLs use vertiports only, nonnegative costs, capacity >= 1).
void check_spec(const VehicleSpec& spec);

// One spec per mode.
class SpecSet {
 public:
  SpecSet();  // defaults
  const VehicleSpec& operator[](Mode m) const { return specs_[index_of(m)]; }
  void set(const VehicleSpec& spec);  // validates

  double max_op_cost_per_km() const;
  double max_energy_cost_per_km() const;

  friend bool operator==(const SpecSet&, const SpecSet&) = default;

 private:
  std::array<VehicleSpec, 3> specs_;
};

}  // namespace meddispatch
