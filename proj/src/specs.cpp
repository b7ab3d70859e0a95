#include "meddispatch/specs.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace meddispatch {

namespace {

constexpr std::uint8_t bit(PayloadKind k) { return static_cast<std::uint8_t>(1U << index_of(k)); }
constexpr std::uint8_t bit(NodeKind k) { return static_cast<std::uint8_t>(1U << static_cast<int>(k)); }

constexpr std::uint8_t kAllPayloadBits =
    bit(PayloadKind::patient) | bit(PayloadKind::organ) | bit(PayloadKind::supply);
constexpr std::uint8_t kAllNodeBits = bit(NodeKind::hospital) | bit(NodeKind::vertiport);

}  // namespace

VehicleSpec default_spec(Mode mode, int ambulance_capacity) {
  VehicleSpec s;
  s.mode = mode;
  switch (mode) {
    case Mode::ambulance:
      s.capacity = ambulance_capacity;
      s.cruise_kmh = 0.0;
      s.range_km = kUnbounded;
      s.op_cost_per_km = 0.33;
      s.energy_cost_per_km = 0.29;
      s.payload_mask = kAllPayloadBits;
      s.node_kind_mask = kAllNodeBits;
      break;
    case Mode::evtol:
      s.capacity = 4;
      s.cruise_kmh = 322.0;
      s.range_km = 161.0;
      s.op_cost_per_km = 1.81;
      s.energy_cost_per_km = 0.32;
      s.payload_mask = kAllPayloadBits;
      s.node_kind_mask = bit(NodeKind::vertiport);
      break;
    case Mode::uav:
      s.capacity = 1;
      s.cruise_kmh = 112.0;
      s.range_km = 38.0;
      s.op_cost_per_km = 0.35;
      s.energy_cost_per_km = 0.0023;
      s.payload_mask = bit(PayloadKind::organ) | bit(PayloadKind::supply);
      s.node_kind_mask = kAllNodeBits;
      break;
  }
  return s;
}

void check_spec(const VehicleSpec& s) {
  const std::string who(to_string(s.mode));
  if (s.capacity < 1) throw ConfigError(who + ": capacity must be >= 1");
  if (!(s.op_cost_per_km >= 0.0) || !(s.energy_cost_per_km >= 0.0)) {
    throw ConfigError(who + ": per-km costs must be nonnegative");
  }
  if (!(s.range_km > 0.0)) throw ConfigError(who + ": range must be positive");
  if (is_air(s.mode) && !(s.cruise_kmh > 0.0 && std::isfinite(s.cruise_kmh))) {
    throw ConfigError(who + ": cruise speed must be positive");
  }
  if (s.mode == Mode::uav && s.carries(PayloadKind::patient)) {
    throw ConfigError("uav: patients are not an allowed payload");
  }
  if (s.mode == Mode::evtol && s.node_kind_mask != bit(NodeKind::vertiport)) {
    throw ConfigError("evtol: allowed node kinds must be {vertiport}");
  }
  if (s.mode != Mode::evtol && s.node_kind_mask != kAllNodeBits) {
    throw ConfigError(who + ": allowed node kinds must be {hospital, vertiport}");
  }
}

SpecSet::SpecSet() {
  for (Mode m : kAllModes) specs_[index_of(m)] = default_spec(m);
}

void SpecSet::set(const VehicleSpec& spec) {
  check_spec(spec);
  specs_[index_of(spec.mode)] = spec;
}

double SpecSet::max_op_cost_per_km() const {
  return std::max({specs_[0].op_cost_per_km, specs_[1].op_cost_per_km, specs_[2].op_cost_per_km});
}

double SpecSet::max_energy_cost_per_km() const {
  return std::max({specs_[0].energy_cost_per_km, specs_[1].energy_cost_per_km,
                   specs_[2].energy_cost_per_km});
}

}  // namespace meddispatch
