#include "meddispatch/travel_time.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

#include "csv.h"

namespace meddispatch {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

std::string pair_name(const std::string& o, const std::string& d) { return o + "->" + d; }

}  // namespace

double bpr_minutes(double free_flow_minutes, double flow_vph, double capacity_vph, double alpha,
                   double beta) {
  if (!(capacity_vph > 0.0)) throw std::domain_error("bpr_minutes: capacity must be positive");
  if (flow_vph == 0.0) return free_flow_minutes;
  return free_flow_minutes * (1.0 + alpha * std::pow(flow_vph / capacity_vph, beta));
}

void check_profile(const CongestionProfile& p, const BprParameters& bpr) {
  const std::string who = "congestion " + pair_name(p.origin, p.destination) + ": ";
  if (!(p.free_flow_minutes > 0.0)) throw DataError(who + "free-flow minutes must be > 0");
  if (!(p.capacity_vph > 0.0)) throw DataError(who + "capacity must be > 0");
  for (double f : p.flow_vph) {
    if (!(f >= 0.0)) throw DataError(who + "flow must be >= 0");
  }
  if (!(bpr.alpha >= 0.0)) throw DataError("bpr alpha must be >= 0");
  if (!(bpr.beta >= 1.0)) throw DataError("bpr beta must be >= 1");
}

WindRecord wind_from_meteorological(std::string node, int hour, double speed_kmh,
                                    double direction_deg) {
  const double rad = direction_deg * kDegToRad;
  WindRecord r;
  r.node = std::move(node);
  r.hour = hour;
  r.east_kmh = -speed_kmh * std::sin(rad);
  r.north_kmh = -speed_kmh * std::cos(rad);
  return r;
}

double effective_airspeed_kmh(double cruise_kmh, double bearing_deg, const WindRecord& at_origin,
                              const WindRecord& at_destination) {
  const double east = 0.5 * (at_origin.east_kmh + at_destination.east_kmh);
  const double north = 0.5 * (at_origin.north_kmh + at_destination.north_kmh);
  const double rad = bearing_deg * kDegToRad;
  return cruise_kmh + east * std::sin(rad) + north * std::cos(rad);
}

WindField::WindField(const Network& network, std::span<const WindRecord> records, int hours)
    : network_(&network), hours_(hours), records_(network.size() * static_cast<std::size_t>(hours)) {
  for (const WindRecord& r : records) {
    const auto node = network.find(r.node);
    if (!node) throw DataError("wind: unknown node '" + r.node + "'");
    if (r.hour < 0) throw DataError("wind: negative hour for node '" + r.node + "'");
    if (!(std::hypot(r.east_kmh, r.north_kmh) < kWindSanityKmh)) {
      throw DataError("wind: speed at '" + r.node + "' hour " + std::to_string(r.hour) +
                      " exceeds the sanity bound");
    }
    if (r.hour >= hours) continue;
    auto& cell = records_[*node * hours + r.hour];
    if (cell) {
      throw DataError("wind: duplicate record for '" + r.node + "' hour " + std::to_string(r.hour));
    }
    cell = r;
  }
}

bool WindField::covers(NodeIndex node, int hour) const {
  if (hour < 0 || hour >= hours_) return false;
  if (records_[node * hours_ + hour]) return true;
  if (network_->kind(node) == NodeKind::hospital && !network_->vertiports().empty()) {
    return records_[network_->nearest_vertiport(node) * hours_ + hour].has_value();
  }
  return false;
}

const WindRecord& WindField::at(NodeIndex node, int hour) const {
  if (hour >= 0 && hour < hours_) {
    if (const auto& own = records_[node * hours_ + hour]) return *own;
    if (network_->kind(node) == NodeKind::hospital && !network_->vertiports().empty()) {
      if (const auto& fallback = records_[network_->nearest_vertiport(node) * hours_ + hour]) {
        return *fallback;
      }
    }
  }
  throw DataError("wind: no record for node '" + network_->id(node) + "' hour " +
                  std::to_string(hour));
}

std::optional<double> air_minutes(const Network& network, const WindField& wind, NodeIndex origin,
                                  NodeIndex destination, int hour, double cruise_kmh,
                                  const AirOptions& options) {
  if (origin == destination) return 0.0;
  const WindRecord& wo = wind.at(origin, hour);
  const WindRecord& wd = wind.at(destination, hour);
  if (options.max_wind_kmh) {
    const double worst = std::max(std::hypot(wo.east_kmh, wo.north_kmh),
                                  std::hypot(wd.east_kmh, wd.north_kmh));
    if (worst > *options.max_wind_kmh) return std::nullopt;
  }
  const auto& a = network.node(origin).position;
  const auto& b = network.node(destination).position;
  const double km = network.air_km(origin, destination);
  if (km == 0.0) return 0.0;
  const double speed = effective_airspeed_kmh(cruise_kmh, initial_bearing_deg(a, b), wo, wd);
  // A headwind equal to cruise can leave rounding residue; treat it as zero.
  if (!(speed > 1e-9 * cruise_kmh)) return std::nullopt;
  return 60.0 * km / speed;
}

TravelTimeTable::TravelTimeTable(std::size_t nodes, int hours)
    : nodes_(nodes),
      hours_(hours),
      minutes_(3 * nodes * nodes * static_cast<std::size_t>(std::max(hours, 0)), kAbsent),
      free_flow_(nodes * nodes, kAbsent) {
  if (hours < 1) throw ConfigError("travel-time table needs at least one hour");
}

int TravelTimeTable::clamp_hour(int hour) const { return std::clamp(hour, 0, hours_ - 1); }

std::size_t TravelTimeTable::slot(Mode mode, NodeIndex o, NodeIndex d, int hour) const {
  return ((index_of(mode) * nodes_ + o) * nodes_ + d) * hours_ + clamp_hour(hour);
}

std::optional<double> TravelTimeTable::minutes(Mode mode, NodeIndex o, NodeIndex d, int hour) const {
  if (o == d) return 0.0;
  const double v = minutes_[slot(mode, o, d, hour)];
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

bool TravelTimeTable::infeasible(Mode mode, NodeIndex o, NodeIndex d, int hour) const {
  if (o == d) return false;
  return std::isinf(minutes_[slot(mode, o, d, hour)]);
}

std::optional<double> TravelTimeTable::free_flow_minutes(NodeIndex o, NodeIndex d) const {
  if (o == d) return 0.0;
  const double v = free_flow_[o * nodes_ + d];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

void TravelTimeTable::set(Mode mode, NodeIndex o, NodeIndex d, int hour, double minutes) {
  if (!(minutes > 0.0) || !std::isfinite(minutes)) {
    throw std::invalid_argument("travel-time entries must be finite and positive");
  }
  minutes_[slot(mode, o, d, hour)] = minutes;
}

void TravelTimeTable::mark_infeasible(Mode mode, NodeIndex o, NodeIndex d, int hour) {
  minutes_[slot(mode, o, d, hour)] = kUnbounded;
}

void TravelTimeTable::set_free_flow(NodeIndex o, NodeIndex d, double minutes) {
  free_flow_[o * nodes_ + d] = minutes;
}

TravelTimeTable build_travel_time_table(const Network& network,
                                        std::span<const CongestionProfile> profiles,
                                        std::span<const WindRecord> wind, const SpecSet& specs,
                                        int hours, const TableOptions& options) {
  const std::size_t n = network.size();
  TravelTimeTable table(n, hours);
  std::vector<std::string> missing;
  auto note_missing = [&missing](std::string what) {
    if (missing.size() < 25) missing.push_back(std::move(what));
  };

  std::vector<const CongestionProfile*> by_pair(n * n, nullptr);
  for (const CongestionProfile& p : profiles) {
    check_profile(p, options.bpr);
    const NodeIndex o = network.index_of(p.origin);
    const NodeIndex d = network.index_of(p.destination);
    if (o == d) throw DataError("congestion " + pair_name(p.origin, p.destination) + ": same node");
    if (!network.ground_km(o, d)) {
      throw DataError("congestion " + pair_name(p.origin, p.destination) +
                      ": no ground distance for this pair");
    }
    if (by_pair[o * n + d]) {
      throw DataError("congestion " + pair_name(p.origin, p.destination) + ": duplicate profile");
    }
    by_pair[o * n + d] = &p;
  }

  for (NodeIndex o = 0; o < n; ++o) {
    for (NodeIndex d = 0; d < n; ++d) {
      if (o == d || !network.ground_km(o, d)) continue;
      const CongestionProfile* p = by_pair[o * n + d] ? by_pair[o * n + d] : by_pair[d * n + o];
      if (!p) {
        note_missing(pair_name(network.id(o), network.id(d)) + " (all hours)");
        continue;
      }
      table.set_free_flow(o, d, p->free_flow_minutes);
      for (int h = 0; h < hours; ++h) {
        if (static_cast<std::size_t>(h) >= p->flow_vph.size()) {
          note_missing(pair_name(network.id(o), network.id(d)) + " hour " + std::to_string(h));
          continue;
        }
        table.set(Mode::ambulance, o, d, h,
                  bpr_minutes(p->free_flow_minutes, p->flow_vph[h], p->capacity_vph,
                              options.bpr.alpha, options.bpr.beta));
      }
    }
  }

  const WindField field(network, wind, hours);
  for (NodeIndex node = 0; node < n; ++node) {
    for (int h = 0; h < hours; ++h) {
      if (!field.covers(node, h)) note_missing("wind at " + network.id(node) + " hour " + std::to_string(h));
    }
  }
  if (!missing.empty()) {
    std::string msg = "travel-time table: missing coverage:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw DataError(msg);
  }

  for (Mode mode : {Mode::evtol, Mode::uav}) {
    const double cruise = specs[mode].cruise_kmh;
    for (NodeIndex o = 0; o < n; ++o) {
      for (NodeIndex d = 0; d < n; ++d) {
        if (o == d || network.air_km(o, d) == 0.0) continue;
        for (int h = 0; h < hours; ++h) {
          if (auto m = air_minutes(network, field, o, d, h, cruise, options.air)) {
            table.set(mode, o, d, h, *m);
          } else {
            table.mark_infeasible(mode, o, d, h);
          }
        }
      }
    }
  }
  return table;
}

std::vector<CongestionProfile> load_congestion(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::string source = path.filename().string();
  if (t.header.size() < 5 || t.header[0] != "origin" || t.header[1] != "destination" ||
      t.header[2] != "t_o_minutes" || t.header[3] != "c_g") {
    csv::fail(source, 1, "expected header origin,destination,t_o_minutes,c_g,h0,...");
  }
  for (std::size_t c = 4; c < t.header.size(); ++c) {
    if (t.header[c] != "h" + std::to_string(c - 4)) {
      csv::fail(source, 1, "hour columns must be h0,h1,... in order");
    }
  }
  std::vector<CongestionProfile> out;
  for (const auto& row : t.rows) {
    CongestionProfile p;
    p.origin = row.fields[0];
    p.destination = row.fields[1];
    p.free_flow_minutes = csv::to_double(row, 2, source);
    p.capacity_vph = csv::to_double(row, 3, source);
    for (std::size_t c = 4; c < row.fields.size(); ++c) p.flow_vph.push_back(csv::to_double(row, c, source));
    out.push_back(std::move(p));
  }
  return out;
}

void save_congestion(std::span<const CongestionProfile> profiles, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  std::size_t hours = 0;
  for (const auto& p : profiles) hours = std::max(hours, p.flow_vph.size());
  out << "origin,destination,t_o_minutes,c_g";
  for (std::size_t h = 0; h < hours; ++h) out << ",h" << h;
  out << '\n';
  for (const auto& p : profiles) {
    if (p.flow_vph.size() != hours) throw DataError("save_congestion: ragged hour columns");
    out << p.origin << ',' << p.destination << ',' << format_double(p.free_flow_minutes) << ','
        << format_double(p.capacity_vph);
    for (double f : p.flow_vph) out << ',' << format_double(f);
    out << '\n';
  }
}

std::vector<WindRecord> load_wind(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::string source = path.filename().string();
  if (t.header != std::vector<std::string>{"node", "hour", "speed_kmh", "direction_deg"}) {
    csv::fail(source, 1, "expected header node,hour,speed_kmh,direction_deg");
  }
  std::vector<WindRecord> out;
  for (const auto& row : t.rows) {
    const double speed = csv::to_double(row, 2, source);
    if (speed < 0.0) csv::fail(source, row.line, "negative wind speed");
    out.push_back(wind_from_meteorological(row.fields[0], static_cast<int>(csv::to_long(row, 1, source)),
                                           speed, csv::to_double(row, 3, source)));
  }
  return out;
}

void save_wind(std::span<const WindRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "node,hour,speed_kmh,direction_deg\n";
  for (const auto& r : records) {
    const double speed = std::hypot(r.east_kmh, r.north_kmh);
    double from = speed == 0.0 ? 0.0 : std::atan2(-r.east_kmh, -r.north_kmh) / kDegToRad;
    if (from < 0.0) from += 360.0;
    out << r.node << ',' << r.hour << ',' << format_double(speed) << ',' << format_double(from) << '\n';
  }
}

}  // namespace meddispatch
