#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meddispatch/core.h"
#include "meddispatch/network.h"
#include "meddispatch/specs.h"

namespace meddispatch {

// BPR volume-delay function: t_o * (1 + alpha * (flow / capacity)^beta).
// Throws std::domain_error when capacity <= 0.
double bpr_minutes(double free_flow_minutes, double flow_vph, double capacity_vph,
                   double alpha = 0.15, double beta = 4.0);

struct BprParameters {
  double alpha = 0.15;
  double beta = 4.0;
};

// Hourly traffic for one ordered ground pair. flow_vph[h] is horizon hour h.
struct CongestionProfile {
  std::string origin;
  std::string destination;
  double free_flow_minutes = 0.0;
  double capacity_vph = 0.0;
  std::vector<double> flow_vph;
};

// Throws DataError naming the pair and the broken rule.
void check_profile(const CongestionProfile& p, const BprParameters& bpr);

struct WindRecord {
  std::string node;
  int hour = 0;
  double east_kmh = 0.0;   // positive: air moving toward the east
  double north_kmh = 0.0;  // positive: air moving toward the north
};

inline constexpr double kWindSanityKmh = 200.0;

// Meteorological convention: direction is where the wind blows FROM,
// clockwise from north. A 270 degree wind moves air toward the east.
WindRecord wind_from_meteorological(std::string node, int hour, double speed_kmh,
                                    double direction_deg);

// Cruise speed plus the along-track component of the averaged endpoint wind.
// May be <= 0; callers treat that as an infeasible leg.
double effective_airspeed_kmh(double cruise_kmh, double bearing_deg, const WindRecord& at_origin,
                              const WindRecord& at_destination);

// Hourly wind per node. Hospitals without their own record use their
// nearest vertiport's record.
class WindField {
 public:
  WindField(const Network& network, std::span<const WindRecord> records, int hours);

  // Throws DataError naming node and hour when no record applies.
  const WindRecord& at(NodeIndex node, int hour) const;
  bool covers(NodeIndex node, int hour) const;

  int hours() const { return hours_; }

 private:
  const Network* network_;
  int hours_;
  std::vector<std::optional<WindRecord>> records_;  // node * hours + hour
};

struct AirOptions {
  // Grounds a flight when either endpoint's wind exceeds this speed.
  std::optional<double> max_wind_kmh;
};

// Flight minutes between two nodes at a horizon hour, or nullopt when the
// effective airspeed is not positive or the grounding threshold trips.
std::optional<double> air_minutes(const Network& network, const WindField& wind, NodeIndex origin,
                                  NodeIndex destination, int hour, double cruise_kmh,
                                  const AirOptions& options = {});

// Minutes by (mode, origin, destination, hour). Entries are finite positive
// minutes, or explicitly infeasible (wind), or absent (no ground link).
class TravelTimeTable {
 public:
  TravelTimeTable() = default;
  TravelTimeTable(std::size_t nodes, int hours);

  std::size_t nodes() const { return nodes_; }
  int hours() const { return hours_; }

  // Same-node lookups return 0. Hours past the end reuse the last hour.
  std::optional<double> minutes(Mode mode, NodeIndex o, NodeIndex d, int hour) const;
  std::optional<double> minutes_at(Mode mode, NodeIndex o, NodeIndex d, Minutes t) const {
    return minutes(mode, o, d, hour_of(t));
  }
  bool infeasible(Mode mode, NodeIndex o, NodeIndex d, int hour) const;
  std::optional<double> free_flow_minutes(NodeIndex o, NodeIndex d) const;

  void set(Mode mode, NodeIndex o, NodeIndex d, int hour, double minutes);
  void mark_infeasible(Mode mode, NodeIndex o, NodeIndex d, int hour);
  void set_free_flow(NodeIndex o, NodeIndex d, double minutes);

  friend bool operator==(const TravelTimeTable&, const TravelTimeTable&) = default;

 private:
  std::size_t slot(Mode mode, NodeIndex o, NodeIndex d, int hour) const;
  int clamp_hour(int hour) const;

  std::size_t nodes_ = 0;
  int hours_ = 0;
  std::vector<double> minutes_;    // NaN absent, +inf infeasible
  std::vector<double> free_flow_;  // NaN absent
};

struct TableOptions {
  BprParameters bpr;
  AirOptions air;
};

// Ground entries come from the BPR model per profile (a missing direction
// reuses the reverse profile); air entries from wind-adjusted airspeed per
// mode cruise. Throws DataError listing every uncovered (pair, hour).
TravelTimeTable build_travel_time_table(const Network& network,
                                        std::span<const CongestionProfile> profiles,
                                        std::span<const WindRecord> wind, const SpecSet& specs,
                                        int hours, const TableOptions& options = {});

// Files. Congestion rows: origin,destination,t_o_minutes,c_g,h0..hN.
// Wind rows: node,hour,speed_kmh,direction_deg (meteorological "from").
std::vector<CongestionProfile> load_congestion(const std::filesystem::path& path);
void save_congestion(std::span<const CongestionProfile> profiles, const std::filesystem::path& path);
std::vector<WindRecord> load_wind(const std::filesystem::path& path);
void save_wind(std::span<const WindRecord> records, const std::filesystem::path& path);

}  // namespace meddispatch
