#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "meddispatch/core.h"
#include "meddispatch/network.h"
#include "meddispatch/travel_time.h"

namespace meddispatch {

struct Request {
  std::string id;
  PayloadKind kind = PayloadKind::supply;
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  Minutes ready = 0.0;
  Minutes deadline = 0.0;
  int units = 1;

  friend bool operator==(const Request&, const Request&) = default;
};

// Throws DataError when a request breaks o != d, hospital endpoints or
// ready < deadline.
void check_request(const Request& r, const Network& network);

// Which ground time sets the deadline baseline.
enum class DeadlineBaseline { congested, free_flow };

struct DemandParams {
  int request_count = 50;
  Minutes horizon_start = 0.0;
  Minutes horizon_end = 360.0;  // 9:00-15:00
  std::string hub_hospital = "MainCampus";
  double hub_weight = 0.4;  // probability the hub is drawn for each endpoint
  Minutes buffer_min = 60.0;
  Minutes buffer_max = 90.0;
  std::array<double, 3> kind_mix = {0.4, 0.3, 0.3};  // patient, organ, supply
  std::uint64_t seed = 1;
  DeadlineBaseline baseline = DeadlineBaseline::congested;
};

void check_params(const DemandParams& p);

// Ready times on the integer-minute grid of the horizon; deadline = ready +
// direct ambulance minutes at the ready hour + uniform buffer. Output is
// sorted by ready time and numbered R1..Rn. Deterministic for a given seed.
std::vector<Request> generate_demand(const DemandParams& params, const Network& network,
                                     const TravelTimeTable& table);

std::vector<Request> load_requests(const std::filesystem::path& path, const Network& network);
void save_requests(const std::vector<Request>& requests, const Network& network,
                   const std::filesystem::path& path);

std::vector<Request> parse_requests_csv(std::string_view text, const Network& network,
                                        const std::string& source = "requests");
std::string requests_to_csv(const std::vector<Request>& requests, const Network& network);

}  // namespace meddispatch
