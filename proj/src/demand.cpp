#include "meddispatch/demand.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "csv.h"

namespace meddispatch {

void check_request(const Request& r, const Network& network) {
  const std::string who = "request '" + r.id + "': ";
  if (r.origin >= network.size() || r.destination >= network.size()) throw DataError(who + "unknown node");
  if (r.origin == r.destination) throw DataError(who + "origin equals destination");
  if (network.kind(r.origin) != NodeKind::hospital || network.kind(r.destination) != NodeKind::hospital) {
    throw DataError(who + "endpoints must be hospitals");
  }
  if (!(r.ready < r.deadline)) throw DataError(who + "deadline must be after ready time");
  if (!(r.ready >= 0.0)) throw DataError(who + "ready time before the horizon");
  if (r.units < 1) throw DataError(who + "units must be >= 1");
}

void check_params(const DemandParams& p) {
  if (p.request_count < 0) throw ConfigError("demand: request_count must be >= 0");
  if (p.horizon_end - p.horizon_start < 1.0) throw ConfigError("demand: horizon shorter than 1 minute");
  if (p.buffer_min > p.buffer_max) throw ConfigError("demand: buffer_min > buffer_max");
  if (!(p.hub_weight >= 0.0 && p.hub_weight <= 1.0)) throw ConfigError("demand: hub_weight outside [0, 1]");
  double sum = 0.0;
  for (double q : p.kind_mix) {
    if (!(q >= 0.0)) throw ConfigError("demand: negative kind probability");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("demand: kind mix must sum to 1");
}

std::vector<Request> generate_demand(const DemandParams& params, const Network& network,
                                     const TravelTimeTable& table) {
  check_params(params);
  std::vector<Request> out;
  if (params.request_count == 0) return out;

  const auto hub = network.find(params.hub_hospital);
  if (!hub || network.kind(*hub) != NodeKind::hospital) {
    throw ConfigError("demand: hub '" + params.hub_hospital + "' is not a hospital");
  }
  std::vector<NodeIndex> others;
  for (NodeIndex h : network.hospitals()) {
    if (h != *hub) others.push_back(h);
  }
  if (others.empty()) throw ConfigError("demand: need at least two hospitals");

  std::mt19937_64 rng(params.seed);
  const auto first_minute = static_cast<long>(std::ceil(params.horizon_start));
  const auto last_minute = static_cast<long>(std::ceil(params.horizon_end)) - 1;
  std::uniform_int_distribution<long> minute(first_minute, std::max(first_minute, last_minute));
  std::bernoulli_distribution pick_hub(params.hub_weight);
  std::uniform_int_distribution<std::size_t> pick_other(0, others.size() - 1);
  std::discrete_distribution<int> pick_kind(params.kind_mix.begin(), params.kind_mix.end());
  std::uniform_real_distribution<double> buffer(params.buffer_min, params.buffer_max);

  auto draw_endpoint = [&]() { return pick_hub(rng) ? *hub : others[pick_other(rng)]; };

  for (int i = 0; i < params.request_count; ++i) {
    Request r;
    r.ready = static_cast<double>(minute(rng));
    r.origin = draw_endpoint();
    do {
      r.destination = draw_endpoint();
    } while (r.destination == r.origin);
    r.kind = kAllPayloads[static_cast<std::size_t>(pick_kind(rng))];

    const auto ground = params.baseline == DeadlineBaseline::congested
                            ? table.minutes_at(Mode::ambulance, r.origin, r.destination, r.ready)
                            : table.free_flow_minutes(r.origin, r.destination);
    if (!ground) {
      throw DataError("demand: no ground route " + network.id(r.origin) + "->" + network.id(r.destination));
    }
    const double slack = params.buffer_min == params.buffer_max ? params.buffer_min : buffer(rng);
    r.deadline = r.ready + *ground + slack;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Request& a, const Request& b) { return a.ready < b.ready; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = "R" + std::to_string(i + 1);
  return out;
}

std::vector<Request> parse_requests_csv(std::string_view text, const Network& network,
                                        const std::string& source) {
  const csv::Table t = csv::parse(text, source);
  const std::vector<std::string> expected = {"id", "kind", "origin", "destination", "ready_minute",
                                             "deadline_minute"};
  if (t.header != expected) csv::fail(source, 1, "expected header " + csv::join(expected));
  std::vector<Request> out;
  std::set<std::string> seen;
  for (const auto& row : t.rows) {
    try {
      Request r;
      r.id = row.fields[0];
      r.kind = parse_payload_kind(row.fields[1]);
      r.origin = network.index_of(row.fields[2]);
      r.destination = network.index_of(row.fields[3]);
      r.ready = csv::to_double(row, 4, source);
      r.deadline = csv::to_double(row, 5, source);
      if (!seen.insert(r.id).second) throw DataError("duplicate request id '" + r.id + "'");
      check_request(r, network);
      out.push_back(std::move(r));
    } catch (const DataError& e) {
      const std::string what = e.what();
      // Errors already carrying a location pass through unchanged.
      if (what.rfind(source + ":", 0) == 0) throw;
      csv::fail(source, row.line, what);
    }
  }
  return out;
}

std::vector<Request> load_requests(const std::filesystem::path& path, const Network& network) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open requests file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_requests_csv(buf.str(), network, path.filename().string());
}

std::string requests_to_csv(const std::vector<Request>& requests, const Network& network) {
  std::string out = "id,kind,origin,destination,ready_minute,deadline_minute\n";
  for (const Request& r : requests) {
    out += csv::join({r.id, std::string(to_string(r.kind)), network.id(r.origin),
                      network.id(r.destination), format_double(r.ready), format_double(r.deadline)});
    out += '\n';
  }
  return out;
}

void save_requests(const std::vector<Request>& requests, const Network& network,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write requests file " + path.string());
  out << requests_to_csv(requests, network);
}

}  // namespace meddispatch
