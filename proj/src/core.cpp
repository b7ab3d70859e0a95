#include "meddispatch/core.h"

#include <charconv>
#include <cmath>

namespace meddispatch {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::hospital:
      return "hospital";
    case NodeKind::vertiport:
      return "vertiport";
  }
  return "?";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::ambulance:
      return "ambulance";
    case Mode::evtol:
      return "evtol";
    case Mode::uav:
      return "uav";
  }
  return "?";
}

std::string_view to_string(PayloadKind k) {
  switch (k) {
    case PayloadKind::patient:
      return "patient";
    case PayloadKind::organ:
      return "organ";
    case PayloadKind::supply:
      return "supply";
  }
  return "?";
}

NodeKind parse_node_kind(std::string_view s) {
  if (s == "hospital") return NodeKind::hospital;
  if (s == "vertiport") return NodeKind::vertiport;
  throw DataError("unknown node kind '" + std::string(s) + "'");
}

Mode parse_mode(std::string_view s) {
  for (Mode m : kAllModes) {
    if (to_string(m) == s) return m;
  }
  throw DataError("unknown mode '" + std::string(s) + "'");
}

PayloadKind parse_payload_kind(std::string_view s) {
  for (PayloadKind k : kAllPayloads) {
    if (to_string(k) == s) return k;
  }
  throw DataError("unknown payload kind '" + std::string(s) + "'");
}

int hour_of(Minutes t) {
  if (!(t > 0.0)) return 0;
  return static_cast<int>(std::floor(t / 60.0));
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, end);
}

}  // namespace meddispatch
