#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meddispatch {

using NodeIndex = std::size_t;

// Minutes relative to the start of the operating horizon.
using Minutes = double;

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class NodeKind : std::uint8_t { hospital, vertiport };
enum class Mode : std::uint8_t { ambulance, evtol, uav };
enum class PayloadKind : std::uint8_t { patient, organ, supply };

inline constexpr std::array<Mode, 3> kAllModes = {Mode::ambulance, Mode::evtol,
                                                  Mode::uav};
inline constexpr std::array<PayloadKind, 3> kAllPayloads = {
    PayloadKind::patient, PayloadKind::organ, PayloadKind::supply};

constexpr std::size_t index_of(Mode m) { return static_cast<std::size_t>(m); }
constexpr std::size_t index_of(PayloadKind k) { return static_cast<std::size_t>(k); }

constexpr bool is_air(Mode m) { return m != Mode::ambulance; }

std::string_view to_string(NodeKind k);
std::string_view to_string(Mode m);
std::string_view to_string(PayloadKind k);

// Parsers accept the spellings produced by to_string (case-sensitive).
NodeKind parse_node_kind(std::string_view s);
Mode parse_mode(std::string_view s);
PayloadKind parse_payload_kind(std::string_view s);

// Malformed or inconsistent input files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration (counts, weights, specs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Horizon-relative hour bucket for a time; negative times fall into hour 0.
int hour_of(Minutes t);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

}  // namespace meddispatch
