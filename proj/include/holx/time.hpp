#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace holx {

// Milliseconds since the Unix epoch, UTC.
struct Timestamp {
  std::int64_t ms = 0;
  auto operator<=>(const Timestamp&) const = default;
};

struct Duration {
  std::int64_t ms = 0;
  auto operator<=>(const Duration&) const = default;
};

inline Duration operator-(Timestamp a, Timestamp b) { return {a.ms - b.ms}; }
inline Timestamp operator+(Timestamp a, Duration d) { return {a.ms + d.ms}; }

// ISO-8601 UTC: "YYYY-MM-DDTHH:MM:SSZ", or "...SS.mmmZ" when the
// millisecond part is nonzero.
std::string format_iso8601(Timestamp t);

// Accepts "YYYY-MM-DDTHH:MM:SS[.fff]Z" with 1-3 fraction digits. Years
// 0000-9999 only.
std::optional<Timestamp> parse_iso8601(std::string_view text);

}  // namespace holx
