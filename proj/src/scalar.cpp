#include "holx/scalar.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace holx {

Scalar Scalar::number(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("scalar numbers must be finite");
  return Scalar{v};
}

Scalar Scalar::timestamp(Timestamp t) { return Scalar{t}; }

Scalar Scalar::parse(std::string_view lexical) {
  if (auto t = parse_iso8601(lexical)) return Scalar{*t};
  if (!lexical.empty()) {
    double v = 0;
    const char* end = lexical.data() + lexical.size();
    auto [ptr, ec] = std::from_chars(lexical.data(), end, v);
    if (ec == std::errc{} && ptr == end && std::isfinite(v)) return Scalar{v};
  }
  return Scalar{std::string(lexical)};
}

std::string Scalar::to_string() const {
  switch (kind()) {
    case Kind::number: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
      return std::string(buf, ptr);
    }
    case Kind::timestamp:
      return format_iso8601(std::get<Timestamp>(value_));
    case Kind::text:
      return std::get<std::string>(value_);
  }
  return {};
}

}  // namespace holx
