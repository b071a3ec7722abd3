#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "holx/scalar.hpp"
#include "holx/time.hpp"

using namespace holx;

// Epoch milliseconds from Python's datetime for the same instants.
TEST_CASE("iso-8601 instants") {
  const std::pair<const char*, std::int64_t> cases[] = {
      {"2024-05-01T08:00:00Z", 1714550400000},  {"2024-02-29T23:59:59Z", 1709251199000},
      {"1969-12-31T23:59:59Z", -1000},          {"2000-03-01T00:00:00Z", 951868800000},
      {"1900-01-01T00:00:00Z", -2208988800000}, {"9999-12-31T23:59:59Z", 253402300799000},
      {"1970-01-01T00:00:00Z", 0},
  };
  for (const auto& [text, ms] : cases) {
    CAPTURE(text);
    CHECK(parse_iso8601(text) == Timestamp{ms});
    CHECK(format_iso8601(Timestamp{ms}) == text);
  }
}

TEST_CASE("fractional seconds") {
  CHECK(parse_iso8601("1970-01-01T00:00:00.5Z") == Timestamp{500});
  CHECK(parse_iso8601("1970-01-01T00:00:00.05Z") == Timestamp{50});
  CHECK(parse_iso8601("1970-01-01T00:00:00.123Z") == Timestamp{123});
  CHECK(format_iso8601(Timestamp{123}) == "1970-01-01T00:00:00.123Z");
  CHECK(format_iso8601(Timestamp{-1}) == "1969-12-31T23:59:59.999Z");
  CHECK_FALSE(parse_iso8601("1970-01-01T00:00:00.1234Z").has_value());
  CHECK_FALSE(parse_iso8601("1970-01-01T00:00:00.Z").has_value());
}

TEST_CASE("malformed timestamps are rejected") {
  for (const char* bad : {"", "2024-05-01", "2024-05-01T08:00:00", "2024-05-01 08:00:00Z", "2023-02-29T00:00:00Z",
                          "2024-13-01T00:00:00Z", "2024-04-31T00:00:00Z", "2024-05-01T24:00:00Z",
                          "2024-05-01T08:60:00Z", "2024-05-01T08:00:60Z", "2024-05-01T08:00:00+01:00",
                          "24-05-01T08:00:00Z", "2024-05-01T08:00:00ZZ"}) {
    CAPTURE(bad);
    CHECK_FALSE(parse_iso8601(bad).has_value());
  }
}

TEST_CASE("timestamp format/parse round trip") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> d(-2208988800000, 253402300799999);
  for (int i = 0; i < 5000; ++i) {
    const Timestamp t{d(rng)};
    CHECK(parse_iso8601(format_iso8601(t)) == t);
  }
}

TEST_CASE("scalar kind is lexical") {
  CHECK(Scalar::parse("12").kind() == Scalar::Kind::number);
  CHECK(Scalar::parse("-0.25").kind() == Scalar::Kind::number);
  CHECK(Scalar::parse("1e3").as_number() == 1000);
  CHECK(Scalar::parse("2024-05-01T08:00:00Z").kind() == Scalar::Kind::timestamp);
  CHECK(Scalar::parse("steel").kind() == Scalar::Kind::text);
  CHECK(Scalar::parse("").kind() == Scalar::Kind::text);
  CHECK(Scalar::parse("12mm").kind() == Scalar::Kind::text);
  CHECK(Scalar::parse("nan").kind() == Scalar::Kind::text);
  CHECK(Scalar::parse("inf").kind() == Scalar::Kind::text);
  CHECK(Scalar::parse(" 12").kind() == Scalar::Kind::text);
}

TEST_CASE("scalar canonical form") {
  CHECK(Scalar::number(12).to_string() == "12");
  CHECK(Scalar::number(0.1).to_string() == "0.1");
  CHECK(Scalar::number(118.5).to_string() == "118.5");
  CHECK(Scalar::parse("12.0").to_string() == "12");
  CHECK(Scalar::timestamp(Timestamp{0}).to_string() == "1970-01-01T00:00:00Z");
  CHECK_THROWS(Scalar::number(std::numeric_limits<double>::quiet_NaN()));
  CHECK_THROWS(Scalar::number(std::numeric_limits<double>::infinity()));
}

TEST_CASE("scalar round trip over random values") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> real(-1e12, 1e12);
  for (int i = 0; i < 5000; ++i) {
    const double v = i % 2 ? real(rng) : std::ldexp(real(rng), -40);
    const Scalar s = Scalar::number(v);
    CHECK(Scalar::parse(s.to_string()) == s);
  }
}
