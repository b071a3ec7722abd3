#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "holx/time.hpp"

namespace holx {

// A property or attribute value. The kind of a scalar is a function of its
// lexical form: anything that reads as an ISO-8601 timestamp is a
// timestamp, anything that reads as a finite decimal number is a number,
// everything else is text. This keeps serialization lossless.
class Scalar {
 public:
  enum class Kind { number, text, timestamp };

  Scalar() : value_(std::string{}) {}

  static Scalar number(double v);
  static Scalar timestamp(Timestamp t);
  // Classifies `lexical`; Scalar::parse("12") is a number, not text.
  static Scalar parse(std::string_view lexical);

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
  bool is_number() const noexcept { return kind() == Kind::number; }
  bool is_timestamp() const noexcept { return kind() == Kind::timestamp; }

  double as_number() const { return std::get<double>(value_); }
  Timestamp as_timestamp() const { return std::get<Timestamp>(value_); }

  // Canonical lexical form; Scalar::parse(s.to_string()) == s.
  std::string to_string() const;

  bool operator==(const Scalar&) const = default;

 private:
  explicit Scalar(std::variant<double, std::string, Timestamp> v) : value_(std::move(v)) {}

  std::variant<double, std::string, Timestamp> value_;
};

}  // namespace holx
