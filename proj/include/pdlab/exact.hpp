#pragma once

// Exact integer and rational arithmetic shared by the counters and the
// certificate checks, plus their JSON encodings.

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace pdlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using u128 = unsigned __int128;

std::string to_string(u128 v);
BigInt to_big(u128 v);

/// Integer as a JSON number when it fits in int64, else as a decimal string.
nlohmann::json int_json(const BigInt& v);
/// {num, den} with the same integer encoding.
nlohmann::json rational_json(const Rational& v);

/// Parses "a/b", "a" or a decimal "1.25" into an exact rational.
Rational parse_rational(const std::string& text);

inline Rational ratio(std::int64_t num, std::int64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

double to_double(const Rational& v);

}  // namespace pdlab
