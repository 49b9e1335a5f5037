#include "pdlab/exact.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pdlab {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

BigInt to_big(u128 v) {
  BigInt hi = static_cast<std::uint64_t>(v >> 64);
  BigInt lo = static_cast<std::uint64_t>(v);
  return (hi << 64) | lo;
}

nlohmann::json int_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

nlohmann::json rational_json(const Rational& v) {
  return {{"num", int_json(numerator(v))}, {"den", int_json(denominator(v))}};
}

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string frac = text.substr(dot + 1);
      BigInt num(text.substr(0, dot) + frac);
      BigInt den = boost::multiprecision::pow(BigInt(10),
                                              static_cast<unsigned>(frac.size()));
      return Rational(num, den);
    }
    return Rational(BigInt(text));
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
}

double to_double(const Rational& v) { return v.convert_to<double>(); }

}  // namespace pdlab
