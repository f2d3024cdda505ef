// rational.hpp — exact arbitrary-precision rational arithmetic used everywhere
// a certificate is produced.  Equality and inequality tests on traces,
// multiplicities and plan parameters are exact, never tolerance-based.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace fdca {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Error type for violated preconditions and malformed input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline BigInt rational_num(const Rational& q) { return numerator(q); }
inline BigInt rational_den(const Rational& q) { return denominator(q); }

/// 2^e as an exact rational; e may be negative.
inline Rational pow2(long e) {
  if (e >= 0) return Rational(BigInt(1) << static_cast<unsigned>(e));
  return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(-e));
}

inline Rational square(const Rational& q) { return q * q; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Parses "p/q" or "p".  The result is normalized (lowest terms, positive
/// denominator); a zero denominator is rejected.
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw Error("rational with zero denominator: " + text);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw Error("cannot parse rational: '" + text + "'");
  }
}

/// Formats as "p/q", or "p" when the denominator is 1.
inline std::string format_rational(const Rational& q) {
  std::string s = rational_num(q).str();
  if (rational_den(q) != 1) s += "/" + rational_den(q).str();
  return s;
}

inline long long to_int64(const BigInt& v, const char* what = "integer") {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw Error(std::string(what) + " does not fit in 64 bits");
  return v.convert_to<long long>();
}

/// Exact enclosure [lo, hi] of a real quantity.
struct Enclosure {
  Rational lo;
  Rational hi;

  void validate() const {
    if (lo > hi) throw Error("enclosure with lo > hi");
  }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains_strictly(const Rational& x) const { return lo < x && x < hi; }
  Rational width() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
};

}  // namespace fdca
