#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace zkpos::sim {

/// Exact rational, always reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Accepts "7", "-3/2", "0.25". Throws std::invalid_argument otherwise.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

/// Simulation time (and travel time): signed binary fixed point with
/// kFracBits fractional bits, stored in 128 bits. All signal arithmetic goes
/// through this type so that expected and delivered times compare exactly.
class Time {
 public:
  static constexpr int kFracBits = 96;

  constexpr Time() = default;
  static constexpr Time from_raw(__int128 raw) {
    Time t;
    t.raw_ = raw;
    return t;
  }
  /// Round-to-nearest-even onto the fixed-point grid.
  static Time from_rational(const Rational& q);
  static Time from_int(std::int64_t v) { return from_raw(static_cast<__int128>(v) << kFracBits); }

  constexpr __int128 raw() const { return raw_; }
  Rational to_rational() const;
  /// Exact decimal expansion of the fixed-point value ("8", "2.5", "-0.125").
  std::string to_decimal() const;
  double to_double() const;

  /// floor(this / step) for step > 0.
  std::int64_t floor_div(Time step) const;

  constexpr Time operator+(Time o) const { return from_raw(raw_ + o.raw_); }
  constexpr Time operator-(Time o) const { return from_raw(raw_ - o.raw_); }
  constexpr Time& operator+=(Time o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr auto operator<=>(const Time&) const = default;

  static constexpr Time zero() { return Time{}; }
  /// One unit in the last place.
  static constexpr Time ulp() { return from_raw(1); }

 private:
  __int128 raw_ = 0;
};

/// Deterministic fixed-point time rounding of a value; exposed for the mesh
/// solver and tests. Returns round-half-even(num * 2^96 / den).
__int128 round_to_fixed(const BigInt& num, const BigInt& den);

}  // namespace zkpos::sim
