#include "zkpos/sim/time.hpp"

#include <stdexcept>

namespace zkpos::sim {

namespace {

const BigInt& two_pow_frac() {
  static const BigInt v = BigInt(1) << Time::kFracBits;
  return v;
}

__int128 to_int128(const BigInt& v) {
  static const BigInt kMax = (BigInt(1) << 127) - 1;
  static const BigInt kMin = -(BigInt(1) << 127);
  if (v > kMax || v < kMin) throw std::overflow_error("time value exceeds fixed-point range");
  const bool neg = v < 0;
  BigInt mag = neg ? BigInt(-v) : v;
  const auto lo = static_cast<std::uint64_t>(mag & BigInt(~std::uint64_t{0}));
  const auto hi = static_cast<std::uint64_t>(mag >> 64);
  unsigned __int128 u = (static_cast<unsigned __int128>(hi) << 64) | lo;
  return neg ? -static_cast<__int128>(u) : static_cast<__int128>(u);
}

BigInt from_int128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt out = BigInt(static_cast<std::uint64_t>(u >> 64));
  out <<= 64;
  out += BigInt(static_cast<std::uint64_t>(u));
  return neg ? BigInt(-out) : out;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  const auto slash = text.find('/');
  const auto dot = text.find('.');
  auto parse_int = [&](const std::string& s) {
    if (s.empty() || s == "-" || s == "+") throw std::invalid_argument("malformed rational '" + text + "'");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed rational '" + text + "'");
    }
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  };
  if (slash != std::string::npos) {
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  if (dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    const bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w = parse_int(whole);
    BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    BigInt mag = (w < 0 ? BigInt(-w) : w) * scale + f;
    return Rational(neg ? BigInt(-mag) : mag, scale);
  }
  return Rational(parse_int(text));
}

std::string rational_to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

__int128 round_to_fixed(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw std::invalid_argument("round_to_fixed: non-positive denominator");
  BigInt scaled = num * two_pow_frac();
  BigInt q, r;
  boost::multiprecision::divide_qr(scaled, den, q, r);
  // divide_qr truncates toward zero; move to floor.
  if (r < 0) {
    q -= 1;
    r += den;
  }
  const BigInt twice = r * 2;
  if (twice > den || (twice == den && (q & 1) != 0)) q += 1;
  return to_int128(q);
}

Time Time::from_rational(const Rational& q) {
  return from_raw(round_to_fixed(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q)));
}

Rational Time::to_rational() const { return Rational(from_int128(raw_), two_pow_frac()); }

std::string Time::to_decimal() const {
  const bool neg = raw_ < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(raw_) : static_cast<unsigned __int128>(raw_);
  const unsigned __int128 whole = mag >> kFracBits;
  unsigned __int128 frac = mag & ((static_cast<unsigned __int128>(1) << kFracBits) - 1);
  std::string digits;
  {
    unsigned __int128 w = whole;
    do {
      digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(w % 10)));
      w /= 10;
    } while (w != 0);
  }
  std::string out = (neg && mag != 0) ? "-" + digits : digits;
  if (frac != 0) {
    // frac < 2^96, so frac * 10 < 2^100 fits; the expansion terminates within 96 digits.
    out.push_back('.');
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << kFracBits) - 1;
    while (frac != 0) {
      frac *= 10;
      out.push_back(static_cast<char>('0' + static_cast<int>(frac >> kFracBits)));
      frac &= mask;
    }
  }
  return out;
}

double Time::to_double() const {
  return static_cast<double>(raw_) * 0x1.0p-96;
}

std::int64_t Time::floor_div(Time step) const {
  if (step.raw_ <= 0) throw std::invalid_argument("floor_div: non-positive step");
  __int128 q = raw_ / step.raw_;
  if ((raw_ % step.raw_ != 0) && (raw_ < 0)) q -= 1;
  return static_cast<std::int64_t>(q);
}

}  // namespace zkpos::sim
