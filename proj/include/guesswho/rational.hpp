#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

namespace guesswho {

namespace detail {
struct SmallRational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};
}  // namespace detail

// Exact rational number, always stored reduced with a positive denominator.
//
// Values whose numerator and denominator fit in int64 use a machine-word
// representation; every operation is evaluated in 128-bit intermediates and
// promotes to arbitrary precision when the reduced result no longer fits.
// Results that fit again are demoted, so the representation is canonical and
// equality is structural.
class Rational {
  using Small = detail::SmallRational;

 public:
  using BigInt = boost::multiprecision::cpp_int;
  using BigRational = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(std::int64_t value) : rep_(Small{value, 1}) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }
  explicit Rational(const BigRational& value) { *this = from_big(value); }

  static Rational from_big(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    return from_big(BigRational(num, den));
  }

  // 2^k as an exact rational, k >= 0.
  static Rational pow2(unsigned k) {
    if (k < 62) return Rational(std::int64_t{1} << k);
    return Rational(BigRational(BigInt(1) << k));
  }

  bool is_small() const { return std::holds_alternative<Small>(rep_); }

  BigInt numerator() const {
    if (auto* s = std::get_if<Small>(&rep_)) return BigInt(s->num);
    return boost::multiprecision::numerator(std::get<BigRational>(rep_));
  }
  BigInt denominator() const {
    if (auto* s = std::get_if<Small>(&rep_)) return BigInt(s->den);
    return boost::multiprecision::denominator(std::get<BigRational>(rep_));
  }

  // Machine-word numerator/denominator; throws if the value needs more.
  std::int64_t num64() const { return small_or_throw().num; }
  std::int64_t den64() const { return small_or_throw().den; }

  std::string num_str() const { return to_str(numerator()); }
  std::string den_str() const { return to_str(denominator()); }

  // "num/den", or just "num" for integers.
  std::string str() const {
    auto d = denominator();
    if (d == 1) return num_str();
    return num_str() + "/" + to_str(d);
  }

  double to_double() const {
    if (auto* s = std::get_if<Small>(&rep_)) {
      return static_cast<double>(s->num) / static_cast<double>(s->den);
    }
    return std::get<BigRational>(rep_).convert_to<double>();
  }

  int sign() const {
    if (auto* s = std::get_if<Small>(&rep_)) return (s->num > 0) - (s->num < 0);
    return std::get<BigRational>(rep_).sign();
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      auto [an, ad] = std::get<Small>(a.rep_);
      auto [bn, bd] = std::get<Small>(b.rep_);
      return from_wide(static_cast<i128>(an) * bd + static_cast<i128>(bn) * ad,
                       static_cast<i128>(ad) * bd);
    }
    return from_big(a.big() + b.big());
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      auto [an, ad] = std::get<Small>(a.rep_);
      auto [bn, bd] = std::get<Small>(b.rep_);
      return from_wide(static_cast<i128>(an) * bd - static_cast<i128>(bn) * ad,
                       static_cast<i128>(ad) * bd);
    }
    return from_big(a.big() - b.big());
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      auto [an, ad] = std::get<Small>(a.rep_);
      auto [bn, bd] = std::get<Small>(b.rep_);
      return from_wide(static_cast<i128>(an) * bn, static_cast<i128>(ad) * bd);
    }
    return from_big(a.big() * b.big());
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw std::domain_error("Rational: division by zero");
    if (a.is_small() && b.is_small()) {
      auto [an, ad] = std::get<Small>(a.rep_);
      auto [bn, bd] = std::get<Small>(b.rep_);
      return from_wide(static_cast<i128>(an) * bd, static_cast<i128>(ad) * bn);
    }
    return from_big(a.big() / b.big());
  }

  Rational operator-() const { return Rational(0) - *this; }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.is_small() != b.is_small()) return false;
    if (a.is_small()) {
      auto [an, ad] = std::get<Small>(a.rep_);
      auto [bn, bd] = std::get<Small>(b.rep_);
      return an == bn && ad == bd;
    }
    return std::get<BigRational>(a.rep_) == std::get<BigRational>(b.rep_);
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      auto [an, ad] = std::get<Small>(a.rep_);
      auto [bn, bd] = std::get<Small>(b.rep_);
      return static_cast<i128>(an) * bd <=> static_cast<i128>(bn) * ad;
    }
    auto diff = (a.big() - b.big()).sign();
    return diff <=> 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using i128 = __int128;

  const Small& small_or_throw() const {
    if (auto* s = std::get_if<Small>(&rep_)) return *s;
    throw std::overflow_error("Rational " + str() + " does not fit in 64 bits");
  }

  static std::string to_str(const BigInt& v) { return v.str(); }

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static bool fits64(i128 v) {
    return v >= static_cast<i128>(INT64_MIN) && v <= static_cast<i128>(INT64_MAX);
  }

  static BigInt to_big(i128 v) {
    bool neg = v < 0;
    unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                : static_cast<unsigned __int128>(v);
    BigInt out = BigInt(static_cast<std::uint64_t>(mag >> 64));
    out <<= 64;
    out += BigInt(static_cast<std::uint64_t>(mag));
    return neg ? BigInt(-out) : out;
  }

  // Inputs are products of int64 values, so neither operand is INT128_MIN.
  static Rational from_wide(i128 num, i128 den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    Rational r;
    if (fits64(num) && fits64(den)) {
      r.rep_ = Small{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
    } else {
      r.rep_ = BigRational(to_big(num), to_big(den));
    }
    return r;
  }

  static Rational from_big(const BigRational& v) {
    Rational r;
    const BigInt& n = boost::multiprecision::numerator(v);
    const BigInt& d = boost::multiprecision::denominator(v);
    static const BigInt lo(INT64_MIN);
    static const BigInt hi(INT64_MAX);
    if (n >= lo && n <= hi && d <= hi) {
      r.rep_ = Small{n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>()};
    } else {
      r.rep_ = v;
    }
    return r;
  }

  BigRational big() const {
    if (auto* s = std::get_if<Small>(&rep_)) return BigRational(BigInt(s->num), BigInt(s->den));
    return std::get<BigRational>(rep_);
  }

  std::variant<Small, BigRational> rep_;
};

}  // namespace guesswho
