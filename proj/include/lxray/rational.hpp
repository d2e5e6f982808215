/*
   Copyright 2026 The lxray Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

/**
 * @file rational.hpp
 * @brief Exact rationals and 128-bit helpers.
 *
 * Radii and squared norms are compared exactly. A Rational holds a reduced
 * 64-bit numerator/denominator pair; every product formed while comparing
 * is carried in 128 bits, and comparisons that could overflow even 128 bits
 * go through compare_fractions(), which never multiplies.
 */

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "lxray/error.hpp"

namespace lxray {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 abs128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

inline u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// floor(sqrt(n)).
inline u128 isqrt(u128 n) {
  if (n < 2) return n;
  u128 x = static_cast<u128>(std::sqrt(static_cast<long double>(n)));
  // The long double estimate is within a few units; fix it up exactly.
  while (x > 0 && x > n / x) --x;
  while ((x + 1) <= n / (x + 1)) ++x;
  return x;
}

inline std::string to_string(i128 v) {
  if (v == 0) return "0";
  u128 m = abs128(v);
  std::string s;
  while (m > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(m % 10)));
    m /= 10;
  }
  if (v < 0) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

/// Sign of a/b - c/d for nonnegative numerators and positive denominators.
/// Works on the continued-fraction expansions, so nothing is multiplied.
inline int compare_fractions(u128 a, u128 b, u128 c, u128 d) {
  bool flipped = false;
  for (;;) {
    const u128 qa = a / b, qc = c / d;
    if (qa != qc) {
      const int s = qa < qc ? -1 : 1;
      return flipped ? -s : s;
    }
    const u128 ra = a % b, rc = c % d;
    if (ra == 0 || rc == 0) {
      const int s = (ra == 0 && rc == 0) ? 0 : (ra == 0 ? -1 : 1);
      return flipped ? -s : s;
    }
    // a/b - c/d has the opposite sign of b/ra - d/rc.
    a = b;
    b = ra;
    c = d;
    d = rc;
    flipped = !flipped;
  }
}

inline std::int64_t narrow_i64(i128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw OverflowError(std::string(what) + " does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

/// Exact rational number with positive denominator, always reduced.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design of integers-as-rationals
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

  /// Reduces an (i128, i128) pair, throwing if the result needs more than
  /// 64 bits.
  static Rational from_wide(i128 n, i128 d) {
    if (d == 0) throw PreconditionError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    u128 g = gcd128(abs128(n), abs128(d));
    if (g == 0) g = 1;
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
    Rational r;
    r.num_ = narrow_i64(n, "rational numerator");
    r.den_ = narrow_i64(d, "rational denominator");
    return r;
  }

  /// Exact value of a finite double.
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw PreconditionError("non-finite radius");
    if (x == 0.0) return {};
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m * 2^e, 0.5 <= |m| < 1
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    e -= 53;
    while (e < 0 && (mant & 1) == 0) {
      mant /= 2;
      ++e;
    }
    if (e >= 0) {
      if (e > 62 - 53) throw OverflowError("double too large for an exact rational");
      return Rational(mant * (std::int64_t{1} << e));
    }
    if (-e > 62) throw OverflowError("double too small for an exact rational");
    return Rational(mant, std::int64_t{1} << (-e));
  }

  /// Parses "p", "p/q", or a plain decimal "a.b" (exact).
  static Rational parse(std::string_view s) {
    auto fail = [&]() -> Rational {
      throw FormatError("bad rational '" + std::string(s) + "'");
    };
    auto parse_int = [&](std::string_view t, std::int64_t& out) {
      if (!t.empty() && t.front() == '+') t.remove_prefix(1);
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
      return ec == std::errc{} && p == t.data() + t.size() && !t.empty();
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
      std::int64_t n = 0, d = 0;
      if (!parse_int(s.substr(0, slash), n) || !parse_int(s.substr(slash + 1), d) || d == 0)
        return fail();
      return Rational(n, d);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
      bool neg = !ip.empty() && ip.front() == '-';
      if (neg) ip.remove_prefix(1);
      std::int64_t i = 0, f = 0;
      if (!ip.empty() && !parse_int(ip, i)) return fail();
      if (fp.empty() || fp.size() > 17 || !parse_int(fp, f) || fp.front() == '-' ||
          fp.front() == '+')
        return fail();
      std::int64_t scale = 1;
      for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
      const i128 n = static_cast<i128>(i) * scale + f;
      return from_wide(neg ? -n : n, scale);
    }
    std::int64_t n = 0;
    if (!parse_int(s, n)) return fail();
    return Rational(n);
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_negative() const { return num_ < 0; }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// floor(r^2). An integer k satisfies k <= r^2 iff k <= floor_square().
  u128 floor_square() const {
    const u128 n = abs128(num_), d = den_;
    return (n * n) / (d * d);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
    return static_cast<i128>(x.num_) * y.den_ <=> static_cast<i128>(y.num_) * x.den_;
  }

  friend Rational operator*(const Rational& x, const Rational& y) {
    return from_wide(static_cast<i128>(x.num_) * y.num_, static_cast<i128>(x.den_) * y.den_);
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    return from_wide(static_cast<i128>(x.num_) * y.den_, static_cast<i128>(x.den_) * y.num_);
  }
  friend Rational operator+(const Rational& x, const Rational& y) {
    return from_wide(static_cast<i128>(x.num_) * y.den_ + static_cast<i128>(y.num_) * x.den_,
                     static_cast<i128>(x.den_) * y.den_);
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return from_wide(static_cast<i128>(x.num_) * y.den_ - static_cast<i128>(y.num_) * x.den_,
                     static_cast<i128>(x.den_) * y.den_);
  }

 private:
  void reduce() {
    if (den_ == 0) throw PreconditionError("rational with zero denominator");
    *this = from_wide(num_, den_);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Sign of (n / d) - r^2 for n >= 0, d > 0. Exact for any 128-bit inputs.
inline int compare_to_square(u128 n, u128 d, const Rational& r) {
  const u128 rn = abs128(r.num()), rd = static_cast<u128>(r.den());
  return compare_fractions(n, d, rn * rn, rd * rd);
}

}  // namespace lxray
