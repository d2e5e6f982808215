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
 * @file lattice.hpp
 * @brief Integer-lattice primitives.
 *
 * Points of Z^d, primitive sign-canonical directions, closed-ball
 * enumeration, two-dimensional planes span{a, b} with exact in-plane norms,
 * shell decompositions by descending (in-plane) norm, and Farey counts.
 *
 * Everything here is a pure function of its inputs.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lxray/error.hpp"
#include "lxray/rational.hpp"

namespace lxray {

/// A point of Z^d. Coordinates are 64-bit; products are formed in 128 bits.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::size_t d) : c_(d, 0) {}
  LatticePoint(std::initializer_list<std::int64_t> c) : c_(c) {}
  explicit LatticePoint(std::vector<std::int64_t> c) : c_(std::move(c)) {}

  static LatticePoint unit(std::size_t d, std::size_t axis) {
    LatticePoint e(d);
    e.c_.at(axis) = 1;
    return e;
  }

  std::size_t dim() const { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::int64_t& operator[](std::size_t i) { return c_[i]; }
  std::span<const std::int64_t> coords() const { return c_; }
  const std::vector<std::int64_t>& vec() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
  }

  i128 dot(const LatticePoint& o) const {
    require_same_dim(o);
    i128 s = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) s += static_cast<i128>(c_[i]) * o.c_[i];
    return s;
  }
  i128 norm2() const { return dot(*this); }

  LatticePoint operator+(const LatticePoint& o) const {
    require_same_dim(o);
    LatticePoint r(*this);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
  }
  LatticePoint operator-(const LatticePoint& o) const {
    require_same_dim(o);
    LatticePoint r(*this);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
  }
  LatticePoint operator-() const {
    LatticePoint r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend LatticePoint operator*(std::int64_t k, const LatticePoint& p) {
    LatticePoint r(p);
    for (auto& v : r.c_) v *= k;
    return r;
  }

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const LatticePoint& p) {
    return os << p.to_string();
  }

  void require_same_dim(const LatticePoint& o) const {
    if (o.dim() != dim())
      throw PreconditionError("dimension mismatch: " + std::to_string(dim()) + " vs " +
                              std::to_string(o.dim()));
  }

 private:
  std::vector<std::int64_t> c_;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::int64_t v : p.coords()) {
      h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// A rational direction: primitive integer vector whose first nonzero entry
/// is positive. Lines are unoriented, so the sign is canonicalized away.
class Direction {
 public:
  /// Canonical primitive representative of a nonzero integer vector.
  static Direction of(const LatticePoint& z) {
    if (z.dim() == 0 || z.is_zero()) throw PreconditionError("primitive() of the zero vector");
    std::int64_t g = 0;
    for (std::int64_t v : z.coords()) g = std::gcd(g, v);
    LatticePoint p(z);
    std::int64_t sign = 1;
    for (std::int64_t v : z.coords()) {
      if (v != 0) {
        sign = v > 0 ? 1 : -1;
        break;
      }
    }
    for (std::size_t i = 0; i < p.dim(); ++i) p[i] = sign * (z[i] / g);
    return Direction(std::move(p));
  }

  const LatticePoint& prim() const { return prim_; }
  std::size_t dim() const { return prim_.dim(); }
  i128 norm2() const { return prim_.norm2(); }

  friend bool operator==(const Direction&, const Direction&) = default;
  friend auto operator<=>(const Direction&, const Direction&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Direction& d) { return os << d.prim_; }

 private:
  explicit Direction(LatticePoint p) : prim_(std::move(p)) {}
  LatticePoint prim_;
};

/// z divided by the gcd of its entries, sign-normalized.
inline Direction primitive(const LatticePoint& z) { return Direction::of(z); }

/// theta in Omega_rho: |prim|^2 <= rho^2, compared exactly.
inline bool in_omega_rho(const Direction& theta, const Rational& rho) {
  return static_cast<u128>(theta.norm2()) <= rho.floor_square();
}

/// Closed-ball lattice points |z - center|^2 <= r^2 in lexicographic order.
inline std::vector<LatticePoint> enumerate_ball(std::size_t d, const Rational& r,
                                                const LatticePoint& center) {
  if (d < 2) throw PreconditionError("dimension must be >= 2");
  if (center.dim() != d) throw PreconditionError("center dimension does not match d");
  if (r.is_negative()) throw PreconditionError("negative radius");
  const u128 budget = r.floor_square();
  std::vector<LatticePoint> out;
  LatticePoint offset(d);
  std::function<void(std::size_t, u128)> rec = [&](std::size_t axis, u128 left) {
    if (axis == d) {
      out.push_back(center + offset);
      return;
    }
    const auto m = static_cast<std::int64_t>(isqrt(left));
    for (std::int64_t x = -m; x <= m; ++x) {
      offset[axis] = x;
      rec(axis + 1, left - static_cast<u128>(static_cast<i128>(x) * x));
    }
    offset[axis] = 0;
  };
  rec(0, budget);
  return out;
}

inline std::vector<LatticePoint> enumerate_ball(std::size_t d, const Rational& r) {
  return enumerate_ball(d, r, LatticePoint(d));
}

/// N_r = #(B_r ∩ Z^d).
inline std::size_t ball_count(std::size_t d, const Rational& r) {
  return enumerate_ball(d, r).size();
}

/// The plane span{a, b} with its integer Gram matrix.
///
/// For z in Z^d, with u = (z.a, z.b), the squared norm of the orthogonal
/// projection z_{a,b} is  u^T adj(G) u / det(G),  an exact rational with
/// denominator det(G). det(G) * z^{a,b} = det(G) * z - det(G) * z_{a,b} is an
/// integer vector and identifies the slice z + span{a, b}.
class Plane {
 public:
  static Plane make(const LatticePoint& a, const LatticePoint& b) {
    a.require_same_dim(b);
    if (a.dim() < 2) throw PreconditionError("plane needs dimension >= 2");
    Plane p;
    p.a_ = a;
    p.b_ = b;
    p.aa_ = a.norm2();
    p.ab_ = a.dot(b);
    p.bb_ = b.norm2();
    p.det_ = p.aa_ * p.bb_ - p.ab_ * p.ab_;
    if (p.det_ <= 0) throw PreconditionError("plane vectors are linearly dependent");
    return p;
  }
  /// span{e_1, e_2}.
  static Plane standard(std::size_t d) {
    return make(LatticePoint::unit(d, 0), LatticePoint::unit(d, 1));
  }

  const LatticePoint& a() const { return a_; }
  const LatticePoint& b() const { return b_; }
  std::size_t dim() const { return a_.dim(); }
  i128 det() const { return det_; }
  i128 gram_aa() const { return aa_; }
  i128 gram_ab() const { return ab_; }
  i128 gram_bb() const { return bb_; }

  /// det * |z_{a,b}|^2.
  i128 inplane_norm2_num(const LatticePoint& z) const {
    const i128 za = z.dot(a_), zb = z.dot(b_);
    return bb_ * za * za - 2 * ab_ * za * zb + aa_ * zb * zb;
  }
  Rational inplane_norm2(const LatticePoint& z) const {
    return Rational::from_wide(inplane_norm2_num(z), det_);
  }

  /// det * z_{a,b}, as an integer vector.
  std::vector<i128> scaled_projection(const LatticePoint& z) const {
    const i128 za = z.dot(a_), zb = z.dot(b_);
    const i128 s = bb_ * za - ab_ * zb;
    const i128 t = aa_ * zb - ab_ * za;
    std::vector<i128> out(dim());
    for (std::size_t i = 0; i < dim(); ++i) out[i] = s * a_[i] + t * b_[i];
    return out;
  }

  bool operator==(const Plane& o) const { return a_ == o.a_ && b_ == o.b_; }

 private:
  LatticePoint a_, b_;
  i128 aa_ = 0, ab_ = 0, bb_ = 0, det_ = 0;
};

/// A point with rational coordinates num / den.
struct RationalPoint {
  LatticePoint num;
  std::int64_t den = 1;

  static RationalPoint zero(std::size_t d) { return {LatticePoint(d), 1}; }
  static RationalPoint of(const LatticePoint& p) { return {p, 1}; }
};

/// S_1, ..., S_J: points grouped by exact squared distance to the origin
/// (in-plane when a plane is given), ordered by strictly decreasing norm.
/// Within a shell points are in lexicographic order.
struct ShellDecomposition {
  std::vector<std::vector<LatticePoint>> shells;
  std::vector<Rational> norms2;

  std::size_t size() const { return shells.size(); }
  bool empty() const { return shells.empty(); }
};

namespace detail {

/// Numerator of the squared (in-plane) distance of z to origin, over the
/// common denominator returned by shell_denominator().
inline i128 shell_norm_num(const LatticePoint& z, const RationalPoint& origin,
                           const std::optional<Plane>& plane) {
  LatticePoint w = origin.den * z - origin.num;
  return plane ? plane->inplane_norm2_num(w) : w.norm2();
}

inline i128 shell_denominator(const RationalPoint& origin, const std::optional<Plane>& plane) {
  const i128 d2 = static_cast<i128>(origin.den) * origin.den;
  return plane ? d2 * plane->det() : d2;
}

}  // namespace detail

inline ShellDecomposition build_shells(std::vector<LatticePoint> points,
                                       const RationalPoint& origin,
                                       const std::optional<Plane>& plane = std::nullopt) {
  if (origin.den <= 0) throw PreconditionError("origin denominator must be positive");
  ShellDecomposition out;
  if (points.empty()) return out;
  for (const auto& p : points) {
    p.require_same_dim(origin.num);
    if (plane) p.require_same_dim(plane->a());
  }
  std::map<i128, std::vector<LatticePoint>, std::greater<>> groups;
  for (auto& p : points) {
    const i128 key = detail::shell_norm_num(p, origin, plane);
    groups[key].push_back(std::move(p));
  }
  const i128 den = detail::shell_denominator(origin, plane);
  for (auto& [key, pts] : groups) {
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
      throw PreconditionError("build_shells: duplicate point " + pts.front().to_string());
    out.norms2.push_back(Rational::from_wide(key, den));
    out.shells.push_back(std::move(pts));
  }
  return out;
}

inline ShellDecomposition build_shells(std::vector<LatticePoint> points) {
  if (points.empty()) return {};
  const auto d = points.front().dim();
  return build_shells(std::move(points), RationalPoint::zero(d));
}

// ---------------------------------------------------------------------------
// Farey points and arithmetic sieves

/// F_n for d = 2: the reduced fractions p/q in [0, 1) with 0 < q <= n.
/// Higher dimensions are exposed only through farey_count().
struct FareySet {
  std::int64_t n = 0;
  std::size_t d = 2;
  std::vector<std::vector<Rational>> points;  // (d-1)-tuples, sorted
};

inline FareySet farey_set(std::int64_t n, std::size_t d = 2) {
  if (n < 1) throw PreconditionError("Farey level must be >= 1");
  if (d != 2) throw PreconditionError("farey_set materializes d = 2 only; use farey_count");
  FareySet f;
  f.n = n;
  f.d = d;
  for (std::int64_t q = 1; q <= n; ++q)
    for (std::int64_t p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) f.points.push_back({Rational(p, q)});
  std::sort(f.points.begin(), f.points.end());
  return f;
}

/// Moebius function mu(1..n) by an Eratosthenes-style sieve.
inline std::vector<int> mobius_table(std::int64_t n) {
  std::vector<int> mu(static_cast<std::size_t>(n) + 1, 1);
  std::vector<bool> composite(mu.size(), false);
  if (n >= 0) mu[0] = 0;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    for (std::int64_t k = p; k <= n; k += p) {
      if (k > p) composite[k] = true;
      mu[k] = -mu[k];
    }
    if (p <= n / p)
      for (std::int64_t k = p * p; k <= n; k += p * p) mu[k] = 0;
  }
  return mu;
}

/// Euler totient phi(0..n) by the linear sieve.
inline std::vector<std::int64_t> totient_table(std::int64_t n) {
  std::vector<std::int64_t> phi(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> primes;
  if (n >= 1) phi[1] = 1;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (phi[i] == 0) {
      phi[i] = i - 1;
      primes.push_back(i);
    }
    for (std::int64_t p : primes) {
      if (p * i > n) break;
      if (i % p == 0) {
        phi[p * i] = phi[i] * p;
        break;
      }
      phi[p * i] = phi[i] * (p - 1);
    }
  }
  return phi;
}

/// sum_{q <= n} phi(q).
inline std::int64_t totient_sum(std::int64_t n) {
  const auto phi = totient_table(n);
  return std::accumulate(phi.begin(), phi.end(), std::int64_t{0});
}

/// #F_n in dimension d. Counts (p, q) in Z^{d-1} x [1, n] with 0 <= p_i < q
/// and gcd(p, q) = 1 by Moebius inversion of
///   C(m) = sum_{q <= m} q^{d-1} = sum_g #F_{floor(m/g)}.
inline i128 farey_count(std::int64_t n, std::size_t d = 2) {
  if (n < 1) throw PreconditionError("Farey level must be >= 1");
  if (d < 2) throw PreconditionError("dimension must be >= 2");
  std::vector<i128> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t q = 1; q <= n; ++q) {
    i128 pw = 1;
    for (std::size_t k = 0; k + 1 < d; ++k) pw *= q;
    prefix[q] = prefix[q - 1] + pw;
  }
  const auto mu = mobius_table(n);
  i128 total = 0;
  for (std::int64_t k = 1; k <= n; ++k)
    if (mu[k] != 0) total += mu[k] * prefix[n / k];
  return total;
}

}  // namespace lxray
