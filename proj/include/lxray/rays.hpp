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
 * @file rays.hpp
 * @brief Rational rays: construction, line identity, lattice intersection,
 * and the one-ray-per-point family gamma_z.
 *
 * For a plane span{a, b} and z in Z^d, gamma_z passes through z with
 * direction  -(z.b) a + (z.a) b,  which lies in the plane and is orthogonal
 * to z. Hence z is the point of gamma_z closest to the slice origin, and every
 * other point of gamma_z has strictly larger in-plane norm. When
 * (z.a)^2 + (z.b)^2 = 0 the direction is fixed to primitive(a). The standard
 * family uses a = e_1, b = e_2 and fixes e_1 in the degenerate case.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "lxray/error.hpp"
#include "lxray/lattice.hpp"
#include "lxray/rational.hpp"

namespace lxray {

namespace detail {

inline i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Identity of an unoriented line: its direction plus the unique lattice
/// point base - k*prim with 0 <= base.prim < |prim|^2.
struct RayKey {
  Direction dir;
  LatticePoint reduced_base;

  friend bool operator==(const RayKey&, const RayKey&) = default;
  friend auto operator<=>(const RayKey&, const RayKey&) = default;
  friend std::ostream& operator<<(std::ostream& os, const RayKey& k) {
    return os << "[" << k.reduced_base << " + t" << k.dir << "]";
  }
};

struct RayKeyHash {
  std::size_t operator()(const RayKey& k) const noexcept {
    LatticePointHash h;
    return h(k.dir.prim()) * 31 + h(k.reduced_base);
  }
};

/// Line through a lattice point with a rational direction.
struct Ray {
  LatticePoint base;
  Direction dir;

  std::size_t dim() const { return base.dim(); }

  RayKey key() const {
    const LatticePoint& q = dir.prim();
    const i128 k = detail::floor_div(base.dot(q), dir.norm2());
    return {dir, base - static_cast<std::int64_t>(k) * q};
  }

  /// Exact test: p lies on the line.
  bool contains(const LatticePoint& p) const {
    const LatticePoint w = p - base;
    const LatticePoint& q = dir.prim();
    // w parallel to q iff every 2x2 minor vanishes.
    for (std::size_t i = 0; i < w.dim(); ++i)
      for (std::size_t j = i + 1; j < w.dim(); ++j)
        if (static_cast<i128>(w[i]) * q[j] != static_cast<i128>(w[j]) * q[i]) return false;
    return true;
  }
};

inline Ray make_ray(const LatticePoint& base, const LatticePoint& dir) {
  base.require_same_dim(dir);
  return {base, primitive(dir)};
}

/// gamma_z of the standard family (lines parallel to span{e_1, e_2}).
inline Ray gamma_z(const LatticePoint& z) {
  const std::size_t d = z.dim();
  if (d < 2) throw PreconditionError("gamma_z needs d >= 2");
  if (z[0] == 0 && z[1] == 0) return {z, primitive(LatticePoint::unit(d, 0))};
  LatticePoint v(d);
  v[0] = -z[1];
  v[1] = z[0];
  return {z, primitive(v)};
}

/// gamma_z for lines parallel to span{a, b}.
inline Ray gamma_z_plane(const LatticePoint& z, const Plane& plane) {
  z.require_same_dim(plane.a());
  const i128 za = z.dot(plane.a()), zb = z.dot(plane.b());
  if (za == 0 && zb == 0) return {z, primitive(plane.a())};
  LatticePoint v(z.dim());
  for (std::size_t i = 0; i < z.dim(); ++i)
    v[i] = narrow_i64(-zb * plane.a()[i] + za * plane.b()[i], "gamma_z direction");
  Ray ray{z, primitive(v)};
  if (ray.dir.prim().dot(z) != 0)
    throw Error("gamma_z direction is not orthogonal to z");  // cannot happen
  return ray;
}

inline Ray gamma_z(const LatticePoint& z, const std::optional<Plane>& plane) {
  return plane ? gamma_z_plane(z, *plane) : gamma_z(z);
}

/// Lattice points base + k*prim with |point - center|^2 <= r^2, ordered by k.
/// Solves the integer quadratic in k exactly.
inline std::vector<LatticePoint> lattice_points_on_ray(const Ray& ray, const Rational& r,
                                                       const LatticePoint& center) {
  ray.base.require_same_dim(center);
  const LatticePoint p = ray.base - center;
  const LatticePoint& q = ray.dir.prim();
  const i128 qq = q.norm2(), pq = p.dot(q), pp = p.norm2();
  const i128 R = static_cast<i128>(r.floor_square());
  auto inside = [&](i128 k) { return qq * k * k + 2 * pq * k + pp <= R; };
  // Real roots of qq k^2 + 2 pq k + (pp - R): (-pq +- sqrt(disc)) / qq.
  const i128 disc = pq * pq - qq * (pp - R);
  std::vector<LatticePoint> out;
  if (disc < 0) return out;
  const auto s = static_cast<i128>(isqrt(static_cast<u128>(disc)));
  i128 lo = detail::floor_div(-pq - s, qq);
  i128 hi = detail::floor_div(-pq + s, qq) + 1;
  while (inside(lo - 1)) --lo;
  while (lo <= hi && !inside(lo)) ++lo;
  while (inside(hi + 1)) ++hi;
  while (hi >= lo && !inside(hi)) --hi;
  for (i128 k = lo; k <= hi; ++k)
    out.push_back(ray.base + static_cast<std::int64_t>(k) * q);
  return out;
}

inline std::vector<LatticePoint> lattice_points_on_ray(const Ray& ray, const Rational& r) {
  return lattice_points_on_ray(ray, r, LatticePoint(ray.dim()));
}

/// One entry of a ray family: the point z and the ray assigned to it.
struct FamilyEntry {
  LatticePoint z;
  Ray ray;
};

/// T* restricted to the given points: one gamma_z per point.
inline std::vector<FamilyEntry> family_Tstar(const std::vector<LatticePoint>& points,
                                             const std::optional<Plane>& plane = std::nullopt) {
  std::vector<FamilyEntry> out;
  out.reserve(points.size());
  for (const auto& z : points) out.push_back({z, gamma_z(z, plane)});
  return out;
}

/// det * z^{a,b}: identifies the slice z + span{a, b}.
struct SliceKey {
  LatticePoint key;

  friend bool operator==(const SliceKey&, const SliceKey&) = default;
  friend auto operator<=>(const SliceKey&, const SliceKey&) = default;
};

inline SliceKey slice_key(const LatticePoint& z, const Plane& plane) {
  z.require_same_dim(plane.a());
  const auto proj = plane.scaled_projection(z);
  LatticePoint key(z.dim());
  for (std::size_t i = 0; i < z.dim(); ++i)
    key[i] = narrow_i64(plane.det() * z[i] - proj[i], "slice key");
  return {key};
}

inline std::map<SliceKey, std::vector<LatticePoint>> group_slices(
    const std::vector<LatticePoint>& points, const Plane& plane) {
  std::map<SliceKey, std::vector<LatticePoint>> out;
  for (const auto& z : points) out[slice_key(z, plane)].push_back(z);
  return out;
}

/// |prim|^2 > 4 r^2: any line with this direction meets B_r ∩ Z^d at most
/// once, since two lattice points on it are at least |prim| apart.
inline bool effectively_irrational(const Direction& theta, const Rational& r) {
  return static_cast<u128>(theta.norm2()) > (Rational(2) * r).floor_square();
}

/// Points of B_r ∩ Z^d with alpha <= |z_{a,b}| <= beta (in-plane norm; the
/// standard plane gives sqrt(z_1^2 + z_2^2)).
inline std::vector<LatticePoint> annulus_points(std::size_t d, const Rational& r,
                                                const Rational& alpha, const Rational& beta,
                                                const std::optional<Plane>& plane = std::nullopt) {
  if (alpha.is_negative() || beta < alpha)
    throw PreconditionError("annulus needs 0 <= alpha <= beta");
  const Plane pl = plane ? *plane : Plane::standard(d);
  std::vector<LatticePoint> out;
  for (auto& z : enumerate_ball(d, r)) {
    const auto n = static_cast<u128>(pl.inplane_norm2_num(z));
    const auto den = static_cast<u128>(pl.det());
    if (compare_to_square(n, den, alpha) >= 0 && compare_to_square(n, den, beta) <= 0)
      out.push_back(std::move(z));
  }
  return out;
}

}  // namespace lxray
