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
 * @file counting.hpp
 * @brief Exhaustive counts of rational lines through ball lattice points and
 * the projection-separation check.
 *
 *  - count_Tmin: lines meeting B_r ∩ Z^d in at least two points.
 *    Bounded below by N_{r/2}(1 + N_{r/2})/2 and above by N_r^2.
 *  - count_Tmin_through_origin: such lines through 0.
 *  - verify_separation: for primitive zeta and z not parallel to zeta,
 *    |zeta|^2 |z|^2 - (z.zeta)^2 >= 1, i.e. the projection of z orthogonal to
 *    zeta has length >= 1/|zeta|.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <unordered_set>
#include <vector>

#include "lxray/detail/parallel.hpp"
#include "lxray/error.hpp"
#include "lxray/lattice.hpp"
#include "lxray/rational.hpp"
#include "lxray/rays.hpp"

namespace lxray {

/// Pair budget for exhaustive line counting; admits r = 64 in d = 2
/// (N_64 = 12853 points).
inline constexpr std::uint64_t kDefaultMaxPairs = 85'000'000;

/// Largest dimension the compact line keys support.
inline constexpr std::size_t kMaxCountDim = 4;

struct CountReport {
  Rational r;
  std::size_t d = 2;
  std::uint64_t count = 0;
  std::uint64_t lower_bound = 0;
  std::uint64_t upper_bound = 0;
  bool passed = false;
};

namespace detail {

using CompactKey = std::array<std::int64_t, 2 * kMaxCountDim>;

struct CompactKeyHash {
  std::size_t operator()(const CompactKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

inline CompactKey compact(const RayKey& k) {
  CompactKey c{};
  const std::size_t d = k.dir.dim();
  for (std::size_t i = 0; i < d; ++i) {
    c[i] = k.dir.prim()[i];
    c[kMaxCountDim + i] = k.reduced_base[i];
  }
  return c;
}

/// z = s * zeta for some real s: every 2x2 minor of [z zeta] vanishes.
inline bool parallel(const LatticePoint& z, const LatticePoint& zeta) {
  for (std::size_t i = 0; i < z.dim(); ++i)
    for (std::size_t j = i + 1; j < z.dim(); ++j)
      if (static_cast<i128>(z[i]) * zeta[j] != static_cast<i128>(z[j]) * zeta[i]) return false;
  return true;
}

inline void check_count_dim(std::size_t d) {
  if (d < 2 || d > kMaxCountDim)
    throw PreconditionError("counting supports 2 <= d <= " + std::to_string(kMaxCountDim));
}

}  // namespace detail

/// #T_r^min by pair enumeration with line-key dedup. Work is split by the
/// first index of the pair; per-worker sets are merged at the end.
inline std::uint64_t count_Tmin(const Rational& r, std::size_t d = 2,
                                std::uint64_t max_pairs = kDefaultMaxPairs) {
  detail::check_count_dim(d);
  const auto pts = enumerate_ball(d, r);
  const std::uint64_t n = pts.size();
  if (n * (n - (n > 0)) / 2 > max_pairs)
    throw BudgetError("count_Tmin: " + std::to_string(n) + " points exceed the pair budget");
  using Set = std::unordered_set<detail::CompactKey, detail::CompactKeyHash>;
  std::vector<Set> partial(detail::chunk_workers(pts.size(), 16));
  // Interleave rows so that workers get similar pair counts.
  const std::size_t workers = partial.size();
  detail::parallel_chunks(
      workers,
      [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t w = b; w < e; ++w)
          for (std::size_t i = w; i < pts.size(); i += workers)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
              partial[w].insert(detail::compact(Ray{pts[i], primitive(pts[j] - pts[i])}.key()));
      },
      1);
  Set all;
  for (auto& s : partial) {
    all.merge(s);
  }
  return all.size();
}

/// #T_{r,0}^min: lines through 0 containing another lattice point of B_r.
inline std::uint64_t count_Tmin_through_origin(const Rational& r, std::size_t d = 2) {
  detail::check_count_dim(d);
  std::set<Direction> dirs;
  for (const auto& z : enumerate_ball(d, r))
    if (!z.is_zero()) dirs.insert(primitive(z));
  return dirs.size();
}

/// N_{r/2}(1 + N_{r/2})/2 < #T_r^min < N_r^2 in d = 2.
inline CountReport verify_lower_bound_chain(const Rational& r,
                                            std::uint64_t max_pairs = kDefaultMaxPairs) {
  if (!(Rational(0) < r)) throw PreconditionError("verify_lower_bound_chain needs r > 0");
  CountReport rep;
  rep.r = r;
  rep.d = 2;
  const std::uint64_t half = ball_count(2, r / Rational(2));
  const std::uint64_t full = ball_count(2, r);
  rep.lower_bound = half * (1 + half) / 2;
  rep.upper_bound = full * full;
  rep.count = count_Tmin(r, 2, max_pairs);
  rep.passed = rep.lower_bound < rep.count && rep.count < rep.upper_bound;
  return rep;
}

struct SeparationReport {
  std::int64_t R = 0;
  std::size_t d = 2;
  std::uint64_t directions = 0;      // primitive zeta checked
  std::uint64_t checks = 0;          // (zeta, z) pairs with z not parallel to zeta
  std::uint64_t equality_cases = 0;  // |zeta|^2 |z|^2 - (z.zeta)^2 == 1
  i128 min_value = 0;
  bool passed = false;
};

/// Exhaustive integer check of the separation estimate over primitive
/// zeta and z in B_R ∩ Z^d (d = 2 or 3).
inline SeparationReport verify_separation_report(std::int64_t R, std::size_t d = 2,
                                                 std::uint64_t max_work = 4'000'000'000ULL) {
  if (d != 2 && d != 3) throw PreconditionError("verify_separation supports d = 2 or 3");
  if (R < 1) throw PreconditionError("verify_separation needs R >= 1");
  // |zeta|^2 |z|^2 <= R^4 must stay far inside 128 bits.
  if (R > (std::int64_t{1} << 24)) throw BudgetError("verify_separation: R too large");
  const auto pts = enumerate_ball(d, Rational(R));
  std::vector<LatticePoint> zetas;
  for (const auto& z : pts)
    if (!z.is_zero() && primitive(z).prim() == z) zetas.push_back(z);
  if (static_cast<double>(zetas.size()) * static_cast<double>(pts.size()) >
      static_cast<double>(max_work))
    throw BudgetError("verify_separation: work budget exceeded");

  struct Partial {
    std::uint64_t checks = 0, eq = 0;
    i128 min_value = -1;
    bool ok = true;
  };
  std::vector<Partial> parts(detail::chunk_workers(zetas.size(), 8));
  detail::parallel_chunks(
      parts.size(),
      [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t w = b; w < e; ++w) {
          Partial& p = parts[w];
          for (std::size_t i = w; i < zetas.size(); i += parts.size()) {
            const LatticePoint& zeta = zetas[i];
            const i128 zz = zeta.norm2();
            for (const auto& z : pts) {
              if (detail::parallel(z, zeta)) continue;
              const i128 dot = z.dot(zeta);
              const i128 val = zz * z.norm2() - dot * dot;
              ++p.checks;
              if (val == 1) ++p.eq;
              if (p.min_value < 0 || val < p.min_value) p.min_value = val;
              if (val < 1) p.ok = false;
            }
          }
        }
      },
      1);
  SeparationReport rep;
  rep.R = R;
  rep.d = d;
  rep.directions = zetas.size();
  rep.passed = true;
  rep.min_value = -1;
  for (const auto& p : parts) {
    rep.checks += p.checks;
    rep.equality_cases += p.eq;
    if (p.min_value >= 0 && (rep.min_value < 0 || p.min_value < rep.min_value))
      rep.min_value = p.min_value;
    rep.passed = rep.passed && p.ok;
  }
  return rep;
}

inline bool verify_separation(std::int64_t R, std::size_t d = 2) {
  return verify_separation_report(R, d).passed;
}

/// #F_n * pi^2 / (3 n^2); tends to 1.
inline double farey_asymptotic_report(std::int64_t n) {
  const auto count = static_cast<double>(farey_count(n, 2));
  const auto nn = static_cast<double>(n);
  return count * std::numbers::pi * std::numbers::pi / (3.0 * nn * nn);
}

/// m distinct rational lines through z: directions e_1 + k e_2, k = 0..m-1.
/// T_r^max is infinite; this enumerates an arbitrarily long prefix of it.
inline std::vector<Ray> tmax_witness(const LatticePoint& z, std::size_t m) {
  if (z.dim() < 2) throw PreconditionError("tmax_witness needs d >= 2");
  std::vector<Ray> out;
  for (std::size_t k = 0; k < m; ++k) {
    LatticePoint v(z.dim());
    v[0] = 1;
    v[1] = static_cast<std::int64_t>(k);
    out.push_back({z, primitive(v)});
  }
  return out;
}

}  // namespace lxray
