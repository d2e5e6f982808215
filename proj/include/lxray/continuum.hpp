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
 * @file continuum.hpp
 * @brief Continuous X-ray transform of piecewise-constant cell fields and
 * disjoint-ball fields, and the reconstructions built on the discrete
 * inversion.
 *
 * A CellField is f(x) = sum_zeta f_dis(zeta) chi_zeta(x), chi_zeta the unit
 * cube centered at zeta. For a line gamma through lattice points,
 *
 *   sum_{zeta in gamma} |gamma ∩ U_zeta| f_dis(zeta)
 *       = P^con f(gamma) - sum_{zeta not in gamma} |gamma ∩ U_zeta| f_dis(zeta),
 *
 * and the chord through a cell center depends only on the direction. That
 * identity drives layer_recon() and iterate_recon().
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lxray/error.hpp"
#include "lxray/lattice.hpp"
#include "lxray/rational.hpp"
#include "lxray/rays.hpp"
#include "lxray/recon.hpp"
#include "lxray/transform.hpp"

namespace lxray {

/// Piecewise-constant field on the unit-cube tiling, one value per cell.
struct CellField {
  GridFunction f_dis;

  std::size_t dim() const { return f_dis.dim(); }
};

/// Length of the line inside the closed unit cube centered at `cell`
/// (slab clipping, double precision). 0 when disjoint.
inline double cell_chord(const Ray& ray, const LatticePoint& cell) {
  const LatticePoint rel = ray.base - cell;  // exact
  const LatticePoint& q = ray.dir.prim();
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rel.dim(); ++i) {
    const auto b = static_cast<double>(rel[i]);
    if (q[i] == 0) {
      if (std::abs(b) > 0.5) return 0.0;
      continue;
    }
    const auto qi = static_cast<double>(q[i]);
    double lo = (-0.5 - b) / qi, hi = (0.5 - b) / qi;
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (t0 >= t1) return 0.0;
  }
  return (t1 - t0) * std::sqrt(static_cast<double>(ray.dir.norm2()));
}

/// A cell crossed by a line and the length of the crossing.
struct CellCrossing {
  LatticePoint cell;
  double length;
};

/// Cells crossed by the line inside the ball of radius `clip` about the
/// origin, in order along the line. Incremental grid walk: the next event is
/// the nearest cell-face crossing over all axes; segments shorter than 1e-12
/// (corner passages) are dropped.
inline std::vector<CellCrossing> traverse_cells(const Ray& ray, double clip) {
  const std::size_t d = ray.dim();
  const LatticePoint& q = ray.dir.prim();
  std::vector<double> b(d), v(d);
  for (std::size_t i = 0; i < d; ++i) {
    b[i] = static_cast<double>(ray.base[i]);
    v[i] = static_cast<double>(q[i]);
  }
  // |b + t v|^2 <= clip^2
  double vv = 0, bv = 0, bb = 0;
  for (std::size_t i = 0; i < d; ++i) {
    vv += v[i] * v[i];
    bv += b[i] * v[i];
    bb += b[i] * b[i];
  }
  const double disc = bv * bv - vv * (bb - clip * clip);
  std::vector<CellCrossing> out;
  if (disc <= 0) return out;
  const double sq = std::sqrt(disc);
  const double t_begin = (-bv - sq) / vv, t_end = (-bv + sq) / vv;
  const double speed = std::sqrt(vv);

  // Next face crossing per axis: faces sit at integer + 1/2.
  std::vector<double> t_next(d, std::numeric_limits<double>::infinity());
  std::vector<double> t_step(d, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < d; ++i) {
    if (v[i] == 0) continue;
    const double x = b[i] + t_begin * v[i];
    const double face = v[i] > 0 ? std::floor(x - 0.5) + 1.5 : std::ceil(x + 0.5) - 1.5;
    t_next[i] = (face - b[i]) / v[i];
    t_step[i] = 1.0 / std::abs(v[i]);
    while (t_next[i] <= t_begin) t_next[i] += t_step[i];
  }
  double t = t_begin;
  while (t < t_end) {
    double t_hit = t_end;
    for (std::size_t i = 0; i < d; ++i) t_hit = std::min(t_hit, t_next[i]);
    if (t_hit - t > 1e-12) {
      const double mid = 0.5 * (t + t_hit);
      LatticePoint cell(d);
      for (std::size_t i = 0; i < d; ++i)
        cell[i] = static_cast<std::int64_t>(std::floor(b[i] + mid * v[i] + 0.5));
      out.push_back({std::move(cell), (t_hit - t) * speed});
    }
    for (std::size_t i = 0; i < d; ++i)
      if (t_next[i] <= t_hit + 1e-15) t_next[i] += t_step[i];
    t = t_hit;
  }
  return out;
}

/// Clip radius covering every cell whose center lies in B_r: r + sqrt(d).
inline double cell_clip_radius(const Rational& r, std::size_t d) {
  return r.to_double() + std::sqrt(static_cast<double>(d));
}

/// P^con f(gamma) for a cell field: sum over traversed cells of value x chord.
inline double forward_continuous(const CellField& field, const Ray& ray) {
  if (ray.dim() != field.dim()) throw PreconditionError("ray dimension does not match field");
  double s = 0.0;
  for (const auto& c : traverse_cells(ray, cell_clip_radius(field.f_dis.support_radius(), ray.dim())))
    s += field.f_dis(c.cell) * c.length;
  return s;
}

/// Continuous projections along a family.
inline Sinogram continuous_sinogram(const CellField& field, const std::vector<FamilyEntry>& family,
                                    FamilyDescriptor descriptor = FamilyDescriptor::free_list()) {
  std::vector<double> vals(family.size());
  detail::parallel_chunks(family.size(), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) vals[i] = forward_continuous(field, family[i].ray);
  });
  Sinogram g;
  g.family = std::move(descriptor);
  g.rays = family;
  for (std::size_t i = 0; i < family.size(); ++i) g.entries.emplace(family[i].ray.key(), vals[i]);
  return g;
}

/// Both sides of the correction identity along gamma_z:
///   lhs = P^dis_W f_dis(gamma_z),  W = cell chord,
///   rhs = P^con f(gamma_z) - sum_{zeta not on gamma_z} f_dis(zeta) |gamma_z ∩ U_zeta|.
inline std::pair<double, double> correction_identity_check(
    const CellField& field, const LatticePoint& z,
    const std::optional<Plane>& plane = std::nullopt) {
  const Ray ray = gamma_z(z, plane);
  const double lhs = forward_weighted(field.f_dis, ray, WeightModel::cell_chord());
  double rhs = forward_continuous(field, ray);
  for (const auto& [zeta, v] : field.f_dis.values())
    if (!ray.contains(zeta)) rhs -= v * cell_chord(ray, zeta);
  return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Disjoint balls

/// f = sum_z f_dis(z) w_z chi(B_{rho_z} + z), balls centered on lattice points
/// with rho_z < 1/2 (hence pairwise disjoint).
class BallField {
 public:
  struct Ball {
    double rho;
    double weight;
    double value;
  };

  explicit BallField(std::size_t d) : d_(d) {}

  void add(const LatticePoint& center, double rho, double weight, double value) {
    if (center.dim() != d_) throw PreconditionError("ball center has the wrong dimension");
    if (!(rho > 0.0 && rho < 0.5)) throw PreconditionError("ball radius must lie in (0, 1/2)");
    if (weight == 0.0) throw ZeroWeightError("ball weight must be nonzero");
    balls_[center] = {rho, weight, value};
  }

  std::size_t dim() const { return d_; }
  const std::map<LatticePoint, Ball>& balls() const { return balls_; }

 private:
  std::size_t d_;
  std::map<LatticePoint, Ball> balls_;
};

namespace detail {

/// |q|^2 * dist(center, line)^2, exact.
inline i128 scaled_dist2(const Ray& ray, const LatticePoint& center) {
  const LatticePoint p = center - ray.base;
  const LatticePoint& q = ray.dir.prim();
  const i128 pq = p.dot(q);
  // |p|^2 |q|^2 - (p.q)^2 can exceed 128 bits only for astronomically far centers.
  return p.norm2() * q.norm2() - pq * pq;
}

}  // namespace detail

/// The ray meets every ball through its center or misses it entirely.
inline bool in_T2(const Ray& ray, const BallField& field) {
  const double qq = static_cast<double>(ray.dir.norm2());
  for (const auto& [c, ball] : field.balls()) {
    const i128 s = detail::scaled_dist2(ray, c);
    if (s == 0) continue;
    if (static_cast<double>(s) / qq <= ball.rho * ball.rho) return false;
  }
  return true;
}

/// P^con f(gamma) for a ball field: sum of chord x weight x value over the
/// balls the line crosses. Rays outside T'' are rejected.
inline double forward_balls(const BallField& field, const Ray& ray) {
  if (ray.dim() != field.dim()) throw PreconditionError("ray dimension does not match field");
  if (!in_T2(ray, field))
    throw PreconditionError("ray grazes a ball off-center (not in T'')");
  const double qq = static_cast<double>(ray.dir.norm2());
  double s = 0.0;
  for (const auto& [c, ball] : field.balls()) {
    const double dist2 = static_cast<double>(detail::scaled_dist2(ray, c)) / qq;
    if (dist2 < ball.rho * ball.rho)
      s += 2.0 * std::sqrt(ball.rho * ball.rho - dist2) * ball.weight * ball.value;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Reconstruction from continuous data

namespace detail {

/// Cells crossed by gamma that are not on gamma, with their chords.
inline std::vector<CellCrossing> off_line_crossings(const Ray& ray, const Rational& r) {
  std::vector<CellCrossing> out;
  for (auto& c : traverse_cells(ray, cell_clip_radius(r, ray.dim())))
    if (!ray.contains(c.cell)) out.push_back({c.cell, cell_chord(ray, c.cell)});
  return out;
}

}  // namespace detail

/// Layer-by-layer approximation f_1:
///   w(z) f_1(z) = g(gamma_z) - sum_{zeta in earlier shells} |gamma_z ∩ U_zeta| f_1(zeta),
/// w(z) = |gamma_z ∩ U_z|. Cross terms with the current and later shells are
/// dropped. "Earlier" means same slice, strictly larger in-plane norm.
inline GridFunction layer_recon(const Sinogram& g, const ReconPlan& plan) {
  GridFunction f(plan.d, plan.radius);
  for (const auto& [slice, shells] : plan.slices) {
    std::map<LatticePoint, double> done;  // this slice, earlier shells
    for (const auto& shell : shells.shells) {
      std::vector<std::pair<LatticePoint, double>> layer;
      for (const auto& z : shell) {
        const Ray& ray = plan.rays.at(z);
        double acc = g.at(ray.key());
        for (const auto& c : traverse_cells(ray, cell_clip_radius(plan.radius, plan.d))) {
          auto it = done.find(c.cell);
          if (it != done.end()) acc -= cell_chord(ray, c.cell) * it->second;
        }
        layer.emplace_back(z, acc / cell_chord(ray, z));
      }
      for (auto& [z, v] : layer) {
        f.set(z, v);
        done.emplace(z, v);
      }
    }
  }
  return f;
}

/// Iterates of the correction scheme and their data residuals.
struct IterationResult {
  std::vector<GridFunction> iterates;  // f_1, ..., f_N
  std::vector<double> residuals;       // ||g - P^con f_i|| over the plan's rays
};

/// L2 misfit between g and the continuous projections of f on the plan rays.
inline double data_residual(const Sinogram& g, const ReconPlan& plan, const GridFunction& f) {
  const CellField field{f};
  double s = 0.0;
  for (const auto& z : plan.points) {
    const Ray& ray = plan.rays.at(z);
    const double e = g.at(ray.key()) - forward_continuous(field, ray);
    s += e * e;
  }
  return std::sqrt(s);
}

/// One correction step:
///   g_i(gamma_z) = g(gamma_z) - sum_{zeta not on gamma_z} f_i(zeta) |gamma_z ∩ U_zeta|,
/// then f_{i+1} inverts the cell-chord weighted discrete transform on g_i.
/// The chord through a cell center depends only on the direction, so this is
/// (P^dis)^{-1}(g_i / w) with w taken per line.
inline IterationResult iterate_recon(const Sinogram& g, const ReconPlan& plan,
                                     const GridFunction& f_init, std::size_t iters) {
  if (iters < 1) throw PreconditionError("iterate_recon needs iters >= 1");
  ReconPlan chord_plan = plan;
  chord_plan.weight = WeightModel::cell_chord();

  std::vector<std::vector<CellCrossing>> off_line(plan.points.size());
  detail::parallel_chunks(plan.points.size(), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      off_line[i] = detail::off_line_crossings(plan.rays.at(plan.points[i]), plan.radius);
  });

  IterationResult out;
  GridFunction current = f_init;
  for (std::size_t it = 0; it < iters; ++it) {
    Sinogram corrected;
    corrected.family = g.family;
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
      const RayKey key = plan.rays.at(plan.points[i]).key();
      double v = g.at(key);
      for (const auto& c : off_line[i]) v -= current(c.cell) * c.length;
      corrected.entries[key] = v;
    }
    current = recon_shells_weighted(corrected, chord_plan);
    out.residuals.push_back(data_residual(g, plan, current));
    out.iterates.push_back(current);
  }
  return out;
}

}  // namespace lxray
