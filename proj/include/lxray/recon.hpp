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
 * @file recon.hpp
 * @brief Exact non-overdetermined inversions of the discrete X-ray transform.
 *
 * Shell recursion. Points of each slice z + span{a, b} are grouped into
 * shells S_1, ..., S_J by decreasing in-plane norm. Every lattice point of
 * gamma_z inside B_r other than z has strictly larger in-plane norm, so
 *
 *   f(z) = W(z)^{-1} ( g(gamma_z) - sum_{zeta in gamma_z ∩ B_r, zeta != z} W(zeta) f(zeta) )
 *
 * only reads values recovered from earlier shells. One line per point is
 * consumed.
 *
 * One-point formula. If |prim theta|^2 > 4 r^2 the line through z with
 * direction theta meets B_r ∩ Z^d only at z, and f(z) = W(z)^{-1} g.
 */

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>
#include <vector>

#include "lxray/error.hpp"
#include "lxray/lattice.hpp"
#include "lxray/rational.hpp"
#include "lxray/rays.hpp"
#include "lxray/transform.hpp"

namespace lxray {

/// Target points, their shells per slice, and the ray assigned to each.
struct ReconPlan {
  std::size_t d = 2;
  Rational radius;
  std::optional<Plane> plane;  // nullopt: standard family span{e_1, e_2}
  Plane geometry;              // plane used for in-plane norms and slices
  std::vector<LatticePoint> points;
  std::map<SliceKey, ShellDecomposition> slices;
  std::map<LatticePoint, Ray> rays;
  std::optional<WeightModel> weight;

  std::size_t size() const { return points.size(); }
};

/// Builds a plan over arbitrary points of B_r (sorted, deduplicated).
inline ReconPlan make_plan(std::vector<LatticePoint> points, std::size_t d, const Rational& radius,
                           const std::optional<Plane>& plane = std::nullopt,
                           std::optional<WeightModel> weight = std::nullopt) {
  ReconPlan plan;
  plan.d = d;
  plan.radius = radius;
  plan.plane = plane;
  plan.geometry = plane ? *plane : Plane::standard(d);
  if (plan.geometry.dim() != d) throw PreconditionError("plane dimension does not match d");
  plan.weight = std::move(weight);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const u128 r2 = radius.floor_square();
  for (const auto& z : points) {
    if (z.dim() != d) throw PreconditionError("plan point has the wrong dimension");
    if (static_cast<u128>(z.norm2()) > r2)
      throw PreconditionError("plan point " + z.to_string() + " outside B_r");
    plan.rays.emplace(z, gamma_z(z, plane));
  }
  for (auto& [key, pts] : group_slices(points, plan.geometry))
    plan.slices.emplace(key, build_shells(std::move(pts), RationalPoint::zero(d), plan.geometry));
  plan.points = std::move(points);
  return plan;
}

/// Plan over all of B_r ∩ Z^d.
inline ReconPlan ball_plan(std::size_t d, const Rational& r,
                           const std::optional<Plane>& plane = std::nullopt,
                           std::optional<WeightModel> weight = std::nullopt) {
  return make_plan(enumerate_ball(d, r), d, r, plane, std::move(weight));
}

/// Plan over the annulus alpha <= |z_{a,b}| <= beta inside B_r.
inline ReconPlan annulus_plan(std::size_t d, const Rational& r, const Rational& alpha,
                              const Rational& beta,
                              const std::optional<Plane>& plane = std::nullopt,
                              std::optional<WeightModel> weight = std::nullopt) {
  return make_plan(annulus_points(d, r, alpha, beta, plane), d, r, plane, std::move(weight));
}

/// The family T* restricted to a plan's points, in point order.
inline std::vector<FamilyEntry> plan_family(const ReconPlan& plan) {
  std::vector<FamilyEntry> out;
  out.reserve(plan.points.size());
  for (const auto& z : plan.points) out.push_back({z, plan.rays.at(z)});
  return out;
}

/// Lines read and points written by one reconstruction.
struct ReconStats {
  std::set<RayKey> keys_used;
  std::size_t points_recovered = 0;
};

namespace detail {

template <typename Weight>
GridFunction shell_sweep(const Sinogram& g, const ReconPlan& plan, Weight&& weight,
                         ReconStats* stats) {
  GridFunction f(plan.d, plan.radius);
  std::unordered_set<LatticePoint, LatticePointHash> in_plan(plan.points.begin(),
                                                             plan.points.end());
  for (const auto& [slice, shells] : plan.slices) {
    for (const auto& shell : shells.shells) {
      for (const auto& z : shell) {
        const Ray& ray = plan.rays.at(z);
        const RayKey key = ray.key();
        double acc = g.at(key);
        if (stats) stats->keys_used.insert(key);
        const i128 nz = plan.geometry.inplane_norm2_num(z);
        for (const auto& zeta : lattice_points_on_ray(ray, plan.radius)) {
          if (zeta == z) continue;
          if (plan.geometry.inplane_norm2_num(zeta) <= nz)
            throw PlanError("point " + zeta.to_string() + " on gamma_" + z.to_string() +
                            " is not farther from the slice origin");
          if (!f.contains(zeta)) {
            throw PlanError(in_plan.count(zeta)
                                ? "point " + zeta.to_string() + " not yet recovered"
                                : "point " + zeta.to_string() + " on gamma_" + z.to_string() +
                                      " is not covered by the plan");
          }
          acc -= weight(zeta, ray.dir) * f(zeta);
        }
        f.set(z, acc / weight(z, ray.dir));
        if (stats) ++stats->points_recovered;
      }
    }
  }
  return f;
}

}  // namespace detail

/// Unweighted shell recursion over every slice of the plan.
inline GridFunction recon_shells(const Sinogram& g, const ReconPlan& plan,
                                 ReconStats* stats = nullptr) {
  return detail::shell_sweep(
      g, plan, [](const LatticePoint&, const Direction&) { return 1.0; }, stats);
}

/// Weighted shell recursion; uses plan.weight.
inline GridFunction recon_shells_weighted(const Sinogram& g, const ReconPlan& plan,
                                          ReconStats* stats = nullptr) {
  if (!plan.weight) throw PreconditionError("recon_shells_weighted needs a weight model");
  const WeightModel& w = *plan.weight;
  return detail::shell_sweep(
      g, plan, [&w](const LatticePoint& y, const Direction& t) { return w(y, t); }, stats);
}

/// Recovers f on the annulus alpha <= |z_{a,b}| <= beta from the lines of its
/// points only. Requires beta >= r.
inline GridFunction recon_annulus(const Sinogram& g, const Rational& alpha, const Rational& beta,
                                  const ReconPlan& plan, ReconStats* stats = nullptr) {
  if (beta < plan.radius)
    throw PreconditionError("annulus reconstruction needs beta >= r (beta=" + beta.to_string() +
                            ", r=" + plan.radius.to_string() + ")");
  std::vector<LatticePoint> pts;
  const auto den = static_cast<u128>(plan.geometry.det());
  for (const auto& z : plan.points) {
    const auto n = static_cast<u128>(plan.geometry.inplane_norm2_num(z));
    if (compare_to_square(n, den, alpha) >= 0 && compare_to_square(n, den, beta) <= 0)
      pts.push_back(z);
  }
  const ReconPlan sub = make_plan(std::move(pts), plan.d, plan.radius, plan.plane, plan.weight);
  return sub.weight ? recon_shells_weighted(g, sub, stats) : recon_shells(g, sub, stats);
}

/// f(z) = W(z, theta(z))^{-1} g(line through z with direction theta(z)),
/// valid when every theta(z) is effectively irrational for r.
inline GridFunction recon_one_point(const Sinogram& g, const std::vector<LatticePoint>& points,
                                    const std::function<Direction(const LatticePoint&)>& theta_of,
                                    const Rational& r,
                                    const std::optional<WeightModel>& weight = std::nullopt,
                                    ReconStats* stats = nullptr) {
  if (points.empty()) return GridFunction(2, r);
  GridFunction f(points.front().dim(), r);
  for (const auto& z : points) {
    const Direction theta = theta_of(z);
    if (!effectively_irrational(theta, r))
      throw PreconditionError("direction " + theta.prim().to_string() +
                              " is not effectively irrational for r=" + r.to_string());
    const RayKey key = Ray{z, theta}.key();
    const double w = weight ? (*weight)(z, theta) : 1.0;
    f.set(z, g.at(key) / w);
    if (stats) {
      stats->keys_used.insert(key);
      ++stats->points_recovered;
    }
  }
  return f;
}

inline GridFunction recon_one_point(const Sinogram& g, const std::map<LatticePoint, Direction>& dirs,
                                    const Rational& r,
                                    const std::optional<WeightModel>& weight = std::nullopt,
                                    ReconStats* stats = nullptr) {
  std::vector<LatticePoint> pts;
  for (const auto& [z, t] : dirs) pts.push_back(z);
  return recon_one_point(
      g, pts, [&](const LatticePoint& z) { return dirs.at(z); }, r, weight, stats);
}

}  // namespace lxray
