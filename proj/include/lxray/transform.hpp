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
 * @file transform.hpp
 * @brief Forward discrete X-ray transforms.
 *
 *   P f(gamma)   = sum_{y in gamma ∩ Z^d} f(y)
 *   P_W f(gamma) = sum_{y in gamma ∩ Z^d} W(y, dir gamma) f(y)
 *
 * f is supported in the closed ball B_r, so only the lattice points of the
 * ray inside B_r are visited. Values are doubles; integer-valued f with
 * magnitudes below 2^40 project exactly.
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lxray/detail/parallel.hpp"
#include "lxray/error.hpp"
#include "lxray/lattice.hpp"
#include "lxray/rational.hpp"
#include "lxray/rays.hpp"

namespace lxray {

/// Finitely supported real function on Z^d with supp f ⊆ B_r. Unstored
/// points read as 0.
class GridFunction {
 public:
  GridFunction(std::size_t d, Rational support_radius) : d_(d), r_(support_radius) {
    if (d < 2) throw PreconditionError("dimension must be >= 2");
    if (r_.is_negative()) throw PreconditionError("negative support radius");
  }

  std::size_t dim() const { return d_; }
  const Rational& support_radius() const { return r_; }
  const std::map<LatticePoint, double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  bool in_support_ball(const LatticePoint& z) const {
    return z.dim() == d_ && static_cast<u128>(z.norm2()) <= r_.floor_square();
  }

  void set(const LatticePoint& z, double v) {
    if (z.dim() != d_) throw PreconditionError("dimension mismatch in GridFunction::set");
    if (!in_support_ball(z))
      throw PreconditionError("point " + z.to_string() + " outside the support ball r=" +
                              r_.to_string());
    values_[z] = v;
  }

  double operator()(const LatticePoint& z) const {
    auto it = values_.find(z);
    return it == values_.end() ? 0.0 : it->second;
  }
  bool contains(const LatticePoint& z) const { return values_.count(z) != 0; }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  std::size_t d_;
  Rational r_;
  std::map<LatticePoint, double> values_;
};

/// Length of the chord of a line with direction theta through the center of
/// a unit cube: |prim| / max_i |prim_i|.
inline double center_chord(const Direction& theta) {
  std::int64_t m = 0;
  for (std::int64_t v : theta.prim().coords()) m = std::max(m, v < 0 ? -v : v);
  return std::sqrt(static_cast<double>(theta.norm2())) / static_cast<double>(m);
}

/// W(y, theta). W must not vanish at any queried (y, theta).
class WeightModel {
 public:
  struct Constant {
    double c;
  };
  using TableKey = std::pair<LatticePoint, Direction>;
  struct Table {
    std::map<TableKey, double> entries;
  };
  /// W(y, theta) = |gamma ∩ U_y| for gamma through y with direction theta.
  struct CellChord {};
  struct Function {
    std::function<double(const LatticePoint&, const Direction&)> fn;
  };

  static WeightModel constant(double c) {
    if (c == 0.0) throw ZeroWeightError("constant weight must be nonzero");
    return WeightModel(Constant{c});
  }
  static WeightModel table(std::map<TableKey, double> entries) {
    return WeightModel(Table{std::move(entries)});
  }
  static WeightModel cell_chord() { return WeightModel(CellChord{}); }
  static WeightModel function(std::function<double(const LatticePoint&, const Direction&)> fn) {
    return WeightModel(Function{std::move(fn)});
  }

  bool is_constant() const { return std::holds_alternative<Constant>(kind_); }
  bool is_cell_chord() const { return std::holds_alternative<CellChord>(kind_); }
  bool is_table() const { return std::holds_alternative<Table>(kind_); }
  std::optional<double> constant_value() const {
    if (auto* c = std::get_if<Constant>(&kind_)) return c->c;
    return std::nullopt;
  }

  /// Evaluates W; throws ZeroWeightError on a zero and PreconditionError on a
  /// table miss.
  double operator()(const LatticePoint& y, const Direction& theta) const {
    const double w = std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Constant>) {
            return k.c;
          } else if constexpr (std::is_same_v<K, Table>) {
            auto it = k.entries.find({y, theta});
            if (it == k.entries.end())
              throw PreconditionError("weight table has no entry for " + y.to_string());
            return it->second;
          } else if constexpr (std::is_same_v<K, CellChord>) {
            return center_chord(theta);
          } else {
            return k.fn(y, theta);
          }
        },
        kind_);
    if (w == 0.0)
      throw ZeroWeightError("weight vanishes at " + y.to_string());
    return w;
  }

 private:
  using Kind = std::variant<Constant, Table, CellChord, Function>;
  explicit WeightModel(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Describes which rays a sinogram holds.
struct FamilyDescriptor {
  enum class Kind { tstar, tstar_plane, free };
  Kind kind = Kind::free;
  std::optional<Plane> plane;  // tstar_plane only
  std::optional<Rational> alpha, beta;

  static FamilyDescriptor tstar(const std::optional<Plane>& plane = std::nullopt) {
    FamilyDescriptor f;
    f.kind = plane ? Kind::tstar_plane : Kind::tstar;
    f.plane = plane;
    return f;
  }
  static FamilyDescriptor annulus(const Rational& alpha, const Rational& beta,
                                  const std::optional<Plane>& plane = std::nullopt) {
    FamilyDescriptor f = tstar(plane);
    f.alpha = alpha;
    f.beta = beta;
    return f;
  }
  static FamilyDescriptor free_list() { return {}; }
};

/// Transform values indexed by line, plus the z -> ray association of the
/// family that produced them.
struct Sinogram {
  FamilyDescriptor family;
  std::map<RayKey, double> entries;
  std::vector<FamilyEntry> rays;

  std::size_t size() const { return entries.size(); }

  double at(const RayKey& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) {
      std::ostringstream os;
      os << "sinogram has no entry for line " << key;
      throw MissingEntryError(os.str());
    }
    return it->second;
  }
};

/// Discrete transform along one ray.
inline double forward(const GridFunction& f, const Ray& ray) {
  if (ray.dim() != f.dim()) throw PreconditionError("ray dimension does not match f");
  double s = 0.0;
  for (const auto& y : lattice_points_on_ray(ray, f.support_radius())) s += f(y);
  return s;
}

/// Weighted discrete transform along one ray.
inline double forward_weighted(const GridFunction& f, const Ray& ray, const WeightModel& w) {
  if (ray.dim() != f.dim()) throw PreconditionError("ray dimension does not match f");
  double s = 0.0;
  for (const auto& y : lattice_points_on_ray(ray, f.support_radius())) s += w(y, ray.dir) * f(y);
  return s;
}

/// Projects f along every ray of a family. Rays sharing a line produce one
/// entry. Parallel across rays; assembly is keyed, so deterministic.
inline Sinogram forward_family(const GridFunction& f, const std::vector<FamilyEntry>& family,
                               FamilyDescriptor descriptor = FamilyDescriptor::free_list(),
                               const std::optional<WeightModel>& weight = std::nullopt) {
  std::vector<double> vals(family.size());
  detail::parallel_chunks(family.size(), [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      vals[i] = weight ? forward_weighted(f, family[i].ray, *weight) : forward(f, family[i].ray);
  });
  Sinogram g;
  g.family = std::move(descriptor);
  g.rays = family;
  for (std::size_t i = 0; i < family.size(); ++i) g.entries.emplace(family[i].ray.key(), vals[i]);
  return g;
}

/// Groups the supported points of f by the line through them with direction
/// theta and sums f over each group: the coefficient of the Dirac mass at
/// each projected lattice point when f is a sum of deltas on Z^d.
inline std::map<RayKey, double> project_and_bin(const GridFunction& f, const Direction& theta) {
  if (theta.dim() != f.dim()) throw PreconditionError("direction dimension does not match f");
  std::map<RayKey, double> bins;
  for (const auto& [y, v] : f.values()) bins[Ray{y, theta}.key()] += v;
  return bins;
}

}  // namespace lxray
