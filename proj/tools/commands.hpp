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

// Command implementations behind the lxray CLI. Kept free of argument
// parsing so they can be driven in-process.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lxray/io.hpp"
#include "lxray/lxray.hpp"

namespace lxray::cli {

using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kPrecondition = 2,
  kBudget = 3,
  kMalformed = 4,
};

/// Maps a library exception to the documented exit code.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const FormatError*>(&e)) return kMalformed;
  if (dynamic_cast<const BudgetError*>(&e)) return kBudget;
  if (dynamic_cast<const PreconditionError*>(&e)) return kPrecondition;
  return kFailure;
}

/// "1,1,0" -> (1,1,0).
inline LatticePoint parse_vector(const std::string& s) {
  std::vector<std::int64_t> c;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      c.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw PreconditionError("bad integer vector '" + s + "'");
    }
  }
  if (c.empty()) throw PreconditionError("empty integer vector");
  return LatticePoint(std::move(c));
}

/// Smallest power-of-two-denominator rational r with floor(r^2) == m.
inline Rational radius_for_norm2(u128 m) {
  const u128 s = isqrt(m);
  if (s * s == m) return Rational(static_cast<std::int64_t>(s));
  for (std::int64_t q = 2;; q *= 2) {
    const u128 qq = static_cast<u128>(q) * q;
    u128 p = isqrt(m * qq);
    if (p * p < m * qq) ++p;
    if (p * p < (m + 1) * qq) return Rational(static_cast<std::int64_t>(p), q);
  }
}

// ---------------------------------------------------------------------------
// phantom

struct PhantomOptions {
  std::string kind = "point";  // point | disc | checker | random-int
  std::size_t d = 2;
  std::string r = "1";
  std::uint64_t seed = 0;
  std::optional<std::string> disc_radius;  // default 5r/8
};

/// point: 1 at the origin. disc: 1 where |z| <= disc radius, 0 elsewhere on
/// B_r. checker: 1 where the coordinate sum is even, 0 elsewhere.
/// random-int: uniform integers in [-9, 9] on B_r from mt19937_64(seed).
inline GridFunction make_phantom(const PhantomOptions& o) {
  const Rational r = Rational::parse(o.r);
  if (r.is_negative()) throw PreconditionError("phantom radius must be >= 0");
  GridFunction f(o.d, r);
  const auto pts = enumerate_ball(o.d, r);
  if (o.kind == "point") {
    f.set(LatticePoint(o.d), 1.0);
  } else if (o.kind == "disc") {
    const Rational rd = o.disc_radius ? Rational::parse(*o.disc_radius) : r * Rational(5, 8);
    const u128 lim = rd.floor_square();
    for (const auto& z : pts) f.set(z, static_cast<u128>(z.norm2()) <= lim ? 1.0 : 0.0);
  } else if (o.kind == "checker") {
    for (const auto& z : pts) {
      std::int64_t s = 0;
      for (auto c : z.coords()) s += c;
      f.set(z, (s % 2 == 0) ? 1.0 : 0.0);
    }
  } else if (o.kind == "random-int") {
    std::mt19937_64 rng(o.seed);
    for (const auto& z : pts) f.set(z, static_cast<double>(static_cast<std::int64_t>(rng() % 19) - 9));
  } else {
    throw PreconditionError("unknown phantom kind '" + o.kind + "'");
  }
  return f;
}

// ---------------------------------------------------------------------------
// forward

struct ForwardOptions {
  /// {"tstar"} | {"tstar-plane", A, B} | {"annulus", ALPHA, BETA} | {"free", DIRFILE}
  std::vector<std::string> family = {"tstar"};
  /// Optional plane for annulus families: {A, B}.
  std::vector<std::string> plane;
  /// {} | {"const", C} | {"cell-chord"}
  std::vector<std::string> weight;
  bool continuous = false;
};

inline std::optional<WeightModel> parse_weight(const std::vector<std::string>& w) {
  if (w.empty()) return std::nullopt;
  if (w[0] == "const") {
    if (w.size() != 2) throw PreconditionError("--weight const needs a value");
    try {
      return WeightModel::constant(std::stod(w[1]));
    } catch (const std::invalid_argument&) {
      throw PreconditionError("bad weight constant '" + w[1] + "'");
    }
  }
  if (w[0] == "cell-chord" && w.size() == 1) return WeightModel::cell_chord();
  throw PreconditionError("unknown weight '" + w[0] + "'");
}

inline Sinogram run_forward(const GridFunction& f, const ForwardOptions& o) {
  if (o.family.empty()) throw PreconditionError("--family is required");
  const auto weight = parse_weight(o.weight);
  if (weight && o.continuous) throw PreconditionError("--weight and --continuous are exclusive");
  const std::size_t d = f.dim();
  const std::string& kind = o.family[0];

  std::optional<Plane> plane;
  std::vector<FamilyEntry> family;
  FamilyDescriptor desc;
  if (!o.plane.empty()) {
    if (o.plane.size() != 2) throw PreconditionError("--plane needs A and B");
    plane = Plane::make(parse_vector(o.plane[0]), parse_vector(o.plane[1]));
  }
  if (kind == "tstar") {
    if (o.family.size() != 1) throw PreconditionError("--family tstar takes no arguments");
    family = family_Tstar(enumerate_ball(d, f.support_radius()), plane);
    desc = FamilyDescriptor::tstar(plane);
  } else if (kind == "tstar-plane") {
    if (o.family.size() != 3) throw PreconditionError("--family tstar-plane needs A and B");
    plane = Plane::make(parse_vector(o.family[1]), parse_vector(o.family[2]));
    family = family_Tstar(enumerate_ball(d, f.support_radius()), plane);
    desc = FamilyDescriptor::tstar(plane);
  } else if (kind == "annulus") {
    if (o.family.size() != 3) throw PreconditionError("--family annulus needs ALPHA and BETA");
    const Rational alpha = Rational::parse(o.family[1]), beta = Rational::parse(o.family[2]);
    family = family_Tstar(annulus_points(d, f.support_radius(), alpha, beta, plane), plane);
    desc = FamilyDescriptor::annulus(alpha, beta, plane);
  } else if (kind == "free") {
    if (o.family.size() != 2) throw PreconditionError("--family free needs a direction file");
    for (const auto& [z, t] : io::directions_from_string(io::read_file(o.family[1]))) {
      if (z.dim() != d) throw FormatError("direction file dimension does not match the grid");
      family.push_back({z, Ray{z, t}});
    }
    desc = FamilyDescriptor::free_list();
  } else {
    throw PreconditionError("unknown family '" + kind + "'");
  }
  if (o.continuous) return continuous_sinogram(CellField{f}, family, desc);
  return forward_family(f, family, desc, weight);
}

// ---------------------------------------------------------------------------
// recon

struct ReconOptions {
  std::vector<std::string> weight;
  std::optional<std::string> one_point;  // direction file
  std::optional<std::string> r;          // support radius; inferred when absent
  std::size_t iterate = 0;
  bool layer = false;
};

struct ReconOutput {
  GridFunction f;
  std::vector<double> residuals;  // one per iteration when iterating
};

inline ReconOutput run_recon(const Sinogram& g, std::size_t d, const ReconOptions& o) {
  const auto weight = parse_weight(o.weight);
  std::vector<LatticePoint> pts;
  u128 max_norm2 = 0;
  auto note = [&](const LatticePoint& z) {
    if (z.dim() != d) throw FormatError("point dimension does not match \"d\"");
    max_norm2 = std::max(max_norm2, static_cast<u128>(z.norm2()));
  };

  if (o.one_point) {
    const auto dirs = io::directions_from_string(io::read_file(*o.one_point));
    for (const auto& [z, t] : dirs) note(z);
    const Rational r = o.r ? Rational::parse(*o.r) : radius_for_norm2(max_norm2);
    return {recon_one_point(g, dirs, r, weight), {}};
  }

  if (g.family.kind == FamilyDescriptor::Kind::free)
    throw PreconditionError("shell reconstruction needs a tstar or tstar_plane family");
  for (const auto& e : g.rays) {
    note(e.z);
    pts.push_back(e.z);
  }
  const Rational r = o.r ? Rational::parse(*o.r) : radius_for_norm2(max_norm2);
  const ReconPlan plan = make_plan(pts, d, r, g.family.plane, weight);
  for (const auto& e : g.rays)
    if (plan.rays.at(e.z).key() != e.ray.key())
      throw FormatError("line stored for " + e.z.to_string() + " is not gamma_z");

  if (g.family.alpha) {
    if (o.iterate || o.layer) throw PreconditionError("annulus data supports shell recursion only");
    return {recon_annulus(g, *g.family.alpha, *g.family.beta, plan), {}};
  }
  if (o.iterate > 0) {
    const GridFunction f1 = layer_recon(g, plan);
    auto res = iterate_recon(g, plan, f1, o.iterate);
    return {res.iterates.back(), res.residuals};
  }
  if (o.layer) return {layer_recon(g, plan), {}};
  return {weight ? recon_shells_weighted(g, plan) : recon_shells(g, plan), {}};
}

inline std::string residuals_csv(const std::vector<double>& residuals) {
  std::ostringstream os;
  os << "iteration,residual\n";
  for (std::size_t i = 0; i < residuals.size(); ++i)
    os << (i + 1) << "," << json(residuals[i]).dump() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// count

struct CountResult {
  json report;
  std::string table;
  bool passed = true;
};

inline std::string table_of(const json& j) {
  std::ostringstream os;
  for (const auto& [k, v] : j.items())
    os << std::left << std::setw(16) << k << (v.is_string() ? v.get<std::string>() : v.dump())
       << "\n";
  return os.str();
}

inline CountResult count_tmin(const Rational& r, std::size_t d) {
  json j;
  j["kind"] = "tmin";
  j["r"] = r.to_string();
  j["d"] = d;
  j["count"] = count_Tmin(r, d);
  j["through_origin"] = count_Tmin_through_origin(r, d);
  j["N_r"] = ball_count(d, r);
  j["passed"] = true;
  return {j, table_of(j), true};
}

inline CountResult count_bounds(const Rational& r) {
  const CountReport rep = verify_lower_bound_chain(r);
  json j;
  j["kind"] = "bounds";
  j["r"] = rep.r.to_string();
  j["d"] = rep.d;
  j["count"] = rep.count;
  j["lower_bound"] = rep.lower_bound;
  j["upper_bound"] = rep.upper_bound;
  j["passed"] = rep.passed;
  return {j, table_of(j), rep.passed};
}

inline CountResult count_farey(std::int64_t n, std::size_t d) {
  json j;
  j["kind"] = "farey";
  j["n"] = n;
  j["d"] = d;
  const auto count = static_cast<std::int64_t>(farey_count(n, d));
  j["count"] = count;
  bool passed = true;
  if (d == 2) {
    const std::int64_t oracle = totient_sum(n);
    j["totient_sum"] = oracle;
    j["ratio"] = farey_asymptotic_report(n);
    passed = oracle == count;
  }
  j["passed"] = passed;
  return {j, table_of(j), passed};
}

inline CountResult count_separation(std::int64_t R, std::size_t d) {
  const SeparationReport rep = verify_separation_report(R, d);
  json j;
  j["kind"] = "separation";
  j["R"] = rep.R;
  j["d"] = rep.d;
  j["directions"] = rep.directions;
  j["checks"] = rep.checks;
  j["equality_cases"] = rep.equality_cases;
  j["min_value"] = to_string(rep.min_value);
  j["passed"] = rep.passed;
  return {j, table_of(j), rep.passed};
}

}  // namespace lxray::cli
