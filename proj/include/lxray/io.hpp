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
 * @file io.hpp
 * @brief JSON grid and sinogram files.
 *
 * Grid:
 *   {"d": 2, "r": "5/2", "values": [{"z": [0, 1], "v": 3.0}, ...]}
 * Sinogram:
 *   {"d": 2,
 *    "family": {"kind": "tstar" | "tstar_plane" | "free",
 *               "a": [...], "b": [...],          (tstar_plane)
 *               "alpha": "5", "beta": "20"},     (annulus bounds, optional)
 *    "rays": [{"z": [...], "dir": [...], "base": [...], "v": 1.0}, ...]}
 * Direction lists:
 *   {"d": 2, "rays": [{"z": [...], "dir": [...]}, ...]}
 *
 * Radii are rational strings; values are doubles printed in shortest
 * round-trip form. "dir" is primitive and sign-canonical and "base" is the
 * reduced base of the line, so each line has exactly one spelling.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "lxray/error.hpp"
#include "lxray/lattice.hpp"
#include "lxray/rational.hpp"
#include "lxray/rays.hpp"
#include "lxray/transform.hpp"

namespace lxray::io {

using nlohmann::json;

namespace detail {

inline json point_json(const LatticePoint& p) { return json(p.vec()); }

inline LatticePoint point_from(const json& j, std::size_t d, const char* what) {
  if (!j.is_array() || j.size() != d)
    throw FormatError(std::string(what) + ": expected an integer array of length " +
                      std::to_string(d));
  std::vector<std::int64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw FormatError(std::string(what) + ": non-integer entry");
    c.push_back(v.get<std::int64_t>());
  }
  return LatticePoint(std::move(c));
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad field '") + key + "': " + e.what());
  }
}

inline std::size_t dim_field(const json& j) {
  const auto d = field<std::int64_t>(j, "d");
  if (d < 2) throw FormatError("\"d\" must be >= 2");
  return static_cast<std::size_t>(d);
}

inline double value_field(const json& e) {
  if (!e.contains("v") || !e.at("v").is_number()) throw FormatError("entry without numeric \"v\"");
  return e.at("v").get<double>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Grid files

inline json grid_to_json(const GridFunction& f) {
  json values = json::array();
  for (const auto& [z, v] : f.values()) values.push_back({{"z", detail::point_json(z)}, {"v", v}});
  return {{"d", f.dim()}, {"r", f.support_radius().to_string()}, {"values", std::move(values)}};
}

inline GridFunction grid_from_json(const json& j) {
  const std::size_t d = detail::dim_field(j);
  const Rational r = Rational::parse(detail::field<std::string>(j, "r"));
  if (r.is_negative()) throw FormatError("negative radius");
  GridFunction f(d, r);
  const json& vals = j.contains("values") ? j.at("values") : json::array();
  if (!vals.is_array()) throw FormatError("\"values\" must be an array");
  for (const auto& e : vals) {
    if (!e.is_object() || !e.contains("z")) throw FormatError("grid entry without \"z\"");
    const LatticePoint z = detail::point_from(e.at("z"), d, "z");
    if (f.contains(z)) throw FormatError("duplicate grid point " + z.to_string());
    if (!f.in_support_ball(z)) throw FormatError("grid point " + z.to_string() + " outside B_r");
    f.set(z, detail::value_field(e));
  }
  return f;
}

inline std::string grid_to_string(const GridFunction& f) { return grid_to_json(f).dump(2) + "\n"; }
inline GridFunction grid_from_string(const std::string& s) {
  return grid_from_json(detail::parse_text(s));
}

/// "z_1,...,z_d,v" rows with a header, for plotting tools.
inline std::string grid_to_csv(const GridFunction& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.dim(); ++i) os << "z" << (i + 1) << ",";
  os << "v\n";
  for (const auto& [z, v] : f.values()) {
    for (std::int64_t c : z.coords()) os << c << ",";
    os << json(v).dump() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Sinogram files

inline json family_to_json(const FamilyDescriptor& fam) {
  json j;
  switch (fam.kind) {
    case FamilyDescriptor::Kind::tstar: j["kind"] = "tstar"; break;
    case FamilyDescriptor::Kind::tstar_plane: j["kind"] = "tstar_plane"; break;
    case FamilyDescriptor::Kind::free: j["kind"] = "free"; break;
  }
  if (fam.plane) {
    j["a"] = detail::point_json(fam.plane->a());
    j["b"] = detail::point_json(fam.plane->b());
  }
  if (fam.alpha) j["alpha"] = fam.alpha->to_string();
  if (fam.beta) j["beta"] = fam.beta->to_string();
  return j;
}

inline FamilyDescriptor family_from_json(const json& j, std::size_t d) {
  FamilyDescriptor fam;
  const auto kind = detail::field<std::string>(j, "kind");
  if (kind == "tstar") {
    fam.kind = FamilyDescriptor::Kind::tstar;
  } else if (kind == "tstar_plane") {
    fam.kind = FamilyDescriptor::Kind::tstar_plane;
    if (!j.contains("a") || !j.contains("b")) throw FormatError("tstar_plane family needs a and b");
    try {
      fam.plane = Plane::make(detail::point_from(j.at("a"), d, "a"),
                              detail::point_from(j.at("b"), d, "b"));
    } catch (const PreconditionError& e) {
      throw FormatError(std::string("bad plane: ") + e.what());
    }
  } else if (kind == "free") {
    fam.kind = FamilyDescriptor::Kind::free;
  } else {
    throw FormatError("unknown family kind '" + kind + "'");
  }
  if (j.contains("alpha")) fam.alpha = Rational::parse(detail::field<std::string>(j, "alpha"));
  if (j.contains("beta")) fam.beta = Rational::parse(detail::field<std::string>(j, "beta"));
  if (fam.alpha.has_value() != fam.beta.has_value())
    throw FormatError("annulus bounds need both alpha and beta");
  return fam;
}

/// Emits one entry per line, in family order. A line reached from several
/// points is written once, under the first of them.
inline json sinogram_to_json(const Sinogram& g, std::size_t d) {
  json rays = json::array();
  std::set<RayKey> seen;
  auto emit = [&](const LatticePoint& z, const RayKey& key) {
    if (!seen.insert(key).second) return;
    rays.push_back({{"z", detail::point_json(z)},
                    {"dir", detail::point_json(key.dir.prim())},
                    {"base", detail::point_json(key.reduced_base)},
                    {"v", g.at(key)}});
  };
  for (const auto& e : g.rays) emit(e.z, e.ray.key());
  for (const auto& [key, v] : g.entries) emit(key.reduced_base, key);
  return {{"d", d}, {"family", family_to_json(g.family)}, {"rays", std::move(rays)}};
}

inline Sinogram sinogram_from_json(const json& j) {
  const std::size_t d = detail::dim_field(j);
  Sinogram g;
  if (!j.contains("family")) throw FormatError("missing field 'family'");
  g.family = family_from_json(j.at("family"), d);
  const json& rays = j.contains("rays") ? j.at("rays") : json::array();
  if (!rays.is_array()) throw FormatError("\"rays\" must be an array");
  for (const auto& e : rays) {
    if (!e.is_object() || !e.contains("dir") || !e.contains("base") || !e.contains("z"))
      throw FormatError("sinogram entry needs z, dir, base, v");
    const LatticePoint z = detail::point_from(e.at("z"), d, "z");
    const LatticePoint dir = detail::point_from(e.at("dir"), d, "dir");
    const LatticePoint base = detail::point_from(e.at("base"), d, "base");
    if (dir.is_zero() || primitive(dir).prim() != dir)
      throw FormatError("dir " + dir.to_string() + " is not primitive and canonical");
    const Ray ray{base, primitive(dir)};
    const RayKey key = ray.key();
    if (key.reduced_base != base) throw FormatError("base " + base.to_string() + " is not reduced");
    if (!ray.contains(z)) throw FormatError("z " + z.to_string() + " is not on its ray");
    if (!g.entries.emplace(key, detail::value_field(e)).second)
      throw FormatError("duplicate line in sinogram");
    g.rays.push_back({z, Ray{z, key.dir}});
  }
  return g;
}

inline std::string sinogram_to_string(const Sinogram& g, std::size_t d) {
  return sinogram_to_json(g, d).dump(2) + "\n";
}
inline Sinogram sinogram_from_string(const std::string& s) {
  return sinogram_from_json(detail::parse_text(s));
}

inline std::size_t sinogram_dim(const std::string& s) {
  return detail::dim_field(detail::parse_text(s));
}

// ---------------------------------------------------------------------------
// Direction lists (one-point reconstruction)

inline std::map<LatticePoint, Direction> directions_from_string(const std::string& s) {
  const json j = detail::parse_text(s);
  const std::size_t d = detail::dim_field(j);
  std::map<LatticePoint, Direction> out;
  const json& rays = j.contains("rays") ? j.at("rays") : json::array();
  for (const auto& e : rays) {
    if (!e.is_object() || !e.contains("z") || !e.contains("dir"))
      throw FormatError("direction entry needs z and dir");
    const LatticePoint z = detail::point_from(e.at("z"), d, "z");
    const LatticePoint dir = detail::point_from(e.at("dir"), d, "dir");
    if (dir.is_zero()) throw FormatError("zero direction");
    if (!out.emplace(z, primitive(dir)).second) throw FormatError("duplicate point " + z.to_string());
  }
  return out;
}

inline std::string directions_to_string(const std::map<LatticePoint, Direction>& dirs,
                                        std::size_t d) {
  json rays = json::array();
  for (const auto& [z, t] : dirs)
    rays.push_back({{"z", detail::point_json(z)}, {"dir", detail::point_json(t.prim())}});
  return json{{"d", d}, {"rays", std::move(rays)}}.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Writes via a temporary file in the same directory and renames it over
/// the target.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place: " + ec.message());
  }
}

}  // namespace lxray::io
