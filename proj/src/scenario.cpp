#include "mmwp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mmwp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ScenarioError(origin + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& origin) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const json& obj, const char* key, const std::string& origin) {
  const json& v = require(obj, key, origin);
  if (!v.is_number()) fail(origin, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

Vec2 parse_vec2(const json& v, const std::string& origin, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(origin, what + " must be a [x, y] pair");
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

}  // namespace

const char* to_string(GridRole role) {
  switch (role) {
    case GridRole::ServiceArea: return "service_area";
    case GridRole::GnbCandidate: return "gnb_candidate";
    case GridRole::BuildingSurface: return "building_surface";
    case GridRole::PmrCandidate: return "pmr_candidate";
    case GridRole::OutageArea: return "outage_area";
  }
  return "?";
}

Scenario parse_scenario_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, e.what());
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");

  const json& ver = require(doc, "schema_version", origin);
  if (!ver.is_number_integer() || ver.get<int>() != 1)
    fail(origin, "unsupported schema_version (expected 1)");

  Scenario s;
  const json& bounds = require(doc, "bounds", origin);
  if (!bounds.is_array() || bounds.size() != 2)
    fail(origin, "bounds must be [[xmin, ymin], [xmax, ymax]]");
  s.bounds_min = parse_vec2(bounds[0], origin, "bounds[0]");
  s.bounds_max = parse_vec2(bounds[1], origin, "bounds[1]");

  s.grid_resolution = require_number(doc, "resolution_m", origin);
  s.ue_height = require_number(doc, "ue_height_m", origin);
  s.gnb_mount_offset = require_number(doc, "gnb_mount_offset_m", origin);

  const json& band = require(doc, "pmr_height_band_m", origin);
  if (!band.is_array() || band.size() != 2 || !band[0].is_number() || !band[1].is_number())
    fail(origin, "pmr_height_band_m must be [lo, hi]");
  s.pmr_band_lo = band[0].get<double>();
  s.pmr_band_hi = band[1].get<double>();

  if (doc.contains("roof_mirrors")) {
    if (!doc["roof_mirrors"].is_boolean()) fail(origin, "roof_mirrors must be a boolean");
    s.roof_mirrors = doc["roof_mirrors"].get<bool>();
  }

  const json& buildings = require(doc, "buildings", origin);
  if (!buildings.is_array()) fail(origin, "buildings must be an array");
  for (std::size_t k = 0; k < buildings.size(); ++k) {
    const json& b = buildings[k];
    std::string where = origin + ": buildings[" + std::to_string(k) + "]";
    if (!b.is_object()) throw ScenarioError(where + " must be an object");
    Building out;
    const json& id = require(b, "id", where);
    if (!id.is_string() || id.get<std::string>().empty())
      throw ScenarioError(where + ": 'id' must be a non-empty string");
    out.id = id.get<std::string>();
    out.height = require_number(b, "height_m", where);
    const json& fp = require(b, "footprint", where);
    if (!fp.is_array()) throw ScenarioError(where + ": 'footprint' must be an array");
    for (std::size_t i = 0; i < fp.size(); ++i)
      out.footprint.push_back(parse_vec2(fp[i], where, "footprint[" + std::to_string(i) + "]"));
    if (b.contains("reflective")) {
      if (!b["reflective"].is_boolean())
        throw ScenarioError(where + ": 'reflective' must be a boolean");
      out.reflective = b["reflective"].get<bool>();
    }
    s.buildings.push_back(std::move(out));
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str(), path);
}

void validate_scenario(const Scenario& s) {
  if (!(s.bounds_max.x() > s.bounds_min.x()) || !(s.bounds_max.y() > s.bounds_min.y()))
    throw ScenarioError("bounds: max must exceed min on both axes");
  if (!(s.grid_resolution > 0.0)) throw ScenarioError("resolution_m must be positive");
  if (!(s.ue_height > 0.0)) throw ScenarioError("ue_height_m must be positive");
  if (s.gnb_mount_offset < 0.0) throw ScenarioError("gnb_mount_offset_m must be non-negative");
  if (!(s.pmr_band_lo >= 0.0) || !(s.pmr_band_hi > s.pmr_band_lo))
    throw ScenarioError("pmr_height_band_m must satisfy 0 <= lo < hi");

  std::set<std::string> ids;
  for (const Building& b : s.buildings) {
    if (!ids.insert(b.id).second)
      throw ScenarioError("building '" + b.id + "': duplicate id");
    if (!(b.height > 0.0))
      throw ScenarioError("building '" + b.id + "': height_m must be positive");
    if (b.footprint.size() < 3)
      throw ScenarioError("building '" + b.id + "': footprint needs at least 3 vertices");
    if (!polygon_is_simple(b.footprint))
      throw ScenarioError("building '" + b.id + "': footprint must be a simple polygon");
    if (!polygon_is_ccw(b.footprint))
      throw ScenarioError("building '" + b.id + "': footprint must wind counter-clockwise");
    for (const Vec2& v : b.footprint) {
      if (v.x() < s.bounds_min.x() - 1e-9 || v.x() > s.bounds_max.x() + 1e-9 ||
          v.y() < s.bounds_min.y() - 1e-9 || v.y() > s.bounds_max.y() + 1e-9)
        throw ScenarioError("building '" + b.id + "': footprint leaves the scenario bounds");
    }
  }
  for (std::size_t i = 0; i < s.buildings.size(); ++i)
    for (std::size_t j = i + 1; j < s.buildings.size(); ++j)
      if (polygons_overlap(s.buildings[i].footprint, s.buildings[j].footprint))
        throw ScenarioError("buildings '" + s.buildings[i].id + "' and '" +
                            s.buildings[j].id + "': footprints overlap");
}

GridSet generate_service_grid(const Scenario& s) {
  GridSet g;
  g.role = GridRole::ServiceArea;
  g.resolution = s.grid_resolution;
  const double res = s.grid_resolution;
  const int nx = static_cast<int>(std::floor(s.width() / res + 1e-9));
  const int ny = static_cast<int>(std::floor(s.depth() / res + 1e-9));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Vec2 p(s.bounds_min.x() + (i + 0.5) * res, s.bounds_min.y() + (j + 0.5) * res);
      bool inside = false;
      for (const Building& b : s.buildings)
        if (point_in_polygon(p, b.footprint)) { inside = true; break; }
      if (!inside) g.points.emplace_back(p.x(), p.y(), s.ue_height);
    }
  }
  return g;
}

GridSet generate_gnb_candidates(const Scenario& s) {
  GridSet g;
  g.role = GridRole::GnbCandidate;
  g.resolution = s.grid_resolution;
  const double res = s.grid_resolution;
  for (std::size_t bi = 0; bi < s.buildings.size(); ++bi) {
    const Building& b = s.buildings[bi];
    const double z = b.height + s.gnb_mount_offset;
    const std::size_t n = b.footprint.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2& a = b.footprint[k];
      const Vec2& c = b.footprint[(k + 1) % n];
      const double len = (c - a).norm();
      const Vec2 dir = (c - a) / len;
      // Spacing restarts at every vertex, so corners are always candidates.
      for (double t = 0.0; t < len - 1e-9; t += res) {
        Vec2 p = a + t * dir;
        g.points.emplace_back(p.x(), p.y(), z);
        g.owner.push_back(static_cast<int>(bi));
      }
    }
  }
  return g;
}

GridSet generate_building_surface_grid(const Scenario& s, double facet) {
  if (!(facet > 0.0)) throw ScenarioError("facet size must be positive");
  GridSet g;
  g.role = GridRole::BuildingSurface;
  g.resolution = facet;
  for (std::size_t bi = 0; bi < s.buildings.size(); ++bi) {
    const Building& b = s.buildings[bi];
    const std::size_t before = g.points.size();
    const std::size_t n = b.footprint.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2& a = b.footprint[k];
      const Vec2& c = b.footprint[(k + 1) % n];
      const double len = (c - a).norm();
      const Vec2 dir = (c - a) / len;
      const Vec3 normal(dir.y(), -dir.x(), 0.0);  // outward for CCW winding
      const int nu = static_cast<int>(std::floor(len / facet + 1e-9));
      const int nv = static_cast<int>(std::floor(b.height / facet + 1e-9));
      for (int iv = 0; iv < nv; ++iv) {
        for (int iu = 0; iu < nu; ++iu) {
          Vec2 p = a + (iu + 0.5) * facet * dir;
          g.points.emplace_back(p.x(), p.y(), (iv + 0.5) * facet);
          g.normals.push_back(normal);
          g.owner.push_back(static_cast<int>(bi));
        }
      }
    }
    // Rooftop: tile the footprint bounding box, keep cells whose centroid
    // falls inside the polygon.
    Vec2 lo = b.footprint[0], hi = b.footprint[0];
    for (const Vec2& v : b.footprint) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const int rx = static_cast<int>(std::floor((hi.x() - lo.x()) / facet + 1e-9));
    const int ry = static_cast<int>(std::floor((hi.y() - lo.y()) / facet + 1e-9));
    for (int j = 0; j < ry; ++j) {
      for (int i = 0; i < rx; ++i) {
        Vec2 p(lo.x() + (i + 0.5) * facet, lo.y() + (j + 0.5) * facet);
        if (!point_in_polygon(p, b.footprint)) continue;
        g.points.emplace_back(p.x(), p.y(), b.height);
        g.normals.emplace_back(0.0, 0.0, 1.0);
        g.owner.push_back(static_cast<int>(bi));
      }
    }
    if (g.points.size() == before)
      throw ScenarioError("building '" + b.id + "': facet size larger than every face");
  }
  return g;
}

}  // namespace mmwp
