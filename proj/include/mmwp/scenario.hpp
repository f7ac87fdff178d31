#pragma once

#include "mmwp/geometry.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mmwp {

struct Building {
  std::string id;
  Polygon2 footprint;  // simple polygon, counter-clockwise
  double height = 0.0;
  bool reflective = true;
};

struct Scenario {
  Vec2 bounds_min{0.0, 0.0};
  Vec2 bounds_max{0.0, 0.0};
  std::vector<Building> buildings;
  double grid_resolution = 1.0;
  double ue_height = 1.5;
  double gnb_mount_offset = 0.0;
  double pmr_band_lo = 5.0;
  double pmr_band_hi = 35.0;
  bool roof_mirrors = true;

  double width() const { return bounds_max.x() - bounds_min.x(); }
  double depth() const { return bounds_max.y() - bounds_min.y(); }
};

enum class GridRole { ServiceArea, GnbCandidate, BuildingSurface, PmrCandidate, OutageArea };

const char* to_string(GridRole role);

/// A discretized point set. Surface-type sets also carry the outward unit
/// normal and owning building index per point.
struct GridSet {
  GridRole role = GridRole::ServiceArea;
  double resolution = 0.0;
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // BuildingSurface / PmrCandidate only
  std::vector<int> owner;     // building index, same roles only

  std::size_t size() const { return points.size(); }
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a scenario file (JSON, see README for the schema).
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_json(const std::string& text, const std::string& origin);

/// Throws ScenarioError naming the offending element on any violation.
void validate_scenario(const Scenario& s);

/// Cell-centroid grid over the bounds, skipping centroids inside any
/// footprint; z = ue_height. Ordered lexicographically by (y, x).
GridSet generate_service_grid(const Scenario& s);

/// Points every grid_resolution meters along each rooftop boundary,
/// z = height + gnb_mount_offset, in per-building boundary order.
GridSet generate_gnb_candidates(const Scenario& s);

/// Tiles every wall and rooftop face with facet-sized cells; one point per
/// cell centroid with the outward face normal.
GridSet generate_building_surface_grid(const Scenario& s, double facet);

}  // namespace mmwp
