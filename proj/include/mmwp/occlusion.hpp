#pragma once

#include "mmwp/scenario.hpp"

#include <vector>

namespace mmwp {

inline constexpr double kFaceTol = 1e-9;      // on-face membership tolerance
inline constexpr double kEndpointTol = 1e-6;  // crossings this close to an endpoint are ignored

/// One planar boundary piece of an extruded building: a rectangular wall or
/// the horizontal rooftop polygon. Normals point out of the solid.
struct Face {
  enum Kind { Wall, Roof };
  Kind kind = Wall;
  int building = -1;
  bool reflective = true;
  Vec3 normal{0, 0, 0};
  Vec3 origin{0, 0, 0};
  Vec2 e0{0, 0}, e1{0, 0};  // wall footprint edge, winding order
  double z_lo = 0.0, z_hi = 0.0;
  Polygon2 roof;  // Roof only
};

std::vector<Face> build_faces(const Scenario& s);

/// True if the point (already on the face plane) lies within the face bounds.
bool face_contains(const Face& f, const Vec3& x);

/// True if the open segment pq crosses the face at an interior point. Grazing
/// runs inside the face plane and crossings within kEndpointTol of either
/// endpoint do not count, so sources mounted on a face are not self-occluded.
bool face_blocks(const Face& f, const Vec3& p, const Vec3& q);

/// Immutable spatial index over the building faces: a uniform 2D bucket grid
/// keyed by footprint position. Queries are pure and safe to run in parallel.
class OcclusionIndex {
 public:
  explicit OcclusionIndex(const Scenario& s);

  const std::vector<Face>& faces() const { return faces_; }

  /// True iff no face blocks the open segment pq.
  bool segment_clear(const Vec3& p, const Vec3& q) const;

  /// Same answer without the bucket grid; exists so tests can pin the two
  /// paths against each other.
  bool segment_clear_all_faces(const Vec3& p, const Vec3& q) const;

 private:
  std::vector<int> bucket_range(const Vec2& lo, const Vec2& hi) const;

  std::vector<Face> faces_;
  std::vector<std::vector<int>> buckets_;
  Vec2 org_{0, 0};
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
};

}  // namespace mmwp
