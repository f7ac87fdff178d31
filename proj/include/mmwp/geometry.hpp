#pragma once

#include <Eigen/Core>

#include <vector>

namespace mmwp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// 3D Euclidean distance.
inline double dist3d(const Vec3& p, const Vec3& q) { return (p - q).norm(); }

/// 2D Euclidean distance (z ignored).
inline double dist2d(const Vec3& p, const Vec3& q) {
  return (p.head<2>() - q.head<2>()).norm();
}

using Polygon2 = std::vector<Vec2>;

/// Signed area; positive for counter-clockwise vertex order.
double polygon_signed_area(const Polygon2& poly);

bool polygon_is_ccw(const Polygon2& poly);

/// True if no two non-adjacent edges intersect and no edge is degenerate.
bool polygon_is_simple(const Polygon2& poly);

/// Strict interior test (boundary points count as inside).
bool point_in_polygon(const Vec2& p, const Polygon2& poly, double tol = 1e-9);

/// Proper or touching intersection of closed segments ab and cd.
bool segments_intersect_2d(const Vec2& a, const Vec2& b, const Vec2& c,
                           const Vec2& d, double tol = 1e-12);

/// Footprint conflict: any shared point (touching boundaries included) or
/// containment.
bool polygons_overlap(const Polygon2& a, const Polygon2& b);

double polygon_perimeter(const Polygon2& poly);

}  // namespace mmwp
