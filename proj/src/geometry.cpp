#include "mmwp/geometry.hpp"

#include <cmath>

namespace mmwp {

double polygon_signed_area(const Polygon2& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    acc += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * acc;
}

bool polygon_is_ccw(const Polygon2& poly) {
  return polygon_signed_area(poly) > 0.0;
}

double polygon_perimeter(const Polygon2& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) acc += (poly[(i + 1) % n] - poly[i]).norm();
  return acc;
}

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, double tol) {
  if (std::abs(cross2(a, b, p)) > tol * (1.0 + (b - a).norm())) return false;
  const double dot = (p - a).dot(b - a);
  return dot >= -tol && dot <= (b - a).squaredNorm() + tol;
}

}  // namespace

bool segments_intersect_2d(const Vec2& a, const Vec2& b, const Vec2& c,
                           const Vec2& d, double tol) {
  const double d1 = cross2(c, d, a);
  const double d2 = cross2(c, d, b);
  const double d3 = cross2(a, b, c);
  const double d4 = cross2(a, b, d);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
    return true;
  if (on_segment(c, d, a, tol) || on_segment(c, d, b, tol) ||
      on_segment(a, b, c, tol) || on_segment(a, b, d, tol))
    return true;
  return false;
}

bool polygon_is_simple(const Polygon2& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if ((poly[(i + 1) % n] - poly[i]).norm() < 1e-12) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share a vertex).
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect_2d(poly[i], poly[(i + 1) % n], poly[j],
                                poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

bool point_in_polygon(const Vec2& p, const Polygon2& poly, double tol) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(poly[i], poly[(i + 1) % n], p, tol)) return true;
  // Crossing-number with horizontal ray toward +x.
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xint = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < xint) inside = !inside;
    }
  }
  return inside;
}

bool polygons_overlap(const Polygon2& a, const Polygon2& b) {
  const std::size_t na = a.size(), nb = b.size();
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      if (segments_intersect_2d(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb]))
        return true;
  if (point_in_polygon(a[0], b)) return true;
  if (point_in_polygon(b[0], a)) return true;
  return false;
}

}  // namespace mmwp
