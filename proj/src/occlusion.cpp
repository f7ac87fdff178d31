#include "mmwp/occlusion.hpp"

#include <algorithm>
#include <cmath>

namespace mmwp {

std::vector<Face> build_faces(const Scenario& s) {
  std::vector<Face> faces;
  for (std::size_t bi = 0; bi < s.buildings.size(); ++bi) {
    const Building& b = s.buildings[bi];
    const std::size_t n = b.footprint.size();
    for (std::size_t k = 0; k < n; ++k) {
      Face f;
      f.kind = Face::Wall;
      f.building = static_cast<int>(bi);
      f.reflective = b.reflective;
      f.e0 = b.footprint[k];
      f.e1 = b.footprint[(k + 1) % n];
      Vec2 d = (f.e1 - f.e0).normalized();
      f.normal = Vec3(d.y(), -d.x(), 0.0);  // outward for CCW winding
      f.origin = Vec3(f.e0.x(), f.e0.y(), 0.0);
      f.z_lo = 0.0;
      f.z_hi = b.height;
      faces.push_back(std::move(f));
    }
    Face roof;
    roof.kind = Face::Roof;
    roof.building = static_cast<int>(bi);
    roof.reflective = b.reflective && s.roof_mirrors;
    roof.normal = Vec3(0.0, 0.0, 1.0);
    roof.origin = Vec3(b.footprint[0].x(), b.footprint[0].y(), b.height);
    roof.z_lo = roof.z_hi = b.height;
    roof.roof = b.footprint;
    faces.push_back(std::move(roof));
  }
  return faces;
}

bool face_contains(const Face& f, const Vec3& x) {
  if (f.kind == Face::Roof) return point_in_polygon(Vec2(x.x(), x.y()), f.roof, kFaceTol);
  const Vec2 e = f.e1 - f.e0;
  const double len = e.norm();
  const double u = (Vec2(x.x(), x.y()) - f.e0).dot(e) / len;
  if (u < -kFaceTol || u > len + kFaceTol) return false;
  return x.z() >= f.z_lo - kFaceTol && x.z() <= f.z_hi + kFaceTol;
}

bool face_blocks(const Face& f, const Vec3& p, const Vec3& q) {
  const Vec3 d = q - p;
  const double denom = f.normal.dot(d);
  if (std::abs(denom) < 1e-12) return false;  // runs in the face plane: grazing, not blocked
  const double t = f.normal.dot(f.origin - p) / denom;
  if (t < 0.0 || t > 1.0) return false;
  const double len = d.norm();
  if (t * len <= kEndpointTol || (1.0 - t) * len <= kEndpointTol) return false;
  return face_contains(f, p + t * d);
}

OcclusionIndex::OcclusionIndex(const Scenario& s) : faces_(build_faces(s)) {
  org_ = s.bounds_min;
  const double extent = std::max(s.width(), s.depth());
  nx_ = ny_ = std::clamp(static_cast<int>(std::ceil(extent / 8.0)), 1, 64);
  cell_ = std::max(s.width() / nx_, s.depth() / ny_);
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
    const Face& f = faces_[fi];
    Vec2 lo, hi;
    if (f.kind == Face::Wall) {
      lo = f.e0.cwiseMin(f.e1);
      hi = f.e0.cwiseMax(f.e1);
    } else {
      lo = hi = f.roof[0];
      for (const Vec2& v : f.roof) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
    }
    for (int cell : bucket_range(lo, hi)) buckets_[cell].push_back(static_cast<int>(fi));
  }
}

std::vector<int> OcclusionIndex::bucket_range(const Vec2& lo, const Vec2& hi) const {
  const int i0 = std::clamp(static_cast<int>(std::floor((lo.x() - org_.x()) / cell_)), 0, nx_ - 1);
  const int i1 = std::clamp(static_cast<int>(std::floor((hi.x() - org_.x()) / cell_)), 0, nx_ - 1);
  const int j0 = std::clamp(static_cast<int>(std::floor((lo.y() - org_.y()) / cell_)), 0, ny_ - 1);
  const int j1 = std::clamp(static_cast<int>(std::floor((hi.y() - org_.y()) / cell_)), 0, ny_ - 1);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(i1 - i0 + 1) * (j1 - j0 + 1));
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) out.push_back(j * nx_ + i);
  return out;
}

bool OcclusionIndex::segment_clear(const Vec3& p, const Vec3& q) const {
  const Vec2 p2(p.x(), p.y()), q2(q.x(), q.y());
  // A face can only block if its footprint box meets the segment's, and both
  // boxes register in the bucket grid, so scanning the segment's buckets sees
  // every candidate (some more than once, which is harmless).
  for (int cell : bucket_range(p2.cwiseMin(q2), p2.cwiseMax(q2)))
    for (int fi : buckets_[cell])
      if (face_blocks(faces_[fi], p, q)) return false;
  return true;
}

bool OcclusionIndex::segment_clear_all_faces(const Vec3& p, const Vec3& q) const {
  for (const Face& f : faces_)
    if (face_blocks(f, p, q)) return false;
  return true;
}

}  // namespace mmwp
