#include "mmwp/visibility.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mmwp {

Bitset direct_visibility(const Vec3& s, const GridSet& targets, const OcclusionIndex& occ) {
  Bitset out(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j)
    if (occ.segment_clear(s, targets.points[j])) out.set(j);
  return out;
}

namespace {

/// Mirror image of p across the face plane.
Vec3 mirror_point(const Face& f, const Vec3& p) {
  return p - 2.0 * f.normal.dot(p - f.origin) * f.normal;
}

bool specular_path(const Face& f, const Vec3& s, const Vec3& t, const OcclusionIndex& occ,
                   Vec3& bounce) {
  const double ds = f.normal.dot(s - f.origin);
  const double dt = f.normal.dot(t - f.origin);
  if (ds <= kFaceTol || dt <= kFaceTol) return false;  // both must face the mirror
  const Vec3 img = mirror_point(f, s);
  const Vec3 d = t - img;
  const double denom = f.normal.dot(d);
  if (std::abs(denom) < 1e-12) return false;
  const double u = f.normal.dot(f.origin - img) / denom;
  if (u <= 0.0 || u >= 1.0) return false;
  const Vec3 b = img + u * d;
  if (!face_contains(f, b)) return false;
  if ((b - s).norm() <= kEndpointTol || (b - t).norm() <= kEndpointTol) return false;
  if (!occ.segment_clear(s, b) || !occ.segment_clear(b, t)) return false;
  bounce = b;
  return true;
}

}  // namespace

std::pair<Bitset, std::vector<SpecularWitness>> specular_visibility(
    const Vec3& s, const GridSet& targets, const OcclusionIndex& occ) {
  Bitset out(targets.size());
  std::vector<SpecularWitness> witness(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const Vec3& t = targets.points[j];
    if (occ.segment_clear(s, t)) continue;  // indirect only outside the direct region
    for (std::size_t fi = 0; fi < occ.faces().size(); ++fi) {
      const Face& f = occ.faces()[fi];
      if (!f.reflective) continue;
      Vec3 b;
      if (specular_path(f, s, t, occ, b)) {
        out.set(j);
        witness[j] = {static_cast<int>(fi), b};
        break;
      }
    }
  }
  return {std::move(out), std::move(witness)};
}

namespace {

bool diffuse_witness_exists(const Bitset& src, const GridSet& surface, const Vec3& t,
                            const OcclusionIndex& occ) {
  for (std::size_t b = 0; b < surface.size(); ++b)
    if (src.test(b) && occ.segment_clear(surface.points[b], t)) return true;
  return false;
}

}  // namespace

Bitset surface_row(const Vec3& s, const GridSet& surface, const OcclusionIndex& occ) {
  Bitset row(surface.size());
  for (std::size_t b = 0; b < surface.size(); ++b)
    if (occ.segment_clear(s, surface.points[b])) row.set(b);
  return row;
}

SurfaceVisibilityTable build_surface_visibility(const GridSet& targets, const GridSet& surface,
                                                const OcclusionIndex& occ) {
  SurfaceVisibilityTable table;
  table.rows.reserve(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j)
    table.rows.push_back(surface_row(targets.points[j], surface, occ));
  return table;
}

Bitset diffuse_visibility(const Vec3& s, const GridSet& targets, const GridSet& surface,
                          const OcclusionIndex& occ) {
  Bitset out(targets.size());
  const Bitset src = surface_row(s, surface, occ);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const Vec3& t = targets.points[j];
    if (occ.segment_clear(s, t)) continue;
    for (std::size_t b = 0; b < surface.size(); ++b) {
      if (!src.test(b)) continue;
      if (occ.segment_clear(surface.points[b], t)) {
        out.set(j);
        break;
      }
    }
  }
  return out;
}

VisibilityIndex compute_visibility(const Vec3& s, const GridSet& targets, const GridSet& surface,
                                   const OcclusionIndex& occ,
                                   const SurfaceVisibilityTable* table) {
  VisibilityIndex vis;
  vis.source = s;
  vis.direct = direct_visibility(s, targets, occ);
  auto [spec, wit] = specular_visibility(s, targets, occ);
  vis.specular = std::move(spec);
  vis.witness = std::move(wit);
  vis.diffuse = Bitset(targets.size());
  const Bitset src = surface_row(s, surface, occ);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    if (vis.direct.test(j)) continue;
    if (table ? src.intersects(table->rows[j])
              : diffuse_witness_exists(src, surface, targets.points[j], occ))
      vis.diffuse.set(j);
  }
  vis.diffuse |= vis.specular;
  return vis;
}

void write_visibility_pgm(const std::string& path, const Scenario& s, const GridSet& service,
                          const VisibilityIndex& vis) {
  const double res = s.grid_resolution;
  const int nx = static_cast<int>(std::floor(s.width() / res + 1e-9));
  const int ny = static_cast<int>(std::floor(s.depth() / res + 1e-9));
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << "P2\n" << nx << " " << ny << "\n255\n";
  std::size_t idx = 0;
  std::vector<int> pix(static_cast<std::size_t>(nx) * ny, 32);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Vec2 p(s.bounds_min.x() + (i + 0.5) * res, s.bounds_min.y() + (j + 0.5) * res);
      bool inside = false;
      for (const Building& b : s.buildings)
        if (point_in_polygon(p, b.footprint)) { inside = true; break; }
      if (inside) continue;  // stays 32
      int v = 0;
      if (vis.direct.test(idx)) v = 255;
      else if (vis.specular.test(idx) || vis.diffuse.test(idx)) v = 128;
      pix[static_cast<std::size_t>(j) * nx + i] = v;
      ++idx;
    }
  }
  if (idx != service.size())
    throw std::runtime_error(path + ": service grid does not match scenario raster");
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i)
      out << pix[static_cast<std::size_t>(j) * nx + i] << (i + 1 == nx ? '\n' : ' ');
  }
}

void write_visibility_csv(const std::string& path, const GridSet& service,
                          const VisibilityIndex& vis) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << "index,class\n";
  for (std::size_t j = 0; j < service.size(); ++j) {
    const char* cls = "blocked";
    if (vis.direct.test(j)) cls = "direct";
    else if (vis.specular.test(j) || vis.diffuse.test(j)) cls = "indirect";
    out << j << "," << cls << "\n";
  }
}

}  // namespace mmwp
