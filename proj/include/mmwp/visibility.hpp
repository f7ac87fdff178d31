#pragma once

#include "mmwp/bitset.hpp"
#include "mmwp/occlusion.hpp"
#include "mmwp/scenario.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mmwp {

struct SpecularWitness {
  int face = -1;  // -1: no specular path
  Vec3 point{0, 0, 0};
};

/// Visibility classification of every target grid point as seen from one
/// source. Indirect sets are restricted to targets outside the direct set,
/// and specular is a subset of diffuse.
struct VisibilityIndex {
  Vec3 source{0, 0, 0};
  Bitset direct;
  Bitset specular;
  Bitset diffuse;
  std::vector<SpecularWitness> witness;
};

Bitset direct_visibility(const Vec3& s, const GridSet& targets, const OcclusionIndex& occ);

/// Image-method specular visibility over the reflective faces. For each
/// target not directly visible, mirrors the source across a face plane,
/// intersects the mirrored sight line with the face, and validates both legs
/// against occlusion. First face (in face-index order) wins the witness.
std::pair<Bitset, std::vector<SpecularWitness>> specular_visibility(
    const Vec3& s, const GridSet& targets, const OcclusionIndex& occ);

/// One-bounce diffuse visibility through the building-surface sample grid.
Bitset diffuse_visibility(const Vec3& s, const GridSet& targets, const GridSet& surface,
                          const OcclusionIndex& occ);

/// Per-target bitsets of surface samples with a clear sight line, reusable
/// across sources: source sees target diffusely iff the source's own surface
/// bitset intersects the target's row.
struct SurfaceVisibilityTable {
  std::vector<Bitset> rows;  // one per target, bits over surface samples
};

SurfaceVisibilityTable build_surface_visibility(const GridSet& targets, const GridSet& surface,
                                                const OcclusionIndex& occ);

Bitset surface_row(const Vec3& s, const GridSet& surface, const OcclusionIndex& occ);

/// Full classification for one source. The sample-grid diffuse set is
/// widened by the specular set: a specular bounce point is a legitimate
/// diffuse witness the sample grid may have missed.
VisibilityIndex compute_visibility(const Vec3& s, const GridSet& targets, const GridSet& surface,
                                   const OcclusionIndex& occ,
                                   const SurfaceVisibilityTable* table = nullptr);

/// Raster export, one pixel per service-area cell: 255 direct, 128 indirect,
/// 0 blocked, 32 for cells occupied by a building. Rows top-down in y.
void write_visibility_pgm(const std::string& path, const Scenario& s, const GridSet& service,
                          const VisibilityIndex& vis);

void write_visibility_csv(const std::string& path, const GridSet& service,
                          const VisibilityIndex& vis);

}  // namespace mmwp
