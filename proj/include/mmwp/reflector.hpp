#pragma once

#include "mmwp/bitset.hpp"
#include "mmwp/occlusion.hpp"
#include "mmwp/scenario.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mmwp {

/// Mirror reflection of the incident direction about the plate normal.
Vec3 reflect_dir(const Vec3& i_hat, const Vec3& n_hat);

/// Plate normal that reflects i_hat onto r_hat, signed so the incident ray
/// hits the front face (i_hat . n_hat < 0).
Vec3 orient_normal(const Vec3& i_hat, const Vec3& r_hat);

/// Rotation about a unit axis via the Euler-Rodrigues parameters.
Eigen::Matrix3d euler_rodrigues(const Vec3& axis, double angle);

struct Reflector {
  Vec3 center{0, 0, 0};
  double side = 0.0;
  double facet = 0.0;
  Vec3 normal{0, 0, 1};
  std::vector<Vec3> facet_centers;  // (side/facet)^2 entries
};

/// Builds the facet lattice in the canonical z=0 plane and rigidly rotates
/// it so the canonical normal lands on n_hat with one plate edge kept
/// horizontal (no tilt about the normal).
Reflector rotate_facets(double side, double facet, const Vec3& center, const Vec3& n_hat);

struct ReflectorParams {
  double facet_size = 0.1;  // a^R, meters
  double wavelength = 0.0;  // meters
  double zeta = 2.0;        // per-leg distance exponent
  double g_gnb_lin = 1.0;
  double g_ue_lin = 1.0;
  bool coherent = false;  // amplitude summation instead of power summation
};

/// Single-facet bistatic gain: G.G.(a^R)^4 cos^2(thetaI) / ((4pi)^2 (d1 d2)^zeta)
/// times the squared-sinc aperture factor. Behind-plate geometry returns 0
/// and raises *shadow.
double facet_gain(const Vec3& gnb, const Vec3& facet_center, const Vec3& n_hat,
                  const Vec3& target, const ReflectorParams& p, bool* shadow = nullptr);

/// Aggregate over the facets: power sum by default, (sum of sqrt)^2 in
/// coherent mode.
double reflector_gain(const Vec3& gnb, const Reflector& r, const Vec3& target,
                      const ReflectorParams& p);

/// Mounting positions serving both sides: surface samples visible from some
/// chosen gNB and from some outage point, inside the height band.
GridSet pmr_candidates(const Bitset& vgnb, const Bitset& vosa, const GridSet& surface,
                       double z_lo, double z_hi);

/// Greedy k-center subsample: starts at index 0 and repeatedly adds the point
/// farthest from the chosen set, so every cluster of `pts` keeps a
/// representative. Returns ascending indices, fewer than `count` only when
/// the remaining points duplicate chosen positions.
std::vector<int> farthest_point_sample(const std::vector<Vec3>& pts, int count);

/// End-to-end gains for every (gNB i, position k, orientation l) triple
/// toward every visible outage grid j, orientations aimed at a spread
/// subset of the outage points. Entries below kGainFloor are dropped.
struct GainTensor {
  int ni = 0, nk = 0, nl = 0, nj = 0;
  std::vector<int> orient_target;                         // l -> outage grid index
  std::vector<std::vector<std::pair<int, double>>> rows;  // per triple, (j, gain) sorted by j
  std::vector<Vec3> normal;                               // per triple
  std::vector<char> valid;                                // degenerate triples cleared
  ReflectorParams params;
  double side = 0.0;
  std::int64_t skipped_degenerate = 0;
  std::int64_t near_field_warnings = 0;

  int triple(int i, int k, int l) const { return (i * nk + k) * nl + l; }
  std::size_t triples() const { return rows.size(); }
};

inline constexpr double kGainFloor = 1e-18;

GainTensor build_gain_tensor(const GridSet& gnb_locs, const GridSet& candidates,
                             const GridSet& outage, const OcclusionIndex& occ, double side,
                             const ReflectorParams& params, int orientation_stride = 0);

void write_gain_tensor_csv(const GainTensor& t, const std::string& path);

}  // namespace mmwp
