#include "mmwp/reflector.hpp"

#include "mmwp/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace mmwp {

Vec3 reflect_dir(const Vec3& i_hat, const Vec3& n_hat) {
  const double in = i_hat.dot(n_hat);
  if (std::abs(in) < 1e-9)
    throw std::domain_error("reflect_dir: grazing incidence, reflection undefined");
  return i_hat - 2.0 * in * n_hat;
}

Vec3 orient_normal(const Vec3& i_hat, const Vec3& r_hat) {
  const Vec3 d = r_hat - i_hat;
  const double len = d.norm();
  if (len < 1e-9)
    throw std::domain_error("orient_normal: no finite plate reflects a ray onto its own path");
  // (r - i)/|r - i| satisfies i.n = -(|r-i|/2) < 0, the front-face sign.
  return d / len;
}

Eigen::Matrix3d euler_rodrigues(const Vec3& axis, double angle) {
  const double a = std::cos(angle / 2.0);
  const Vec3 v = std::sin(angle / 2.0) * axis;
  const double b = v.x(), c = v.y(), d = v.z();
  Eigen::Matrix3d R;
  R << a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c),
      2 * (b * c + a * d), a * a + c * c - b * b - d * d, 2 * (c * d - a * b),
      2 * (b * d - a * c), 2 * (c * d + a * b), a * a + d * d - b * b - c * c;
  return R;
}

Reflector rotate_facets(double side, double facet, const Vec3& center, const Vec3& n_hat) {
  if (!(facet > 0.0) || side < facet)
    throw std::invalid_argument("rotate_facets: need side >= facet > 0");
  const double ratio = side / facet;
  const long r = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(r)) > 1e-9)
    throw std::invalid_argument("rotate_facets: side must be an integer multiple of facet");

  Eigen::Matrix3d R;
  const Vec3 zhat(0, 0, 1);
  const Vec3 cross = zhat.cross(n_hat);
  const double cl = cross.norm();
  if (cl < 1e-12) {
    R = n_hat.z() > 0 ? Eigen::Matrix3d::Identity()
                      : euler_rodrigues(Vec3(1, 0, 0), M_PI).eval();
  } else {
    // Minimal rotation z->n, preceded by an in-plane spin lining the lattice
    // x axis up with the rotation axis, which stays horizontal: zero tilt.
    const Vec3 axis = cross / cl;
    const double angle = std::atan2(cl, n_hat.z());
    const double spin = std::atan2(axis.y(), axis.x());
    R = euler_rodrigues(axis, angle) * euler_rodrigues(zhat, spin);
  }

  Reflector out;
  out.center = center;
  out.side = side;
  out.facet = facet;
  out.normal = n_hat;
  out.facet_centers.reserve(static_cast<std::size_t>(r) * r);
  for (long iv = 0; iv < r; ++iv) {
    for (long iu = 0; iu < r; ++iu) {
      const Vec3 local((iu + 0.5) * facet - side / 2.0, (iv + 0.5) * facet - side / 2.0, 0.0);
      out.facet_centers.push_back(center + R * local);
    }
  }
  return out;
}

double facet_gain(const Vec3& gnb, const Vec3& facet_center, const Vec3& n_hat,
                  const Vec3& target, const ReflectorParams& p, bool* shadow) {
  if (shadow) *shadow = false;
  const Vec3 vi = facet_center - gnb;
  const Vec3 vr = target - facet_center;
  const double d1 = vi.norm(), d2 = vr.norm();
  if (d1 <= 0.0 || d2 <= 0.0) throw std::domain_error("facet_gain: zero propagation distance");
  const Vec3 i_hat = vi / d1;
  const Vec3 r_hat = vr / d2;
  const double cos_i = -i_hat.dot(n_hat);
  const double cos_r = r_hat.dot(n_hat);
  if (cos_i <= 0.0 || cos_r <= 0.0) {
    if (shadow) *shadow = true;
    return 0.0;
  }
  const double sin_i = std::sqrt(std::max(0.0, 1.0 - cos_i * cos_i));
  // Reflected angle: signed against the incident tangent when coplanar with
  // the incidence plane, magnitude-only otherwise.
  double sin_r;
  const Vec3 tvec = i_hat + cos_i * n_hat;  // in-plane tangent component of i
  const double tlen = tvec.norm();
  if (tlen < 1e-9) {
    sin_r = std::sqrt(std::max(0.0, 1.0 - cos_r * cos_r));
  } else {
    const Vec3 t_hat = tvec / tlen;
    if (std::abs(r_hat.dot(n_hat.cross(t_hat))) <= 1e-9)
      sin_r = r_hat.dot(t_hat);
    else
      sin_r = std::sqrt(std::max(0.0, 1.0 - cos_r * cos_r));
  }
  const double x = M_PI * p.facet_size / p.wavelength * (sin_r - sin_i);
  const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
  const double a4 = std::pow(p.facet_size, 4);
  const double denom = std::pow(4.0 * M_PI, 2) * std::pow(d1 * d2, p.zeta);
  return p.g_gnb_lin * p.g_ue_lin * a4 * cos_i * cos_i / denom * sinc * sinc;
}

double reflector_gain(const Vec3& gnb, const Reflector& r, const Vec3& target,
                      const ReflectorParams& p) {
  double acc = 0.0;
  for (const Vec3& fc : r.facet_centers) {
    const double g = facet_gain(gnb, fc, r.normal, target, p);
    acc += p.coherent ? std::sqrt(g) : g;
  }
  return p.coherent ? acc * acc : acc;
}

std::vector<int> farthest_point_sample(const std::vector<Vec3>& pts, int count) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> chosen;
  if (n == 0 || count <= 0) return chosen;
  std::vector<double> d2(static_cast<std::size_t>(n),
                         std::numeric_limits<double>::infinity());
  int pick = 0;
  for (int c = 0; c < std::min(count, n); ++c) {
    chosen.push_back(pick);
    int far = pick;
    double far_d2 = -1.0;
    for (int j = 0; j < n; ++j) {
      d2[j] = std::min(d2[j], (pts[j] - pts[pick]).squaredNorm());
      if (d2[j] > far_d2) {
        far_d2 = d2[j];
        far = j;
      }
    }
    if (far_d2 <= 0.0) break;  // only duplicate positions left
    pick = far;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

GridSet pmr_candidates(const Bitset& vgnb, const Bitset& vosa, const GridSet& surface,
                       double z_lo, double z_hi) {
  GridSet out;
  out.role = GridRole::PmrCandidate;
  out.resolution = surface.resolution;
  for (std::size_t b = 0; b < surface.size(); ++b) {
    if (!vgnb.test(b) || !vosa.test(b)) continue;
    const Vec3& pt = surface.points[b];
    if (pt.z() < z_lo || pt.z() > z_hi) continue;
    out.points.push_back(pt);
    if (!surface.normals.empty()) out.normals.push_back(surface.normals[b]);
    if (!surface.owner.empty()) out.owner.push_back(surface.owner[b]);
  }
  return out;
}

GainTensor build_gain_tensor(const GridSet& gnb_locs, const GridSet& candidates,
                             const GridSet& outage, const OcclusionIndex& occ, double side,
                             const ReflectorParams& params, int orientation_stride) {
  if (gnb_locs.size() == 0 || candidates.size() == 0 || outage.size() == 0)
    throw std::invalid_argument("build_gain_tensor: empty input set");
  GainTensor t;
  t.params = params;
  t.side = side;
  t.ni = static_cast<int>(gnb_locs.size());
  t.nk = static_cast<int>(candidates.size());
  t.nj = static_cast<int>(outage.size());
  if (orientation_stride > 0) {
    for (int j = 0; j < t.nj; j += orientation_stride) t.orient_target.push_back(j);
  } else {
    // Same target count an nj/20 index stride would give, but spread by
    // farthest-point traversal over the outage positions. An index stride
    // walks the grids in map order, and a small pocket whose indices happen
    // to dodge the stride ends up with no plate aimed anywhere near it.
    const int stride = std::max(1, t.nj / 20);
    t.orient_target = farthest_point_sample(outage.points, (t.nj + stride - 1) / stride);
  }
  t.nl = static_cast<int>(t.orient_target.size());

  t.rows.assign(static_cast<std::size_t>(t.ni) * t.nk * t.nl, {});
  t.normal.assign(t.rows.size(), Vec3::Zero());
  t.valid.assign(t.rows.size(), 0);

  for (int k = 0; k < t.nk; ++k) {
    const Vec3& center = candidates.points[k];
    Bitset vis_j(t.nj);
    for (int j = 0; j < t.nj; ++j)
      if (occ.segment_clear(center, outage.points[j])) vis_j.set(j);
    for (int i = 0; i < t.ni; ++i) {
      const Vec3& g = gnb_locs.points[i];
      if (!occ.segment_clear(g, center)) continue;
      const Vec3 inc = center - g;
      const double dinc = inc.norm();
      if (dinc < 10.0 * side) ++t.near_field_warnings;
      for (int l = 0; l < t.nl; ++l) {
        const Vec3& aim = outage.points[t.orient_target[l]];
        const int tr = t.triple(i, k, l);
        if (!vis_j.test(t.orient_target[l])) {
          ++t.skipped_degenerate;
          continue;
        }
        Vec3 n_hat;
        try {
          n_hat = orient_normal(inc / dinc, (aim - center).normalized());
        } catch (const std::domain_error&) {
          ++t.skipped_degenerate;
          continue;
        }
        const Reflector refl = rotate_facets(side, params.facet_size, center, n_hat);
        t.normal[tr] = n_hat;
        t.valid[tr] = 1;
        for (int j = 0; j < t.nj; ++j) {
          if (!vis_j.test(j)) continue;
          const double gain = reflector_gain(g, refl, outage.points[j], params);
          if (gain >= kGainFloor) t.rows[tr].emplace_back(j, gain);
        }
      }
    }
  }
  return t;
}

void write_gain_tensor_csv(const GainTensor& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << "gnb,position,orientation,grid,gain\n";
  char buf[32];
  for (int i = 0; i < t.ni; ++i)
    for (int k = 0; k < t.nk; ++k)
      for (int l = 0; l < t.nl; ++l) {
        const int tr = t.triple(i, k, l);
        if (!t.valid[tr]) continue;
        for (const auto& [j, gain] : t.rows[tr]) {
          std::snprintf(buf, sizeof buf, "%.17g", gain);
          out << i << "," << k << "," << l << "," << j << "," << buf << "\n";
        }
      }
}

}  // namespace mmwp
