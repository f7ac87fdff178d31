#pragma once

#include "mmwp/bilp.hpp"
#include "mmwp/channel.hpp"
#include "mmwp/scenario.hpp"
#include "mmwp/visibility.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mmwp {

/// Which visibility class feeds the indirect indicator of the blended path
/// loss: direct only, direct+specular, or direct+diffuse.
enum class RunMode { Direct, Specular, Diffuse };

RunMode parse_run_mode(const std::string& s);
const char* to_string(RunMode m);

struct CoverageMatrix {
  Eigen::MatrixXd pl;     // candidate x grid, +inf where out of reach
  std::vector<Bitset> C;  // per candidate, bit j = grid j passes the threshold
  Eigen::VectorXd w;      // grid weights, sums to 1
  double gamma_max = 0.0;
  int breakpoint_warnings = 0;  // links with d2d beyond the break-point regime

  std::size_t candidates() const { return C.size(); }
  std::size_t grids() const { return static_cast<std::size_t>(w.size()); }
};

CoverageMatrix build_coverage_matrix(const GridSet& gnb, const GridSet& sa,
                                     const std::vector<VisibilityIndex>& vis,
                                     const ChannelParams& ch, RunMode mode, double gamma_max,
                                     const Eigen::VectorXd& weights = {});

/// Rebuild the threshold sets from the stored path-loss matrix at a new
/// gamma. The path losses themselves do not depend on gamma, so a sweep
/// computes them once and rethresholds per step.
void rethreshold(CoverageMatrix& cm, double gamma_max);

struct GnbPlacement {
  std::vector<int> chosen;  // candidate indices, size n_gnb
  Bitset beta;              // covered indicator per grid
  double covered_fraction = 0.0;
  std::vector<int> outage;  // grid indices with beta = 0
  BilpSolution solve_info;
};

/// Maximum weighted coverage with exactly n_gnb sites. The instance handed
/// to the solver is first shrunk by two exact reductions: grids with
/// identical covering-candidate sets merge (weights summed) and candidates
/// whose coverage set is contained in another's are dropped.
GnbPlacement plan_gnb(const CoverageMatrix& cm, int n_gnb);

/// Site-count starting point: ceil(area / (pi r^2)), never below 1.
int estimate_gnb_count(double sa_area_m2, double cell_radius_m);

GridSet outage_set(const GnbPlacement& p, const GridSet& sa);

}  // namespace mmwp
