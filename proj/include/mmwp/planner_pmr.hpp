#pragma once

#include "mmwp/bilp.hpp"
#include "mmwp/reflector.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mmwp {

/// Linear end-to-end gain threshold equivalent to a dB path-loss budget:
/// the plate gain model already carries both antenna gains, so the cut is
/// G_tot,lin * 10^(-gamma_max/10).
double gamma_linear(double gamma_max_db, double g_gnb_dbi, double g_ue_dbi);

struct PmrProblemSpec {
  const GainTensor* tensor = nullptr;
  int n_pmr = 0;
  double gamma_lin = 0.0;
  Eigen::VectorXd weights;   // over outage grids; uniform when empty
  bool strict_one_per_gnb = false;  // literal one-reflector-per-gNB row
  std::vector<int> warm_triples;    // seed picks for the warm start (tensor triple indices)
};

struct PmrPlacement {
  struct Pick {
    int gnb = 0, position = 0, orientation = 0;
    Vec3 normal{0, 0, 1};
    int aimed_grid = 0;
  };
  std::vector<Pick> picks;
  Eigen::VectorXd xi;  // per outage grid, linear served power
  Bitset beta;         // recomputed coverage indicator
  double covered_fraction = 0.0;
  double big_m = 0.0;
  BilpSolution solve_info;
};

/// Big-M assembly: alpha per usable triple, beta per outage grid that is
/// attainable at all; the served-power expression is substituted into the
/// two indicator rows, and all gain coefficients are scaled by the global
/// Big-M so the matrix sits in [0,1].
BilpProblem assemble_pmr_bilp(const PmrProblemSpec& spec);

PmrPlacement plan_pmr(const PmrProblemSpec& spec, const SolveOptions& opts = {});

}  // namespace mmwp
