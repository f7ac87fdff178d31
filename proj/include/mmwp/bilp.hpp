#pragma once

#include "mmwp/bitset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace mmwp {

enum class Sense { Le, Eq, Ge };

struct BilpRow {
  Eigen::VectorXd a;
  Sense sense = Sense::Le;
  double b = 0.0;
};

/// maximize c'x subject to the rows, x binary.
struct BilpProblem {
  Eigen::VectorXd c;
  std::vector<BilpRow> rows;
  std::vector<std::string> names;  // optional, size n when present

  Eigen::Index n() const { return c.size(); }
};

enum class SolveStatus { Optimal, Feasible, Infeasible };

struct BilpSolution {
  std::vector<int> x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  std::int64_t nodes = 0;
  double bound = 0.0;  // best dual bound at termination
  double gap = 0.0;    // bound - objective when not proven optimal
  double wall_time_s = 0.0;
};

struct SolveOptions {
  double time_limit_s = std::numeric_limits<double>::infinity();
  double gap_tol = 0.0;
  // Hard cap on explored nodes; 0 means none. Unlike the wall-clock limit the
  // cutoff is deterministic, so capped runs stay reproducible.
  std::int64_t node_limit = 0;
  std::vector<int> warm_start;  // offered as the initial incumbent if feasible
};

/// Global optimum by enumerating all 2^n assignments; ties resolved toward
/// the lexicographically smallest assignment. Refuses n > 24.
BilpSolution solve_exhaustive(const BilpProblem& p);

/// Best-first branch and bound. Bounds come from the [0,1] LP relaxation
/// (bounded-variable primal simplex); branching picks the most fractional
/// variable. Deterministic for a fixed problem and options.
BilpSolution solve_branch_and_bound(const BilpProblem& p, const SolveOptions& opts = {});

/// Warm-start heuristic: repeatedly grab the column adding the most
/// uncovered weight. Returns exactly k column indices.
std::vector<int> greedy_max_coverage(const std::vector<Bitset>& columns,
                                     const Eigen::VectorXd& w, int k);

/// Re-checks x against every row: exact integer residuals when the data is
/// integral, |violation| <= tol otherwise.
bool verify_assignment(const BilpProblem& p, const std::vector<int>& x, double tol = 1e-6);

/// LP relaxation over box bounds (lo, hi per variable). Used for the root
/// bound and exposed so tests can pin bound >= integer optimum.
struct LpResult {
  bool feasible = false;
  double value = 0.0;
  Eigen::VectorXd x;
};

LpResult solve_lp_relaxation(const BilpProblem& p, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi);

/// CPLEX LP-format text export for cross-checking with external solvers.
void write_lp_format(const BilpProblem& p, const std::string& path);

}  // namespace mmwp
