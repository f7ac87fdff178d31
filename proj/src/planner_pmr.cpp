#include "mmwp/planner_pmr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mmwp {

double gamma_linear(double gamma_max_db, double g_gnb_dbi, double g_ue_dbi) {
  return std::pow(10.0, (g_gnb_dbi + g_ue_dbi - gamma_max_db) / 10.0);
}

namespace {

struct Assembly {
  BilpProblem prob;
  std::vector<int> alpha_triple;  // variable s -> tensor triple index
  std::vector<int> beta_grid;     // variable ns+q -> outage grid index
  std::vector<int> grid_beta;     // outage grid -> beta slot or -1
  Eigen::VectorXd w;              // normalized over all outage grids
  double big_m = 0.0;
};

Assembly assemble(const PmrProblemSpec& spec) {
  if (!spec.tensor) throw std::invalid_argument("pmr: missing gain tensor");
  const GainTensor& t = *spec.tensor;
  if (!(spec.gamma_lin > 0.0)) throw std::invalid_argument("pmr: gamma_lin must be positive");

  Assembly as;
  for (std::size_t tr = 0; tr < t.triples(); ++tr)
    if (t.valid[tr] && !t.rows[tr].empty()) as.alpha_triple.push_back(static_cast<int>(tr));
  const int na = static_cast<int>(as.alpha_triple.size());
  if (na == 0) throw std::invalid_argument("pmr: nothing to place");
  if (spec.n_pmr > na) throw std::invalid_argument("pmr: reflector budget exceeds usable triples");

  if (spec.weights.size() == 0) {
    as.w = Eigen::VectorXd::Constant(t.nj, 1.0 / t.nj);
  } else {
    if (spec.weights.size() != t.nj) throw std::invalid_argument("pmr: weight length mismatch");
    as.w = spec.weights / spec.weights.sum();
  }

  // Global scale: sum over usable triples of their best gain, the paper-style
  // cap on any served power. Dividing everything by it conditions the rows.
  double scale = 0.0;
  for (int s = 0; s < na; ++s) {
    double mx = 0.0;
    for (const auto& [j, g] : t.rows[as.alpha_triple[s]]) mx = std::max(mx, g);
    scale += mx;
  }
  as.big_m = scale;

  // The tightest power any grid can see: at most one orientation per
  // (gnb, position) pair, at most n_pmr picks in total.
  const int pairs = t.ni * t.nk;
  Eigen::MatrixXd pair_max = Eigen::MatrixXd::Zero(pairs, t.nj);
  for (int s = 0; s < na; ++s) {
    const int tr = as.alpha_triple[s];
    const int pair = tr / t.nl;
    for (const auto& [j, g] : t.rows[tr])
      pair_max(pair, j) = std::max(pair_max(pair, j), g);
  }
  std::vector<double> attain(t.nj, 0.0);
  std::vector<double> col(pairs);
  for (int j = 0; j < t.nj; ++j) {
    for (int p = 0; p < pairs; ++p) col[p] = pair_max(p, j);
    const int top = std::min(spec.n_pmr, pairs);
    std::partial_sort(col.begin(), col.begin() + top, col.end(), std::greater<>());
    for (int p = 0; p < top; ++p) attain[j] += col[p];
  }

  as.grid_beta.assign(t.nj, -1);
  for (int j = 0; j < t.nj; ++j) {
    if (attain[j] >= spec.gamma_lin) {
      as.grid_beta[j] = static_cast<int>(as.beta_grid.size());
      as.beta_grid.push_back(j);
    }
  }
  const int nb = static_cast<int>(as.beta_grid.size());
  const int nv = na + nb;

  BilpProblem& p = as.prob;
  p.c = Eigen::VectorXd::Zero(nv);
  for (int q = 0; q < nb; ++q) p.c[na + q] = as.w[as.beta_grid[q]];
  p.names.reserve(nv);
  for (int s = 0; s < na; ++s) {
    const int tr = as.alpha_triple[s];
    const int l = tr % t.nl, k = (tr / t.nl) % t.nk, i = tr / (t.nl * t.nk);
    p.names.push_back("a_" + std::to_string(i) + "_" + std::to_string(k) + "_" +
                      std::to_string(l));
  }
  for (int q = 0; q < nb; ++q) p.names.push_back("b_" + std::to_string(as.beta_grid[q]));

  // Served-power expression per retained grid, in scaled units.
  std::vector<Eigen::VectorXd> xi_row(nb, Eigen::VectorXd::Zero(nv));
  for (int s = 0; s < na; ++s)
    for (const auto& [j, g] : t.rows[as.alpha_triple[s]]) {
      const int q = as.grid_beta[j];
      if (q >= 0) xi_row[q][s] = g / scale;
    }
  const double gamma_s = spec.gamma_lin / scale;

  for (int q = 0; q < nb; ++q) {
    // Covered only above threshold: xi >= gamma * beta (Big-M = gamma).
    BilpRow lo;
    lo.a = xi_row[q];
    lo.a[na + q] = -gamma_s;
    lo.sense = Sense::Ge;
    lo.b = 0.0;
    p.rows.push_back(std::move(lo));
    // Above threshold forces covered: xi - gamma <= M_j * beta.
    BilpRow hi;
    hi.a = xi_row[q];
    hi.a[na + q] = -std::max(attain[as.beta_grid[q]] / scale - gamma_s, 0.0);
    hi.sense = Sense::Le;
    hi.b = gamma_s;
    p.rows.push_back(std::move(hi));
  }
  {
    BilpRow count;
    count.a = Eigen::VectorXd::Zero(nv);
    count.a.head(na).setOnes();
    count.sense = Sense::Eq;
    count.b = spec.n_pmr;
    p.rows.push_back(std::move(count));
  }
  // One orientation per (gnb, position).
  for (int pair = 0; pair < pairs; ++pair) {
    BilpRow row;
    row.a = Eigen::VectorXd::Zero(nv);
    int cnt = 0;
    for (int s = 0; s < na; ++s)
      if (as.alpha_triple[s] / t.nl == pair) {
        row.a[s] = 1.0;
        ++cnt;
      }
    if (cnt >= 2) {
      row.sense = Sense::Le;
      row.b = 1.0;
      p.rows.push_back(std::move(row));
    }
  }
  if (spec.strict_one_per_gnb) {
    for (int i = 0; i < t.ni; ++i) {
      BilpRow row;
      row.a = Eigen::VectorXd::Zero(nv);
      int cnt = 0;
      for (int s = 0; s < na; ++s)
        if (as.alpha_triple[s] / (t.nl * t.nk) == i) {
          row.a[s] = 1.0;
          ++cnt;
        }
      if (cnt >= 2) {
        row.sense = Sense::Le;
        row.b = 1.0;
        p.rows.push_back(std::move(row));
      }
    }
  }
  return as;
}

}  // namespace

BilpProblem assemble_pmr_bilp(const PmrProblemSpec& spec) { return assemble(spec).prob; }

PmrPlacement plan_pmr(const PmrProblemSpec& spec, const SolveOptions& opts) {
  if (!spec.tensor) throw std::invalid_argument("pmr: missing gain tensor");
  const GainTensor& t = *spec.tensor;
  PmrPlacement out;
  if (spec.n_pmr == 0) {
    out.xi = Eigen::VectorXd::Zero(t.nj);
    out.beta = Bitset(t.nj);
    out.solve_info.status = SolveStatus::Optimal;
    return out;
  }
  Assembly as = assemble(spec);
  const int na = static_cast<int>(as.alpha_triple.size());
  const int nb = static_cast<int>(as.beta_grid.size());

  // Greedy warm start: marginal newly-covered weight, one orientation per
  // (gnb, position) pair.
  SolveOptions run_opts = opts;
  if (run_opts.warm_start.empty()) {
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(t.nj);
    std::vector<char> pair_used(t.ni * t.nk, 0), gnb_used(t.ni, 0), picked(na, 0);
    std::vector<int> picks;
    std::vector<int> slot_of(t.triples(), -1);
    for (int s = 0; s < na; ++s) slot_of[as.alpha_triple[s]] = s;
    for (int tr : spec.warm_triples) {
      if (static_cast<int>(picks.size()) >= spec.n_pmr) break;
      if (tr < 0 || tr >= static_cast<int>(t.triples()) || slot_of[tr] < 0) continue;
      const int s = slot_of[tr];
      if (picked[s] || pair_used[tr / t.nl]) continue;
      if (spec.strict_one_per_gnb && gnb_used[tr / (t.nl * t.nk)]) continue;
      picked[s] = 1;
      picks.push_back(s);
      pair_used[tr / t.nl] = 1;
      gnb_used[tr / (t.nl * t.nk)] = 1;
      for (const auto& [j, g] : t.rows[tr]) xi[j] += g;
    }
    for (int step = static_cast<int>(picks.size()); step < spec.n_pmr; ++step) {
      int best = -1;
      double best_gain = -1.0;
      for (int s = 0; s < na; ++s) {
        if (picked[s]) continue;
        const int tr = as.alpha_triple[s];
        if (pair_used[tr / t.nl]) continue;
        if (spec.strict_one_per_gnb && gnb_used[tr / (t.nl * t.nk)]) continue;
        double gain = 0.0;
        for (const auto& [j, g] : t.rows[tr])
          if (xi[j] < spec.gamma_lin && xi[j] + g >= spec.gamma_lin) gain += as.w[j];
        if (gain > best_gain) {
          best_gain = gain;
          best = s;
        }
      }
      if (best < 0) break;
      picked[best] = 1;
      picks.push_back(best);
      const int tr = as.alpha_triple[best];
      pair_used[tr / t.nl] = 1;
      gnb_used[tr / (t.nl * t.nk)] = 1;
      for (const auto& [j, g] : t.rows[tr]) xi[j] += g;
    }
    if (static_cast<int>(picks.size()) == spec.n_pmr) {
      std::vector<int> warm(na + nb, 0);
      for (int s : picks) warm[s] = 1;
      for (int q = 0; q < nb; ++q)
        if (xi[as.beta_grid[q]] >= spec.gamma_lin) warm[na + q] = 1;
      run_opts.warm_start = std::move(warm);
    }
  }

  out.solve_info = solve_branch_and_bound(as.prob, run_opts);
  out.big_m = as.big_m;
  if (out.solve_info.status == SolveStatus::Infeasible)
    throw std::runtime_error("plan_pmr: no feasible reflector assignment");

  out.xi = Eigen::VectorXd::Zero(t.nj);
  for (int s = 0; s < na; ++s) {
    if (!out.solve_info.x[s]) continue;
    const int tr = as.alpha_triple[s];
    const int l = tr % t.nl, k = (tr / t.nl) % t.nk, i = tr / (t.nl * t.nk);
    out.picks.push_back({i, k, l, t.normal[tr], t.orient_target[l]});
    for (const auto& [j, g] : t.rows[tr]) out.xi[j] += g;
  }

  // The indicators must agree with served power recomputed from raw gains;
  // a mismatch outside the floating boundary band means the Big-M rows lied.
  out.beta = Bitset(t.nj);
  for (int j = 0; j < t.nj; ++j) {
    const bool covered = out.xi[j] >= spec.gamma_lin;
    if (covered) out.beta.set(j);
    const int q = as.grid_beta[j];
    const bool solver_says = q >= 0 && out.solve_info.x[na + q] != 0;
    const double tol = 1e-12 * std::max(spec.gamma_lin, out.xi[j]);
    if (covered != solver_says && std::abs(out.xi[j] - spec.gamma_lin) > tol)
      throw std::runtime_error("plan_pmr: indicator mismatch at grid " + std::to_string(j) +
                               " (served " + std::to_string(out.xi[j]) + ", threshold " +
                               std::to_string(spec.gamma_lin) + ")");
    if (covered) out.covered_fraction += as.w[j];
  }
  return out;
}

}  // namespace mmwp
