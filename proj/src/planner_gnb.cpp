#include "mmwp/planner_gnb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mmwp {

RunMode parse_run_mode(const std::string& s) {
  if (s == "direct" || s == "none") return RunMode::Direct;
  if (s == "specular") return RunMode::Specular;
  if (s == "diffuse") return RunMode::Diffuse;
  throw std::invalid_argument("unknown run mode '" + s + "' (direct|specular|diffuse)");
}

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::Direct: return "direct";
    case RunMode::Specular: return "specular";
    case RunMode::Diffuse: return "diffuse";
  }
  return "?";
}

CoverageMatrix build_coverage_matrix(const GridSet& gnb, const GridSet& sa,
                                     const std::vector<VisibilityIndex>& vis,
                                     const ChannelParams& ch, RunMode mode, double gamma_max,
                                     const Eigen::VectorXd& weights) {
  const std::size_t n = gnb.size(), m = sa.size();
  if (vis.size() != n)
    throw std::invalid_argument("build_coverage_matrix: need one visibility index per candidate");
  CoverageMatrix cm;
  cm.gamma_max = gamma_max;
  if (weights.size() == 0) {
    cm.w = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  } else {
    if (static_cast<std::size_t>(weights.size()) != m)
      throw std::invalid_argument("build_coverage_matrix: weight vector length mismatch");
    if (weights.minCoeff() < 0.0)
      throw std::invalid_argument("build_coverage_matrix: negative weight");
    const double total = weights.sum();
    if (!(total > 0.0)) throw std::invalid_argument("build_coverage_matrix: weights sum to zero");
    cm.w = weights / total;
  }
  cm.pl.resize(n, m);
  cm.C.assign(n, Bitset(m));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& g = gnb.points[i];
    for (std::size_t j = 0; j < m; ++j) {
      const Vec3& t = sa.points[j];
      const bool direct = vis[i].direct.test(j);
      bool indirect = false;
      if (mode == RunMode::Specular) indirect = vis[i].specular.test(j);
      if (mode == RunMode::Diffuse) indirect = vis[i].diffuse.test(j);
      const double d2d = dist2d(g, t);
      const double pl = gb_plm(direct, !direct && indirect, d2d, dist3d(g, t), ch);
      cm.pl(i, j) = pl;
      if (pl < gamma_max) cm.C[i].set(j);
      if (direct && d2d > breakpoint_distance(g.z(), t.z(), ch.fc_ghz)) ++cm.breakpoint_warnings;
    }
  }
  return cm;
}

void rethreshold(CoverageMatrix& cm, double gamma_max) {
  cm.gamma_max = gamma_max;
  const std::size_t n = cm.candidates(), m = cm.grids();
  for (std::size_t i = 0; i < n; ++i) {
    cm.C[i] = Bitset(m);
    for (std::size_t j = 0; j < m; ++j)
      if (cm.pl(i, j) < gamma_max) cm.C[i].set(j);
  }
}

GnbPlacement plan_gnb(const CoverageMatrix& cm, int n_gnb) {
  const int n = static_cast<int>(cm.candidates());
  const std::size_t m = cm.grids();
  if (n_gnb < 1 || n_gnb > n) throw std::invalid_argument("plan_gnb: n_gnb out of range");

  // A single site is a plain weighted argmax; handing the solver a problem
  // whose every feasible point fixes one alpha is pointless work.
  if (n_gnb == 1) {
    int best = 0;
    double best_w = -1.0;
    for (int i = 0; i < n; ++i) {
      double wsum = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (cm.C[i].test(j)) wsum += cm.w[j];
      if (wsum > best_w) {
        best_w = wsum;
        best = i;
      }
    }
    GnbPlacement out;
    out.chosen.push_back(best);
    out.solve_info.status = SolveStatus::Optimal;
    out.solve_info.objective = best_w;
    out.solve_info.bound = best_w;
    out.solve_info.nodes = 1;
    out.beta = cm.C[best];
    out.covered_fraction = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (out.beta.test(j))
        out.covered_fraction += cm.w[j];
      else
        out.outage.push_back(static_cast<int>(j));
    }
    return out;
  }

  // Group grids by their set of covering candidates; uncoverable grids drop
  // out, identical patterns merge with summed weight.
  std::map<std::vector<std::uint64_t>, int> pattern_ids;
  std::vector<int> grid_pattern(m, -1);
  std::vector<double> merged_w;
  std::vector<std::vector<int>> pattern_cols;
  const std::size_t words = (n + 63) / 64;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::uint64_t> key(words, 0);
    std::vector<int> cols;
    for (int i = 0; i < n; ++i) {
      if (cm.C[i].test(j)) {
        key[i >> 6] |= std::uint64_t(1) << (i & 63);
        cols.push_back(i);
      }
    }
    if (cols.empty()) continue;
    auto [it, fresh] = pattern_ids.try_emplace(std::move(key), static_cast<int>(merged_w.size()));
    if (fresh) {
      merged_w.push_back(0.0);
      pattern_cols.push_back(std::move(cols));
    }
    grid_pattern[j] = it->second;
    merged_w[it->second] += cm.w[j];
  }
  const int mp = static_cast<int>(merged_w.size());

  // Candidate coverage over merged patterns, then containment pruning: a
  // candidate whose pattern set sits inside another's can be swapped out of
  // any plan without losing weight.
  std::vector<Bitset> cols(n, Bitset(mp));
  for (int pat = 0; pat < mp; ++pat)
    for (int i : pattern_cols[pat]) cols[i].set(pat);
  std::vector<char> dropped(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n && !dropped[i]; ++k) {
      if (k == i || dropped[k]) continue;
      bool subset = true;
      for (std::size_t wd = 0; wd < cols[i].words() && subset; ++wd)
        subset = (cols[i].word(wd) & ~cols[k].word(wd)) == 0;
      if (subset && (cols[i] == cols[k] ? k < i : true)) dropped[i] = 1;
    }
  }
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (!dropped[i]) keep.push_back(i);
  for (int i = 0; i < n && static_cast<int>(keep.size()) < n_gnb; ++i)
    if (dropped[i]) keep.push_back(i);  // pad so the site-count equality stays feasible
  std::sort(keep.begin(), keep.end());
  const int ns = static_cast<int>(keep.size());

  // Variables: alpha per kept candidate, then beta per merged pattern.
  BilpProblem prob;
  prob.c = Eigen::VectorXd::Zero(ns + mp);
  for (int pat = 0; pat < mp; ++pat) prob.c[ns + pat] = merged_w[pat];
  for (int pat = 0; pat < mp; ++pat) {
    BilpRow row;
    row.a = Eigen::VectorXd::Zero(ns + mp);
    for (int s = 0; s < ns; ++s)
      if (cols[keep[s]].test(pat)) row.a[s] = 1.0;
    row.a[ns + pat] = -1.0;
    row.sense = Sense::Ge;
    row.b = 0.0;
    prob.rows.push_back(std::move(row));
  }
  {
    BilpRow count;
    count.a = Eigen::VectorXd::Zero(ns + mp);
    count.a.head(ns).setOnes();
    count.sense = Sense::Eq;
    count.b = n_gnb;
    prob.rows.push_back(std::move(count));
  }

  SolveOptions opts;
  {
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(merged_w.data(), mp);
    std::vector<Bitset> keep_cols;
    keep_cols.reserve(ns);
    for (int s = 0; s < ns; ++s) keep_cols.push_back(cols[keep[s]]);
    std::vector<int> picks = greedy_max_coverage(keep_cols, wv, n_gnb);
    std::vector<int> warm(ns + mp, 0);
    Bitset covered(mp);
    for (int s : picks) {
      warm[s] = 1;
      covered |= keep_cols[s];
    }
    for (int pat = 0; pat < mp; ++pat) warm[ns + pat] = covered.test(pat) ? 1 : 0;
    opts.warm_start = std::move(warm);
  }

  GnbPlacement out;
  out.solve_info = solve_branch_and_bound(prob, opts);
  if (out.solve_info.status == SolveStatus::Infeasible)
    throw std::runtime_error("plan_gnb: solver reported infeasible site-count constraint");
  for (int s = 0; s < ns; ++s)
    if (out.solve_info.x[s]) out.chosen.push_back(keep[s]);

  out.beta = Bitset(m);
  for (int i : out.chosen) out.beta |= cm.C[i];
  out.covered_fraction = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (out.beta.test(j))
      out.covered_fraction += cm.w[j];
    else
      out.outage.push_back(static_cast<int>(j));
  }
  return out;
}

int estimate_gnb_count(double sa_area_m2, double cell_radius_m) {
  if (!(sa_area_m2 > 0.0) || !(cell_radius_m > 0.0))
    throw std::invalid_argument("estimate_gnb_count: inputs must be positive");
  const double cell = M_PI * cell_radius_m * cell_radius_m;
  return std::max(1, static_cast<int>(std::ceil(sa_area_m2 / cell)));
}

GridSet outage_set(const GnbPlacement& p, const GridSet& sa) {
  GridSet out;
  out.role = GridRole::OutageArea;
  out.resolution = sa.resolution;
  for (int j : p.outage) out.points.push_back(sa.points[j]);
  return out;
}

}  // namespace mmwp
