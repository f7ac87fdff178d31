#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "mmwp/planner_pmr.hpp"

using namespace mmwp;

namespace {

// Tensors in this file are built by hand; only the fields the planner reads
// need to be real.
GainTensor make_tensor(int ni, int nk, int nl, int nj,
                       const std::vector<std::vector<std::pair<int, double>>>& rows) {
  GainTensor t;
  t.ni = ni;
  t.nk = nk;
  t.nl = nl;
  t.nj = nj;
  for (int l = 0; l < nl; ++l) t.orient_target.push_back(l % nj);
  t.rows = rows;
  REQUIRE(rows.size() == static_cast<std::size_t>(ni) * nk * nl);
  t.normal.assign(rows.size(), Vec3(0, 0, 1));
  for (std::size_t tr = 0; tr < rows.size(); ++tr)
    t.normal[tr] = Vec3(0.0, std::sin(0.1 * tr), std::cos(0.1 * tr)).normalized();
  t.valid.assign(rows.size(), 1);
  t.side = 1.0;
  return t;
}

// Straight enumeration over triple subsets under the pairing rules. Returns
// the best covered weight, or -1 when no subset of the requested size is
// feasible.
double enumerate_best(const GainTensor& t, double gamma, int n, Eigen::VectorXd w, bool strict) {
  std::vector<int> usable;
  for (std::size_t tr = 0; tr < t.triples(); ++tr)
    if (t.valid[tr] && !t.rows[tr].empty()) usable.push_back(static_cast<int>(tr));
  if (w.size() == 0) w = Eigen::VectorXd::Ones(t.nj);
  w /= w.sum();
  double best = -1.0;
  std::vector<int> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(pick.size()) == n) {
      std::set<int> pairs_used, gnbs_used;
      Eigen::VectorXd xi = Eigen::VectorXd::Zero(t.nj);
      for (int tr : pick) {
        if (!pairs_used.insert(tr / t.nl).second) return;
        if (strict && !gnbs_used.insert(tr / (t.nl * t.nk)).second) return;
        for (const auto& [j, g] : t.rows[tr]) xi[j] += g;
      }
      double v = 0.0;
      for (int j = 0; j < t.nj; ++j)
        if (xi[j] >= gamma) v += w[j];
      best = std::max(best, v);
      return;
    }
    for (std::size_t u = start; u < usable.size(); ++u) {
      pick.push_back(usable[u]);
      self(self, u + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

GainTensor random_tensor(std::mt19937& rng) {
  std::uniform_int_distribution<int> nid(1, 2), nkd(1, 3), nld(1, 2), njd(2, 5);
  std::uniform_real_distribution<double> gd(0.5, 8.0);
  std::uniform_int_distribution<int> coin(0, 99);
  const int ni = nid(rng), nk = nkd(rng), nl = nld(rng), nj = njd(rng);
  std::vector<std::vector<std::pair<int, double>>> rows(
      static_cast<std::size_t>(ni) * nk * nl);
  for (auto& row : rows) {
    if (coin(rng) < 10) continue;  // empty triple now and then
    for (int j = 0; j < nj; ++j)
      if (coin(rng) < 60) row.emplace_back(j, std::round(gd(rng) * 1000.0) / 1000.0);
  }
  return make_tensor(ni, nk, nl, nj, rows);
}

int distinct_feasible_pairs(const GainTensor& t, bool strict) {
  std::set<int> keys;
  for (std::size_t tr = 0; tr < t.triples(); ++tr)
    if (t.valid[tr] && !t.rows[tr].empty())
      keys.insert(strict ? static_cast<int>(tr) / (t.nl * t.nk)
                         : static_cast<int>(tr) / t.nl);
  return static_cast<int>(keys.size());
}

}  // namespace

TEST_CASE("gamma_linear pins") {
  CHECK(gamma_linear(114.0, 21.5, 5.5) == std::pow(10.0, -8.7));
  CHECK(gamma_linear(114.0, 21.5, 5.5) == doctest::Approx(1.9952623149688828e-09).epsilon(1e-15));
  CHECK(gamma_linear(0.0, 0.0, 0.0) == 1.0);
  CHECK(gamma_linear(114.0, 0.0, 0.0) == std::pow(10.0, -11.4));
}

TEST_CASE("hand instance has a unique two-reflector optimum") {
  // Pair 0 = triples {0,1}, pair 1 = triples {2,3}.
  const GainTensor t = make_tensor(1, 2, 2, 3,
                                   {{{0, 5.0}, {1, 1.0}},
                                    {{1, 4.0}},
                                    {{0, 4.2}, {1, 2.5}, {2, 2.0}},
                                    {{0, 1.5}, {2, 3.0}}});
  PmrProblemSpec spec;
  spec.tensor = &t;
  spec.n_pmr = 2;
  spec.gamma_lin = 4.0;
  spec.weights = Eigen::Vector3d(0.2, 0.5, 0.3);

  // {1,2} lifts grids 0 and 1 together: 0.7, strictly best.
  CHECK(enumerate_best(t, 4.0, 2, spec.weights, false) == doctest::Approx(0.7).epsilon(1e-12));

  const PmrPlacement p = plan_pmr(spec);
  CHECK(p.solve_info.status == SolveStatus::Optimal);
  CHECK(p.covered_fraction == doctest::Approx(0.7).epsilon(1e-12));
  REQUIRE(p.picks.size() == 2);
  CHECK(p.picks[0].gnb == 0);
  CHECK(p.picks[0].position == 0);
  CHECK(p.picks[0].orientation == 1);
  CHECK(p.picks[0].aimed_grid == 1);
  CHECK(p.picks[1].position == 1);
  CHECK(p.picks[1].orientation == 0);
  CHECK(p.picks[1].aimed_grid == 0);
  CHECK((p.picks[0].normal - t.normal[t.triple(0, 0, 1)]).norm() == 0.0);
  CHECK(p.xi[0] == doctest::Approx(4.2).epsilon(1e-15));
  CHECK(p.xi[1] == doctest::Approx(6.5).epsilon(1e-15));
  CHECK(p.xi[2] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.beta.test(0));
  CHECK(p.beta.test(1));
  CHECK_FALSE(p.beta.test(2));
}

TEST_CASE("assembled problem shape") {
  const GainTensor t = make_tensor(1, 2, 2, 3,
                                   {{{0, 5.0}, {1, 1.0}},
                                    {{1, 4.0}},
                                    {{0, 4.2}, {1, 2.5}, {2, 2.0}},
                                    {{0, 1.5}, {2, 3.0}}});
  PmrProblemSpec spec;
  spec.tensor = &t;
  spec.n_pmr = 2;
  spec.gamma_lin = 4.0;
  const BilpProblem p = assemble_pmr_bilp(spec);

  // 4 usable alphas; grid 2 tops out at 3.0 < 4.0 so only grids 0,1 get
  // betas; rows: 2 per beta + count + 2 orientation-choice rows.
  REQUIRE(p.n() == 6);
  CHECK(p.names[0] == "a_0_0_0");
  CHECK(p.names[1] == "a_0_0_1");
  CHECK(p.names[2] == "a_0_1_0");
  CHECK(p.names[3] == "a_0_1_1");
  CHECK(p.names[4] == "b_0");
  CHECK(p.names[5] == "b_1");
  CHECK(p.rows.size() == 2 * 2 + 1 + 2);
  CHECK(p.c[0] == 0.0);
  CHECK(p.c[4] == doctest::Approx(1.0 / 3.0));  // uniform weights by default
  int eq_rows = 0, le1_rows = 0;
  for (const BilpRow& row : p.rows) {
    if (row.sense == Sense::Eq) {
      ++eq_rows;
      CHECK(row.b == 2.0);
    }
    if (row.sense == Sense::Le && row.b == 1.0) ++le1_rows;
  }
  CHECK(eq_rows == 1);
  CHECK(le1_rows == 2);

  // Scaled coefficients stay inside [-1, 1].
  for (const BilpRow& row : p.rows) CHECK(row.a.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("plan_pmr matches enumeration and the assembled BILP on random instances") {
  std::mt19937 rng(717);
  std::uniform_real_distribution<double> gammad(2.0, 7.0);
  int compared = 0, infeasible_seen = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const GainTensor t = random_tensor(rng);
    int na = 0;
    for (std::size_t tr = 0; tr < t.triples(); ++tr)
      if (t.valid[tr] && !t.rows[tr].empty()) ++na;
    if (na == 0) continue;
    const double gamma = gammad(rng);
    const int pairs = distinct_feasible_pairs(t, false);
    std::uniform_int_distribution<int> nd(1, std::min(3, na));
    const int n = nd(rng);

    PmrProblemSpec spec;
    spec.tensor = &t;
    spec.n_pmr = n;
    spec.gamma_lin = gamma;
    const double want = enumerate_best(t, gamma, n, {}, false);

    if (n > pairs) {
      REQUIRE(want == -1.0);
      CHECK_THROWS_AS(plan_pmr(spec), std::runtime_error);
      ++infeasible_seen;
      continue;
    }
    REQUIRE(want >= 0.0);
    const PmrPlacement p = plan_pmr(spec);
    CHECK(p.covered_fraction == doctest::Approx(want).epsilon(1e-9));
    ++compared;

    // Internal consistency of the reported placement.
    REQUIRE(static_cast<int>(p.picks.size()) == n);
    std::set<std::pair<int, int>> pairs_used;
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(t.nj);
    for (const auto& pk : p.picks) {
      CHECK(pairs_used.insert({pk.gnb, pk.position}).second);
      const int tr = t.triple(pk.gnb, pk.position, pk.orientation);
      REQUIRE(t.valid[tr] == 1);
      for (const auto& [j, g] : t.rows[tr]) xi[j] += g;
    }
    CHECK((xi - p.xi).cwiseAbs().maxCoeff() < 1e-15);
    for (int j = 0; j < t.nj; ++j) CHECK(p.beta.test(j) == (p.xi[j] >= gamma));

    // The assembled BILP solved independently lands on the same value.
    const BilpProblem bp = assemble_pmr_bilp(spec);
    if (bp.n() <= 20) {
      const BilpSolution ex = solve_exhaustive(bp);
      REQUIRE(ex.status == SolveStatus::Optimal);
      CHECK(ex.objective == doctest::Approx(want).epsilon(1e-9));
    }
  }
  CHECK(compared > 80);
  CHECK(infeasible_seen > 0);
}

TEST_CASE("strict per-gnb rows change the optimum when one gnb dominates") {
  // gNB 0 could serve both grids alone; gNB 1 is weak.
  const GainTensor t = make_tensor(2, 2, 1, 2,
                                   {{{0, 10.0}},
                                    {{1, 10.0}},
                                    {{0, 0.5}},
                                    {{1, 0.5}}});
  PmrProblemSpec spec;
  spec.tensor = &t;
  spec.n_pmr = 2;
  spec.gamma_lin = 5.0;

  const PmrPlacement loose = plan_pmr(spec);
  CHECK(loose.covered_fraction == doctest::Approx(1.0).epsilon(1e-12));

  spec.strict_one_per_gnb = true;
  CHECK(enumerate_best(t, 5.0, 2, {}, true) == doctest::Approx(0.5).epsilon(1e-12));
  const PmrPlacement tight = plan_pmr(spec);
  CHECK(tight.covered_fraction == doctest::Approx(0.5).epsilon(1e-12));
  std::set<int> gnbs;
  for (const auto& pk : tight.picks) CHECK(gnbs.insert(pk.gnb).second);
}

TEST_CASE("hopeless thresholds still place the full budget") {
  const GainTensor t = make_tensor(1, 3, 1, 2,
                                   {{{0, 0.1}}, {{1, 0.2}}, {{0, 0.15}, {1, 0.05}}});
  PmrProblemSpec spec;
  spec.tensor = &t;
  spec.n_pmr = 2;
  spec.gamma_lin = 50.0;
  const PmrPlacement p = plan_pmr(spec);
  CHECK(p.solve_info.status == SolveStatus::Optimal);
  CHECK(p.covered_fraction == 0.0);
  CHECK(p.picks.size() == 2);  // the count row is an equality
  CHECK(p.beta.count() == 0);
}

TEST_CASE("zero reflectors is a no-op placement") {
  const GainTensor t = make_tensor(1, 1, 1, 2, {{{0, 1.0}}});
  PmrProblemSpec spec;
  spec.tensor = &t;
  spec.n_pmr = 0;
  spec.gamma_lin = 0.5;
  const PmrPlacement p = plan_pmr(spec);
  CHECK(p.picks.empty());
  CHECK(p.xi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.beta.count() == 0);
  CHECK(p.solve_info.status == SolveStatus::Optimal);
}

TEST_CASE("threshold boundary: exact equality counts as covered") {
  const GainTensor t = make_tensor(1, 1, 1, 1, {{{0, 4.0}}});
  PmrProblemSpec spec;
  spec.tensor = &t;
  spec.n_pmr = 1;
  spec.gamma_lin = 4.0;
  const PmrPlacement p = plan_pmr(spec);
  CHECK(p.covered_fraction == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.beta.test(0));
}

TEST_CASE("weights steer the placement") {
  // One reflector, two disjoint single-grid options.
  const GainTensor t = make_tensor(1, 2, 1, 2, {{{0, 9.0}}, {{1, 9.0}}});
  PmrProblemSpec spec;
  spec.tensor = &t;
  spec.n_pmr = 1;
  spec.gamma_lin = 5.0;
  spec.weights = Eigen::Vector2d(0.1, 0.9);
  const PmrPlacement p = plan_pmr(spec);
  REQUIRE(p.picks.size() == 1);
  CHECK(p.picks[0].position == 1);
  CHECK(p.covered_fraction == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("coverage is monotone in the reflector budget with warm chaining") {
  std::mt19937 rng(718);
  for (int trial = 0; trial < 20; ++trial) {
    const GainTensor t = random_tensor(rng);
    const int pairs = distinct_feasible_pairs(t, false);
    if (pairs < 3) continue;
    PmrProblemSpec spec;
    spec.tensor = &t;
    spec.gamma_lin = 3.0;
    double prev = -1.0;
    std::vector<int> prev_triples;
    for (int n = 1; n <= 3; ++n) {
      spec.n_pmr = n;
      spec.warm_triples = prev_triples;
      const PmrPlacement p = plan_pmr(spec);
      CHECK(p.covered_fraction >= prev - 1e-12);
      prev = p.covered_fraction;
      prev_triples.clear();
      for (const auto& pk : p.picks)
        prev_triples.push_back(t.triple(pk.gnb, pk.position, pk.orientation));
    }
  }
}

TEST_CASE("error paths") {
  PmrProblemSpec spec;
  CHECK_THROWS_AS(plan_pmr(spec), std::invalid_argument);  // no tensor

  const GainTensor t = make_tensor(1, 1, 1, 2, {{{0, 1.0}}});
  spec.tensor = &t;
  spec.n_pmr = 1;
  spec.gamma_lin = 0.0;
  CHECK_THROWS_AS(plan_pmr(spec), std::invalid_argument);  // gamma not positive

  spec.gamma_lin = 1.0;
  spec.n_pmr = 2;
  CHECK_THROWS_AS(plan_pmr(spec), std::invalid_argument);  // budget > usable triples

  spec.n_pmr = 1;
  spec.weights = Eigen::Vector3d(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(plan_pmr(spec), std::invalid_argument);  // weight length

  spec.weights = {};
  GainTensor empty = make_tensor(1, 1, 1, 2, {{}});
  PmrProblemSpec espec;
  espec.tensor = &empty;
  espec.n_pmr = 1;
  espec.gamma_lin = 1.0;
  CHECK_THROWS_AS(plan_pmr(espec), std::invalid_argument);  // nothing to place
}
