#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "mmwp/planner_gnb.hpp"

using namespace mmwp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Synthetic instance: coverage bitsets and weights only, path losses filled
// in consistently so rethreshold keeps working on it.
CoverageMatrix make_matrix(const std::vector<std::vector<int>>& cover, int ngrids,
                           const std::vector<double>& weights = {}) {
  CoverageMatrix cm;
  const int nc = static_cast<int>(cover.size());
  cm.gamma_max = 100.0;
  cm.pl = Eigen::MatrixXd::Constant(nc, ngrids, kInf);
  cm.C.assign(nc, Bitset(ngrids));
  for (int i = 0; i < nc; ++i)
    for (int j : cover[i]) {
      cm.C[i].set(j);
      cm.pl(i, j) = 90.0;
    }
  if (weights.empty()) {
    cm.w = Eigen::VectorXd::Constant(ngrids, 1.0 / ngrids);
  } else {
    cm.w = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());
    cm.w /= cm.w.sum();
  }
  return cm;
}

// Best union weight over all n-subsets, by straight enumeration.
double brute_force_best(const CoverageMatrix& cm, int k) {
  const int nc = static_cast<int>(cm.candidates());
  std::vector<int> pick(k);
  double best = -1.0;
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      Bitset u(cm.grids());
      for (int i : pick) u |= cm.C[i];
      double v = 0.0;
      for (std::size_t j = 0; j < cm.grids(); ++j)
        if (u.test(j)) v += cm.w[j];
      best = std::max(best, v);
      return;
    }
    for (int i = start; i <= nc - (k - depth); ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

Scenario two_block_scene() {
  Scenario s;
  s.bounds_min = Vec2(0, 0);
  s.bounds_max = Vec2(30, 30);
  s.grid_resolution = 1.0;
  s.ue_height = 1.5;
  s.gnb_mount_offset = 0.5;
  Building b0;
  b0.id = "B0";
  b0.footprint = {Vec2(8, 8), Vec2(14, 8), Vec2(14, 20), Vec2(8, 20)};
  b0.height = 12.0;
  Building b1;
  b1.id = "B1";
  b1.footprint = {Vec2(18, 6), Vec2(24, 6), Vec2(24, 12), Vec2(18, 12)};
  b1.height = 8.0;
  s.buildings = {b0, b1};
  validate_scenario(s);
  return s;
}

struct SceneFixture {
  Scenario sc;
  OcclusionIndex occ;
  GridSet service, cands, surface;
  std::vector<VisibilityIndex> vis;

  SceneFixture()
      : sc(two_block_scene()),
        occ(sc),
        service(generate_service_grid(sc)),
        cands(generate_gnb_candidates(sc)),
        surface(generate_building_surface_grid(sc, 1.0)) {
    const SurfaceVisibilityTable table = build_surface_visibility(service, surface, occ);
    vis.reserve(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i)
      vis.push_back(compute_visibility(cands.points[i], service, surface, occ, &table));
  }
};

const SceneFixture& scene() {
  static SceneFixture f;
  return f;
}

}  // namespace

TEST_CASE("two sites out of three chain patterns cover everything") {
  const CoverageMatrix cm = make_matrix({{0, 1}, {1, 2}, {2, 3}}, 4);
  const GnbPlacement p = plan_gnb(cm, 2);
  CHECK(p.solve_info.status == SolveStatus::Optimal);
  CHECK(p.covered_fraction == doctest::Approx(1.0));
  CHECK(p.chosen == std::vector<int>{0, 2});
  CHECK(p.beta.count() == 4);
  CHECK(p.outage.empty());
}

TEST_CASE("plan_gnb matches subset enumeration on random instances") {
  std::mt19937 rng(515);
  std::uniform_int_distribution<int> ncd(1, 8), ngd(1, 14);
  std::uniform_real_distribution<double> wd(0.1, 2.0), dens(0.15, 0.6);
  std::uniform_int_distribution<int> coin(0, 99);
  for (int trial = 0; trial < 120; ++trial) {
    const int nc = ncd(rng), ng = ngd(rng);
    const double density = dens(rng);
    std::vector<std::vector<int>> cover(nc);
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < ng; ++j)
        if (coin(rng) < 100 * density) cover[i].push_back(j);
    std::vector<double> w(ng);
    for (double& x : w) x = wd(rng);
    const CoverageMatrix cm = make_matrix(cover, ng, w);
    std::uniform_int_distribution<int> kd(1, nc);
    const int k = kd(rng);
    const GnbPlacement p = plan_gnb(cm, k);
    REQUIRE(p.solve_info.status == SolveStatus::Optimal);
    CHECK(p.covered_fraction == doctest::Approx(brute_force_best(cm, k)).epsilon(1e-12));

    // The reported pieces must be mutually consistent.
    REQUIRE(static_cast<int>(p.chosen.size()) == k);
    Bitset u(cm.grids());
    std::vector<char> seen(nc, 0);
    for (int i : p.chosen) {
      REQUIRE(i >= 0);
      REQUIRE(i < nc);
      CHECK(!seen[i]);
      seen[i] = 1;
      u |= cm.C[i];
    }
    CHECK(u == p.beta);
    double v = 0.0;
    for (std::size_t j = 0; j < cm.grids(); ++j)
      if (u.test(j)) v += cm.w[j];
    CHECK(p.covered_fraction == doctest::Approx(v).epsilon(1e-12));
    std::size_t out = 0;
    for (int j : p.outage) {
      CHECK_FALSE(u.test(j));
      ++out;
    }
    CHECK(out + u.count() == cm.grids());
  }
}

TEST_CASE("degenerate instances still return the requested site count") {
  const CoverageMatrix cm = make_matrix({{}, {}, {}}, 5);
  const GnbPlacement p = plan_gnb(cm, 2);
  CHECK(p.covered_fraction == doctest::Approx(0.0));
  REQUIRE(p.chosen.size() == 2);
  CHECK(p.chosen[0] != p.chosen[1]);
  CHECK(p.outage.size() == 5);

  // One dominant candidate, more sites requested than useful.
  const CoverageMatrix cm2 = make_matrix({{0, 1, 2}, {0}, {1}, {2}}, 3);
  const GnbPlacement p2 = plan_gnb(cm2, 3);
  CHECK(p2.covered_fraction == doctest::Approx(1.0));
  REQUIRE(p2.chosen.size() == 3);

  CHECK_THROWS_AS(plan_gnb(cm, 0), std::invalid_argument);
  CHECK_THROWS_AS(plan_gnb(cm, 4), std::invalid_argument);
}

TEST_CASE("estimate_gnb_count") {
  CHECK(estimate_gnb_count(400.0 * M_PI, 10.0) == 4);
  CHECK(estimate_gnb_count(401.0 * M_PI, 10.0) == 5);
  CHECK(estimate_gnb_count(1.0, 100.0) == 1);
  CHECK_THROWS_AS(estimate_gnb_count(0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_gnb_count(100.0, 0.0), std::invalid_argument);
}

TEST_CASE("coverage matrix encodes the visibility-blended path loss") {
  const SceneFixture& f = scene();
  ChannelParams ch;
  ch.fc_ghz = 28.0;
  ch.ue_height = f.sc.ue_height;
  const double gamma = 120.0;
  const CoverageMatrix dm = build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Direct,
                                                  gamma);
  const CoverageMatrix sm = build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Specular,
                                                  gamma);
  const CoverageMatrix fm = build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse,
                                                  gamma);
  REQUIRE(dm.candidates() == f.cands.size());
  REQUIRE(dm.grids() == f.service.size());

  for (std::size_t i = 0; i < f.cands.size(); i += 9) {
    for (std::size_t j = 0; j < f.service.size(); ++j) {
      const Vec3& g = f.cands.points[i];
      const Vec3& t = f.service.points[j];
      const bool direct = f.vis[i].direct.test(j);
      const double d2d = dist2d(g, t), d3d = dist3d(g, t);
      CHECK(dm.pl(i, j) == gb_plm(direct, false, d2d, d3d, ch));
      CHECK(sm.pl(i, j) ==
            gb_plm(direct, !direct && f.vis[i].specular.test(j), d2d, d3d, ch));
      CHECK(fm.pl(i, j) ==
            gb_plm(direct, !direct && f.vis[i].diffuse.test(j), d2d, d3d, ch));
      CHECK(fm.C[i].test(j) == (fm.pl(i, j) < gamma));
    }
    // Widening the visibility class can only widen coverage.
    for (std::size_t j = 0; j < f.service.size(); ++j) {
      if (dm.C[i].test(j)) CHECK(sm.C[i].test(j));
      if (sm.C[i].test(j)) CHECK(fm.C[i].test(j));
    }
  }
}

TEST_CASE("rethreshold reproduces a fresh build at the new gamma") {
  const SceneFixture& f = scene();
  ChannelParams ch;
  ch.ue_height = f.sc.ue_height;
  CoverageMatrix cm = build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 120.0);
  const CoverageMatrix fresh =
      build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 104.0);
  const Eigen::MatrixXd pl_before = cm.pl;
  rethreshold(cm, 104.0);
  CHECK(cm.gamma_max == 104.0);
  CHECK(cm.pl == pl_before);
  REQUIRE(cm.C.size() == fresh.C.size());
  for (std::size_t i = 0; i < cm.C.size(); ++i) {
    CHECK(cm.C[i] == fresh.C[i]);
    // Tightening gamma can only shrink each coverage set.
    for (std::size_t j = 0; j < cm.grids(); ++j)
      if (cm.C[i].test(j)) CHECK(fresh.pl(i, j) < 120.0);
  }
}

TEST_CASE("weight handling") {
  const SceneFixture& f = scene();
  ChannelParams ch;
  ch.ue_height = f.sc.ue_height;
  CHECK_THROWS_AS(build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 120.0,
                                        Eigen::VectorXd::Ones(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 120.0,
                                        -Eigen::VectorXd::Ones(f.service.size())),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 120.0,
                                        Eigen::VectorXd::Zero(f.service.size())),
                  std::invalid_argument);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(f.service.size()) * 2.0;
  const CoverageMatrix cm =
      build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 120.0, w);
  CHECK(cm.w.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cm.w[0] == doctest::Approx(1.0 / f.service.size()).epsilon(1e-12));

  // Weight concentration steers the choice: all mass on one grid makes any
  // candidate covering it optimal.
  const CoverageMatrix base =
      build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 120.0);
  std::size_t target = 0;
  for (std::size_t j = 0; j < f.service.size(); ++j)
    if (base.C[0].test(j)) { target = j; break; }
  Eigen::VectorXd spike = Eigen::VectorXd::Constant(f.service.size(), 1e-9);
  spike[target] = 1.0;
  const CoverageMatrix cms =
      build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 120.0, spike);
  const GnbPlacement p = plan_gnb(cms, 1);
  CHECK(cms.C[p.chosen[0]].test(target));
  CHECK(p.covered_fraction > 0.99);
}

TEST_CASE("coverage grows with gamma and with site count") {
  const SceneFixture& f = scene();
  ChannelParams ch;
  ch.ue_height = f.sc.ue_height;
  CoverageMatrix cm = build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Diffuse, 125.0);
  double prev = -1.0;
  for (double gamma : {95.0, 105.0, 115.0, 125.0}) {
    rethreshold(cm, gamma);
    const GnbPlacement p = plan_gnb(cm, 2);
    CHECK(p.covered_fraction >= prev - 1e-12);
    prev = p.covered_fraction;
  }
  rethreshold(cm, 110.0);
  prev = -1.0;
  for (int n = 1; n <= 3; ++n) {
    const GnbPlacement p = plan_gnb(cm, n);
    CHECK(p.covered_fraction >= prev - 1e-12);
    prev = p.covered_fraction;
  }
}

TEST_CASE("outage_set extracts the uncovered points") {
  const SceneFixture& f = scene();
  ChannelParams ch;
  ch.ue_height = f.sc.ue_height;
  const CoverageMatrix cm =
      build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Direct, 104.0);
  const GnbPlacement p = plan_gnb(cm, 1);
  const GridSet out = outage_set(p, f.service);
  CHECK(out.role == GridRole::OutageArea);
  REQUIRE(out.size() == p.outage.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec3& a = out.points[k];
    const Vec3& b = f.service.points[p.outage[k]];
    CHECK(a.cwiseEqual(b).all());
  }
}

TEST_CASE("breakpoint warnings count far direct links") {
  const SceneFixture& f = scene();
  ChannelParams ch;
  ch.fc_ghz = 0.05;  // pulls the break point inside the map on purpose
  ch.ue_height = f.sc.ue_height;
  const CoverageMatrix cm =
      build_coverage_matrix(f.cands, f.service, f.vis, ch, RunMode::Direct, 120.0);
  int expect = 0;
  for (std::size_t i = 0; i < f.cands.size(); ++i)
    for (std::size_t j = 0; j < f.service.size(); ++j)
      if (f.vis[i].direct.test(j) &&
          dist2d(f.cands.points[i], f.service.points[j]) >
              breakpoint_distance(f.cands.points[i].z(), f.service.points[j].z(), ch.fc_ghz))
        ++expect;
  CHECK(expect > 0);
  CHECK(cm.breakpoint_warnings == expect);

  ChannelParams wide;
  wide.fc_ghz = 28.0;
  wide.ue_height = f.sc.ue_height;
  const CoverageMatrix cm2 =
      build_coverage_matrix(f.cands, f.service, f.vis, wide, RunMode::Direct, 120.0);
  CHECK(cm2.breakpoint_warnings == 0);  // break point is kilometers out here
}
