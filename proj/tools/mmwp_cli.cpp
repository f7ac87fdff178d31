#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmwp/config.hpp"
#include "mmwp/occlusion.hpp"
#include "mmwp/planner_gnb.hpp"
#include "mmwp/planner_pmr.hpp"
#include "mmwp/reflector.hpp"
#include "mmwp/report.hpp"
#include "mmwp/scenario.hpp"
#include "mmwp/visibility.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace mmwp;

namespace {

struct Options {
  std::string scenario, config, out, mode;
  double gamma_db = 0.0;
  bool has_gamma = false;
  int n_gnb = 0, n_pmr = -1;
  bool has_n_gnb = false;
  double pmr_size = 0.0;
  bool has_pmr_size = false;
  int source_index = 0;
  bool has_source_index = false;
  std::vector<double> source_xyz;
};

struct Workspace {
  RunConfig cfg;
  Scenario sc;
  GridSet service, cands, surface;
  std::optional<OcclusionIndex> occ;
  Eigen::VectorXd weights;  // raw, empty = uniform
};

int missing(const std::string& what, const std::string& path) {
  std::fprintf(stderr, "error: no such %s: %s\n", what.c_str(), path.c_str());
  return 2;
}

RunConfig resolve_config(const Options& o) {
  RunConfig cfg;
  if (!o.config.empty()) cfg = load_run_config(o.config);
  if (!o.scenario.empty()) cfg.scenario_path = o.scenario;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.mode.empty()) cfg.mode = parse_run_mode(o.mode);
  if (o.has_gamma) {
    cfg.explicit_gamma = true;
    cfg.gamma_db = o.gamma_db;
  }
  if (o.has_n_gnb) cfg.n_gnb = o.n_gnb;
  if (o.n_pmr >= 0) cfg.pmr.n_pmr = o.n_pmr;
  if (o.has_pmr_size) cfg.pmr.plate_size = o.pmr_size;
  return cfg;
}

Workspace load_workspace(RunConfig cfg) {
  Workspace ws;
  ws.cfg = std::move(cfg);
  ws.sc = load_scenario(ws.cfg.scenario_path);
  ws.service = generate_service_grid(ws.sc);
  ws.cands = generate_gnb_candidates(ws.sc);
  ws.surface = generate_building_surface_grid(ws.sc, ws.sc.grid_resolution);
  ws.occ.emplace(ws.sc);
  if (!ws.cfg.weights_path.empty()) {
    const auto w = load_weights(ws.cfg.weights_path, ws.service.size());
    ws.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  }
  return ws;
}

ordered_json vec_json(const Vec3& p) { return ordered_json::array({p.x(), p.y(), p.z()}); }

ordered_json config_json(const Workspace& ws) {
  const RunConfig& c = ws.cfg;
  ordered_json j;
  j["scenario"] = c.scenario_path;
  j["out_dir"] = c.out_dir;
  j["mode"] = to_string(c.mode);
  j["n_gnb"] = c.n_gnb;
  j["gamma_db"] = c.resolved_gamma();
  j["gamma_source"] = c.explicit_gamma ? "explicit" : "budget";
  j["channel"] = channel_json(c.channel);
  j["budget"] = budget_json(c.budget);
  j["weights"] = c.weights_path.empty() ? "uniform" : c.weights_path;
  return j;
}

ordered_json scenario_json(const Workspace& ws) {
  ordered_json j;
  j["buildings"] = ws.sc.buildings.size();
  j["service_grids"] = ws.service.size();
  j["gnb_candidates"] = ws.cands.size();
  j["surface_samples"] = ws.surface.size();
  j["resolution_m"] = ws.sc.grid_resolution;
  return j;
}

ordered_json solver_json(const BilpSolution& s) {
  ordered_json j;
  j["status"] = s.status == SolveStatus::Optimal     ? "optimal"
                : s.status == SolveStatus::Feasible ? "feasible"
                                                    : "infeasible";
  j["objective"] = s.objective;
  j["bound"] = s.bound;
  j["nodes"] = s.nodes;
  return j;
}

struct GnbRun {
  SurfaceVisibilityTable table;
  std::vector<VisibilityIndex> vis;
  CoverageMatrix cm;
  GnbPlacement placement;
};

GnbRun run_gnb_stage(const Workspace& ws, double gamma) {
  GnbRun r;
  r.table = build_surface_visibility(ws.service, ws.surface, *ws.occ);
  r.vis.reserve(ws.cands.size());
  for (std::size_t i = 0; i < ws.cands.size(); ++i)
    r.vis.push_back(
        compute_visibility(ws.cands.points[i], ws.service, ws.surface, *ws.occ, &r.table));
  r.cm = build_coverage_matrix(ws.cands, ws.service, r.vis, ws.cfg.channel, ws.cfg.mode, gamma,
                               ws.weights);
  r.placement = plan_gnb(r.cm, ws.cfg.n_gnb);
  return r;
}

ordered_json gnb_results_json(const Workspace& ws, const GnbRun& r) {
  ordered_json chosen = ordered_json::array();
  for (int idx : r.placement.chosen) {
    ordered_json c;
    c["candidate"] = idx;
    c["position"] = vec_json(ws.cands.points[idx]);
    if (static_cast<std::size_t>(idx) < ws.cands.owner.size())
      c["building"] = ws.sc.buildings[ws.cands.owner[idx]].id;
    chosen.push_back(std::move(c));
  }
  ordered_json j;
  j["chosen"] = std::move(chosen);
  j["covered_fraction"] = r.placement.covered_fraction;
  j["outage_grids"] = r.placement.outage.size();
  j["breakpoint_warnings"] = r.cm.breakpoint_warnings;
  j["solver"] = solver_json(r.placement.solve_info);
  return j;
}

int cmd_visibility(const Options& o) {
  Workspace ws = load_workspace(resolve_config(o));
  Vec3 source;
  ordered_json src_json;
  if (o.source_xyz.size() == 3) {
    source = Vec3(o.source_xyz[0], o.source_xyz[1], o.source_xyz[2]);
    src_json["point"] = vec_json(source);
  } else {
    if (ws.cands.size() == 0)
      throw std::runtime_error("scenario has no gNB candidates; give --source x y z");
    const int idx = o.source_index;
    if (idx < 0 || static_cast<std::size_t>(idx) >= ws.cands.size())
      throw std::runtime_error("--source-index out of range (have " +
                               std::to_string(ws.cands.size()) + " candidates)");
    source = ws.cands.points[idx];
    src_json["candidate"] = idx;
    src_json["point"] = vec_json(source);
  }
  const VisibilityIndex vis =
      compute_visibility(source, ws.service, ws.surface, *ws.occ, nullptr);

  fs::create_directories(ws.cfg.out_dir);
  const fs::path out(ws.cfg.out_dir);
  write_visibility_pgm((out / "coverage.pgm").string(), ws.sc, ws.service, vis);
  write_visibility_csv((out / "coverage.csv").string(), ws.service, vis);

  ordered_json rep;
  rep["tool"] = "mmwp";
  rep["command"] = "visibility";
  rep["config"] = config_json(ws);
  rep["scenario"] = scenario_json(ws);
  ordered_json res;
  res["source"] = std::move(src_json);
  res["direct"] = vis.direct.count();
  res["specular"] = vis.specular.count();
  res["diffuse"] = vis.diffuse.count();
  res["blocked"] = ws.service.size() - vis.direct.count() - vis.diffuse.count();
  rep["results"] = std::move(res);
  write_report_json((out / "report.json").string(), rep);
  std::printf("visibility: %zu direct, %zu specular, %zu diffuse of %zu grids\n",
              vis.direct.count(), vis.specular.count(), vis.diffuse.count(), ws.service.size());
  return 0;
}

int cmd_plan_gnb(const Options& o) {
  Workspace ws = load_workspace(resolve_config(o));
  if (ws.cfg.n_gnb > static_cast<int>(ws.cands.size()))
    throw std::runtime_error("n_gnb exceeds the " + std::to_string(ws.cands.size()) +
                             " available candidates");
  const double gamma = ws.cfg.resolved_gamma();
  GnbRun r = run_gnb_stage(ws, gamma);

  fs::create_directories(ws.cfg.out_dir);
  const fs::path out(ws.cfg.out_dir);
  Eigen::VectorXd best_pl(ws.service.size());
  for (std::size_t j = 0; j < ws.service.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (int i : r.placement.chosen) best = std::min(best, r.cm.pl(i, j));
    best_pl[j] = best;
  }
  write_coverage_csv((out / "coverage.csv").string(), ws.service, r.placement.beta, &best_pl,
                     "best_pl_db");
  write_coverage_pgm((out / "coverage.pgm").string(), ws.sc, ws.service, r.placement.beta);

  ordered_json rep;
  rep["tool"] = "mmwp";
  rep["command"] = "plan-gnb";
  rep["config"] = config_json(ws);
  rep["scenario"] = scenario_json(ws);
  rep["results"] = gnb_results_json(ws, r);
  write_report_json((out / "report.json").string(), rep);
  std::printf("plan-gnb: %.4f covered at %.1f dB with %d site(s), %zu grids in outage\n",
              r.placement.covered_fraction, gamma, ws.cfg.n_gnb, r.placement.outage.size());
  return 0;
}

struct PmrStage {
  GridSet outage, mounts, gnb_locs;
  ReflectorParams params;
  double gamma_lin = 0.0;
  int position_stride = 1;
};

PmrStage prepare_pmr_stage(const Workspace& ws, const GnbRun& r) {
  PmrStage st;
  st.outage = outage_set(r.placement, ws.service);
  st.gnb_locs.role = GridRole::GnbCandidate;
  st.gnb_locs.resolution = ws.cands.resolution;
  for (int idx : r.placement.chosen) st.gnb_locs.points.push_back(ws.cands.points[idx]);

  Bitset vgnb(ws.surface.size());
  for (const Vec3& g : st.gnb_locs.points) vgnb |= surface_row(g, ws.surface, *ws.occ);
  Bitset vosa(ws.surface.size());
  for (int j : r.placement.outage) vosa |= r.table.rows[j];
  GridSet mounts =
      pmr_candidates(vgnb, vosa, ws.surface, ws.sc.pmr_band_lo, ws.sc.pmr_band_hi);

  const int stride = ws.cfg.pmr.position_stride;
  st.position_stride = stride;
  if (stride <= 1 && (stride == 1 || mounts.size() <= 600)) {
    st.mounts = std::move(mounts);
    st.position_stride = 1;
  } else {
    // Explicit stride keeps every stride-th sample; auto keeps 600 spread by
    // farthest-point traversal so thin wall faces are not thinned away.
    std::vector<int> keep;
    if (stride > 1) {
      for (std::size_t k = 0; k < mounts.size(); k += stride)
        keep.push_back(static_cast<int>(k));
    } else {
      keep = farthest_point_sample(mounts.points, 600);
    }
    st.mounts.role = mounts.role;
    st.mounts.resolution = mounts.resolution;
    for (int k : keep) {
      st.mounts.points.push_back(mounts.points[k]);
      st.mounts.normals.push_back(mounts.normals[k]);
      st.mounts.owner.push_back(mounts.owner[k]);
    }
  }

  st.params.facet_size = ws.cfg.pmr.facet_size;
  st.params.wavelength = ws.cfg.channel.wavelength();
  st.params.zeta = ws.cfg.pmr.zeta;
  st.params.g_gnb_lin = std::pow(10.0, ws.cfg.budget.gnb_gain_dbi / 10.0);
  st.params.g_ue_lin = std::pow(10.0, ws.cfg.budget.ue_gain_dbi / 10.0);
  st.params.coherent = ws.cfg.pmr.coherent;
  st.gamma_lin = gamma_linear(ws.cfg.resolved_gamma(), ws.cfg.budget.gnb_gain_dbi,
                              ws.cfg.budget.ue_gain_dbi);
  return st;
}

PmrProblemSpec make_pmr_spec(const Workspace& ws, const GnbRun& r, const PmrStage& st,
                             const GainTensor& tensor, int n_pmr) {
  PmrProblemSpec spec;
  spec.tensor = &tensor;
  spec.n_pmr = n_pmr;
  spec.gamma_lin = st.gamma_lin;
  if (ws.weights.size() > 0) {
    spec.weights.resize(st.outage.size());
    for (std::size_t q = 0; q < st.outage.size(); ++q)
      spec.weights[q] = ws.weights[r.placement.outage[q]];
  }
  return spec;
}

int cmd_plan_pmr(const Options& o) {
  Workspace ws = load_workspace(resolve_config(o));
  if (ws.cfg.n_gnb > static_cast<int>(ws.cands.size()))
    throw std::runtime_error("n_gnb exceeds the " + std::to_string(ws.cands.size()) +
                             " available candidates");
  const double gamma = ws.cfg.resolved_gamma();
  GnbRun r = run_gnb_stage(ws, gamma);

  fs::create_directories(ws.cfg.out_dir);
  const fs::path out(ws.cfg.out_dir);

  ordered_json rep;
  rep["tool"] = "mmwp";
  rep["command"] = "plan-pmr";
  rep["config"] = config_json(ws);
  rep["config"]["pmr"] = {{"plate_size_m", ws.cfg.pmr.plate_size},
                          {"facet_size_m", ws.cfg.pmr.facet_size},
                          {"n_pmr", ws.cfg.pmr.n_pmr},
                          {"summation", ws.cfg.pmr.coherent ? "coherent" : "power"},
                          {"zeta", ws.cfg.pmr.zeta},
                          {"node_limit", ws.cfg.pmr.node_limit}};
  rep["scenario"] = scenario_json(ws);
  rep["results"] = gnb_results_json(ws, r);

  if (r.placement.outage.empty()) {
    ordered_json pj;
    pj["osa_grids"] = 0;
    pj["osa_covered_fraction"] = 1.0;
    pj["total_covered_fraction"] = r.placement.covered_fraction;
    pj["picks"] = ordered_json::array();
    rep["results"]["pmr"] = std::move(pj);
    write_report_json((out / "report.json").string(), rep);
    write_coverage_pgm((out / "coverage.pgm").string(), ws.sc, ws.service, r.placement.beta);
    std::printf("plan-pmr: no outage grids at %.1f dB, nothing to do\n", gamma);
    return 0;
  }

  PmrStage st = prepare_pmr_stage(ws, r);
  GainTensor tensor = build_gain_tensor(st.gnb_locs, st.mounts, st.outage, *ws.occ,
                                        ws.cfg.pmr.plate_size, st.params,
                                        ws.cfg.pmr.orientation_stride);
  SolveOptions solver_opts;
  solver_opts.node_limit = ws.cfg.pmr.node_limit;
  PmrProblemSpec spec = make_pmr_spec(ws, r, st, tensor, ws.cfg.pmr.n_pmr);
  PmrPlacement plc = plan_pmr(spec, solver_opts);

  // Final coverage: the gNB stage plus every outage grid the plates lift
  // over the threshold.
  Bitset final_beta = r.placement.beta;
  for (std::size_t q = 0; q < st.outage.size(); ++q)
    if (plc.beta.test(q)) final_beta.set(r.placement.outage[q]);
  double total_fraction = 0.0;
  {
    Eigen::VectorXd wf = ws.weights.size() > 0
                             ? Eigen::VectorXd(ws.weights / ws.weights.sum())
                             : Eigen::VectorXd::Constant(
                                   ws.service.size(), 1.0 / ws.service.size());
    for (std::size_t j = 0; j < ws.service.size(); ++j)
      if (final_beta.test(j)) total_fraction += wf[j];
  }

  Eigen::VectorXd xi_rel(st.outage.size());
  for (std::size_t q = 0; q < st.outage.size(); ++q)
    xi_rel[q] = 10.0 * std::log10(plc.xi[q] / st.gamma_lin);
  write_coverage_csv((out / "coverage.csv").string(), st.outage, plc.beta, &xi_rel, "xi_rel_db");
  write_coverage_pgm((out / "coverage.pgm").string(), ws.sc, ws.service, final_beta);

  ordered_json pj;
  pj["gamma_linear"] = st.gamma_lin;
  pj["big_m"] = plc.big_m;
  pj["summation"] = ws.cfg.pmr.coherent ? "coherent" : "power";
  pj["plate_size_m"] = ws.cfg.pmr.plate_size;
  pj["facet_size_m"] = ws.cfg.pmr.facet_size;
  pj["osa_grids"] = st.outage.size();
  pj["mount_positions"] = st.mounts.size();
  pj["position_stride"] = st.position_stride;
  pj["orientations"] = tensor.nl;
  pj["usable_triples"] = [&] {
    std::size_t n = 0;
    for (std::size_t t = 0; t < tensor.triples(); ++t)
      if (tensor.valid[t] && !tensor.rows[t].empty()) ++n;
    return n;
  }();
  pj["skipped_degenerate"] = tensor.skipped_degenerate;
  pj["near_field_warnings"] = tensor.near_field_warnings;
  ordered_json picks = ordered_json::array();
  for (const auto& p : plc.picks) {
    ordered_json k;
    k["gnb_candidate"] = r.placement.chosen[p.gnb];
    k["gnb_position"] = vec_json(st.gnb_locs.points[p.gnb]);
    k["mount_position"] = vec_json(st.mounts.points[p.position]);
    k["normal"] = vec_json(p.normal);
    k["aimed_outage_index"] = p.aimed_grid;
    k["aimed_service_index"] = r.placement.outage[p.aimed_grid];
    k["aimed_point"] = vec_json(st.outage.points[p.aimed_grid]);
    picks.push_back(std::move(k));
  }
  pj["picks"] = std::move(picks);
  pj["osa_covered_fraction"] = plc.covered_fraction;
  pj["total_covered_fraction"] = total_fraction;
  pj["solver"] = solver_json(plc.solve_info);
  rep["results"]["pmr"] = std::move(pj);
  write_report_json((out / "report.json").string(), rep);

  // Coverage vs reflector count, per plate size, when a sweep is configured.
  if (!ws.cfg.pmr.counts.empty()) {
    std::vector<double> sizes =
        ws.cfg.pmr.sizes.empty() ? std::vector<double>{ws.cfg.pmr.plate_size} : ws.cfg.pmr.sizes;
    std::vector<std::vector<double>> rows;
    for (double size : sizes) {
      GainTensor tz = size == ws.cfg.pmr.plate_size
                          ? std::move(tensor)
                          : build_gain_tensor(st.gnb_locs, st.mounts, st.outage, *ws.occ, size,
                                              st.params, ws.cfg.pmr.orientation_stride);
      std::vector<int> prev_triples;
      for (int n : ws.cfg.pmr.counts) {
        PmrProblemSpec sp = make_pmr_spec(ws, r, st, tz, n);
        sp.warm_triples = prev_triples;
        PmrPlacement pl = plan_pmr(sp, solver_opts);
        rows.push_back({size, static_cast<double>(n), pl.covered_fraction});
        prev_triples.clear();
        for (const auto& p : pl.picks) prev_triples.push_back(tz.triple(p.gnb, p.position, p.orientation));
      }
      if (size == ws.cfg.pmr.plate_size) tensor = std::move(tz);
    }
    write_sweep_csv((out / "sweep.csv").string(),
                    {"plate_size_m", "n_pmr", "osa_covered_fraction"}, rows);
  }
  std::printf("plan-pmr: %.4f of %zu outage grids lifted with %d plate(s) of %.1f m\n",
              plc.covered_fraction, st.outage.size(), ws.cfg.pmr.n_pmr, ws.cfg.pmr.plate_size);
  return 0;
}

int cmd_sweep(const Options& o) {
  Workspace ws = load_workspace(resolve_config(o));
  if (ws.cfg.n_gnb > static_cast<int>(ws.cands.size()))
    throw std::runtime_error("n_gnb exceeds the " + std::to_string(ws.cands.size()) +
                             " available candidates");
  const SweepConfig& sw = ws.cfg.sweep;

  SurfaceVisibilityTable table = build_surface_visibility(ws.service, ws.surface, *ws.occ);
  std::vector<VisibilityIndex> vis;
  vis.reserve(ws.cands.size());
  for (std::size_t i = 0; i < ws.cands.size(); ++i)
    vis.push_back(compute_visibility(ws.cands.points[i], ws.service, ws.surface, *ws.occ, &table));

  std::vector<double> gammas;
  for (double g = sw.gamma_lo_db; g <= sw.gamma_hi_db + 1e-9; g += sw.step_db)
    gammas.push_back(g);

  const RunMode modes[] = {RunMode::Direct, RunMode::Specular, RunMode::Diffuse};
  std::vector<std::vector<double>> rows(gammas.size());
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) rows[gi] = {gammas[gi], 0.0, 0.0, 0.0};
  for (int mi = 0; mi < 3; ++mi) {
    CoverageMatrix cm = build_coverage_matrix(ws.cands, ws.service, vis, ws.cfg.channel,
                                              modes[mi], gammas.back(), ws.weights);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      rethreshold(cm, gammas[gi]);
      GnbPlacement p = plan_gnb(cm, ws.cfg.n_gnb);
      rows[gi][1 + mi] = p.covered_fraction;
    }
  }

  fs::create_directories(ws.cfg.out_dir);
  const fs::path out(ws.cfg.out_dir);
  write_sweep_csv((out / "sweep.csv").string(), {"gamma_db", "direct", "specular", "diffuse"},
                  rows);

  ordered_json rep;
  rep["tool"] = "mmwp";
  rep["command"] = "sweep";
  rep["config"] = config_json(ws);
  rep["config"]["sweep"] = {{"gamma_lo_db", sw.gamma_lo_db},
                            {"gamma_hi_db", sw.gamma_hi_db},
                            {"step_db", sw.step_db}};
  rep["scenario"] = scenario_json(ws);
  ordered_json res;
  res["rows"] = rows.size();
  res["coverage_at_lo"] = {{"direct", rows.front()[1]},
                           {"specular", rows.front()[2]},
                           {"diffuse", rows.front()[3]}};
  res["coverage_at_hi"] = {{"direct", rows.back()[1]},
                           {"specular", rows.back()[2]},
                           {"diffuse", rows.back()[3]}};
  rep["results"] = std::move(res);
  write_report_json((out / "report.json").string(), rep);
  std::printf("sweep: %zu thresholds from %.1f to %.1f dB\n", gammas.size(), sw.gamma_lo_db,
              sw.gamma_hi_db);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave urban coverage planning: visibility, gNB siting, reflector placement"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--scenario", o.scenario, "Scenario JSON path");
    c->add_option("--config", o.config, "Run config JSON path");
    c->add_option("--out", o.out, "Output directory");
    c->add_option("--mode", o.mode, "Visibility mode: direct | specular | diffuse");
  };
  auto add_planning = [&](CLI::App* c) {
    c->add_option("--gamma-db", o.gamma_db, "Coverage threshold in dB")
        ->each([&](const std::string&) { o.has_gamma = true; });
    c->add_option("--n-gnb", o.n_gnb, "Number of gNB sites")
        ->each([&](const std::string&) { o.has_n_gnb = true; });
  };

  CLI::App* vis = app.add_subcommand("visibility", "Classify service grids seen from one source");
  add_common(vis);
  vis->add_option("--source-index", o.source_index, "gNB candidate index to use as source")
      ->each([&](const std::string&) { o.has_source_index = true; });
  vis->add_option("--source", o.source_xyz, "Explicit source point x y z")->expected(3);

  CLI::App* pg = app.add_subcommand("plan-gnb", "Optimal gNB placement at one threshold");
  add_common(pg);
  add_planning(pg);

  CLI::App* pp = app.add_subcommand("plan-pmr", "Reflector placement over the outage area");
  add_common(pp);
  add_planning(pp);
  pp->add_option("--n-pmr", o.n_pmr, "Number of reflectors");
  pp->add_option("--pmr-size", o.pmr_size, "Reflector side length in meters")
      ->each([&](const std::string&) { o.has_pmr_size = true; });

  CLI::App* swp = app.add_subcommand("sweep", "Coverage vs threshold for all three modes");
  add_common(swp);
  add_planning(swp);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!o.config.empty() && !fs::exists(o.config)) return missing("config", o.config);
    RunConfig cfg = resolve_config(o);
    if (cfg.scenario_path.empty()) {
      std::fprintf(stderr, "error: a scenario is required (--scenario or config)\n");
      return 2;
    }
    if (!fs::exists(cfg.scenario_path)) return missing("scenario", cfg.scenario_path);
    if (!cfg.weights_path.empty() && !fs::exists(cfg.weights_path))
      return missing("weights", cfg.weights_path);

    if (app.got_subcommand(vis)) return cmd_visibility(o);
    if (app.got_subcommand(pg)) return cmd_plan_gnb(o);
    if (app.got_subcommand(pp)) return cmd_plan_pmr(o);
    if (app.got_subcommand(swp)) return cmd_sweep(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
