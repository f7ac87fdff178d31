#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmwp/channel.hpp"
#include "mmwp/planner_gnb.hpp"

namespace mmwp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PmrConfig {
  double plate_size = 1.0;               // reflector side a^PMR (m)
  double facet_size = 0.1;               // integration facet a^R (m)
  int n_pmr = 0;
  std::vector<int> counts;               // sweep counts; empty = single n_pmr run
  std::vector<double> sizes;             // sweep plate sizes; empty = {plate_size}
  bool coherent = false;                 // facet summation: power (default) or coherent
  int orientation_stride = 0;            // 0 = auto
  int position_stride = 0;               // mounting-candidate subsample, 0 = auto
  double zeta = 2.0;                     // spreading exponent per hop
  std::int64_t node_limit = 20000;       // search-node cap per placement solve, 0 = none
};

struct SweepConfig {
  double gamma_lo_db = 85.0;
  double gamma_hi_db = 125.0;
  double step_db = 1.0;
};

struct RunConfig {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string weights_path;
  RunMode mode = RunMode::Diffuse;
  int n_gnb = 1;
  bool explicit_gamma = false;
  double gamma_db = 0.0;                 // valid when explicit_gamma
  ChannelParams channel;
  LinkBudget budget;
  PmrConfig pmr;
  SweepConfig sweep;
  std::uint64_t seed = 0;

  double resolved_gamma() const { return explicit_gamma ? gamma_db : mapl(budget); }
};

/// Parse a JSON run config; unknown keys are errors so typos surface early.
RunConfig parse_run_config(const std::string& text, const std::string& origin);

/// Load from disk. Throws ConfigError with the path on any failure.
RunConfig load_run_config(const std::string& path);

/// One weight per service grid, CSV (one value per line, # comments allowed).
std::vector<double> load_weights(const std::string& path, std::size_t expected);

}  // namespace mmwp
