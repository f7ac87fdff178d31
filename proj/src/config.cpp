#include "mmwp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mmwp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ConfigError(origin + ": " + what);
}

void check_keys(const json& j, const std::string& origin, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(origin, "unknown key \"" + it.key() + "\" in " + where);
}

double number(const json& j, const std::string& origin, const std::string& key) {
  if (!j[key].is_number()) fail(origin, "\"" + key + "\" must be a number");
  return j[key].get<double>();
}

int integer(const json& j, const std::string& origin, const std::string& key) {
  if (!j[key].is_number_integer()) fail(origin, "\"" + key + "\" must be an integer");
  return j[key].get<int>();
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(origin, std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");
  check_keys(j, origin, "config",
             {"scenario", "out_dir", "weights", "mode", "n_gnb", "gamma_db", "channel",
              "budget", "pmr", "sweep", "seed"});

  RunConfig c;
  if (j.contains("scenario")) c.scenario_path = j["scenario"].get<std::string>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("weights")) c.weights_path = j["weights"].get<std::string>();
  if (j.contains("mode")) {
    try {
      c.mode = parse_run_mode(j["mode"].get<std::string>());
    } catch (const std::exception& e) {
      fail(origin, e.what());
    }
  }
  if (j.contains("n_gnb")) {
    c.n_gnb = integer(j, origin, "n_gnb");
    if (c.n_gnb < 1) fail(origin, "n_gnb must be at least 1");
  }
  if (j.contains("gamma_db")) {
    c.explicit_gamma = true;
    c.gamma_db = number(j, origin, "gamma_db");
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("channel")) {
    const json& ch = j["channel"];
    check_keys(ch, origin, "channel",
               {"fc_ghz", "ue_height_m", "gnb_height_m", "los_model"});
    if (ch.contains("fc_ghz")) c.channel.fc_ghz = number(ch, origin, "fc_ghz");
    if (ch.contains("ue_height_m")) c.channel.ue_height = number(ch, origin, "ue_height_m");
    if (ch.contains("gnb_height_m")) c.channel.gnb_height = number(ch, origin, "gnb_height_m");
    if (ch.contains("los_model")) {
      const std::string m = ch["los_model"].get<std::string>();
      if (m == "standard")
        c.channel.los_model = LosProbabilityModel::Standard;
      else if (m == "table")
        c.channel.los_model = LosProbabilityModel::TableVariant;
      else
        fail(origin, "los_model must be \"standard\" or \"table\"");
    }
    if (!(c.channel.fc_ghz > 0)) fail(origin, "fc_ghz must be positive");
  }

  if (j.contains("budget")) {
    const json& b = j["budget"];
    check_keys(b, origin, "budget",
               {"tx_power_dbm", "gnb_gain_dbi", "ue_gain_dbi", "cable_loss_db",
                "body_loss_db", "foliage_loss_db", "rain_ice_loss_db",
                "interference_margin_db", "shadow_fading_db", "other_losses_db",
                "bandwidth_hz", "ue_noise_figure_db", "target_sinr_db"});
    LinkBudget& lb = c.budget;
    if (b.contains("tx_power_dbm")) lb.tx_power_dbm = number(b, origin, "tx_power_dbm");
    if (b.contains("gnb_gain_dbi")) lb.gnb_gain_dbi = number(b, origin, "gnb_gain_dbi");
    if (b.contains("ue_gain_dbi")) lb.ue_gain_dbi = number(b, origin, "ue_gain_dbi");
    if (b.contains("cable_loss_db")) lb.cable_loss_db = number(b, origin, "cable_loss_db");
    if (b.contains("body_loss_db")) lb.body_loss_db = number(b, origin, "body_loss_db");
    if (b.contains("foliage_loss_db")) lb.foliage_loss_db = number(b, origin, "foliage_loss_db");
    if (b.contains("rain_ice_loss_db")) lb.rain_ice_loss_db = number(b, origin, "rain_ice_loss_db");
    if (b.contains("interference_margin_db"))
      lb.interference_margin_db = number(b, origin, "interference_margin_db");
    if (b.contains("shadow_fading_db")) lb.shadow_fading_db = number(b, origin, "shadow_fading_db");
    if (b.contains("other_losses_db")) lb.other_losses_db = number(b, origin, "other_losses_db");
    if (b.contains("bandwidth_hz")) {
      lb.bandwidth_hz = number(b, origin, "bandwidth_hz");
      if (!(lb.bandwidth_hz > 0)) fail(origin, "bandwidth_hz must be positive");
    }
    if (b.contains("ue_noise_figure_db"))
      lb.ue_noise_figure_db = number(b, origin, "ue_noise_figure_db");
    if (b.contains("target_sinr_db")) lb.target_sinr_db = number(b, origin, "target_sinr_db");
  }

  if (j.contains("pmr")) {
    const json& p = j["pmr"];
    check_keys(p, origin, "pmr",
               {"plate_size_m", "facet_size_m", "n_pmr", "counts", "sizes_m", "summation",
                "orientation_stride", "position_stride", "zeta", "node_limit"});
    if (p.contains("plate_size_m")) c.pmr.plate_size = number(p, origin, "plate_size_m");
    if (p.contains("facet_size_m")) c.pmr.facet_size = number(p, origin, "facet_size_m");
    if (p.contains("n_pmr")) c.pmr.n_pmr = integer(p, origin, "n_pmr");
    if (p.contains("counts")) {
      for (const auto& v : p["counts"]) c.pmr.counts.push_back(v.get<int>());
      for (int n : c.pmr.counts)
        if (n < 0) fail(origin, "pmr counts must be non-negative");
    }
    if (p.contains("sizes_m")) {
      for (const auto& v : p["sizes_m"]) c.pmr.sizes.push_back(v.get<double>());
      for (double s : c.pmr.sizes)
        if (!(s > 0)) fail(origin, "pmr sizes must be positive");
    }
    if (p.contains("summation")) {
      const std::string m = p["summation"].get<std::string>();
      if (m == "power")
        c.pmr.coherent = false;
      else if (m == "coherent")
        c.pmr.coherent = true;
      else
        fail(origin, "summation must be \"power\" or \"coherent\"");
    }
    if (p.contains("orientation_stride")) {
      c.pmr.orientation_stride = integer(p, origin, "orientation_stride");
      if (c.pmr.orientation_stride < 0) fail(origin, "orientation_stride must be >= 0");
    }
    if (p.contains("position_stride")) {
      c.pmr.position_stride = integer(p, origin, "position_stride");
      if (c.pmr.position_stride < 0) fail(origin, "position_stride must be >= 0");
    }
    if (p.contains("zeta")) c.pmr.zeta = number(p, origin, "zeta");
    if (p.contains("node_limit")) {
      c.pmr.node_limit = integer(p, origin, "node_limit");
      if (c.pmr.node_limit < 0) fail(origin, "node_limit must be >= 0");
    }
    if (!(c.pmr.plate_size > 0)) fail(origin, "plate_size_m must be positive");
    if (!(c.pmr.facet_size > 0)) fail(origin, "facet_size_m must be positive");
    if (c.pmr.facet_size > c.pmr.plate_size + 1e-12)
      fail(origin, "facet_size_m must not exceed plate_size_m");
    if (c.pmr.n_pmr < 0) fail(origin, "n_pmr must be non-negative");
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, origin, "sweep", {"gamma_lo_db", "gamma_hi_db", "step_db"});
    if (s.contains("gamma_lo_db")) c.sweep.gamma_lo_db = number(s, origin, "gamma_lo_db");
    if (s.contains("gamma_hi_db")) c.sweep.gamma_hi_db = number(s, origin, "gamma_hi_db");
    if (s.contains("step_db")) c.sweep.step_db = number(s, origin, "step_db");
    if (!(c.sweep.step_db > 0)) fail(origin, "sweep step_db must be positive");
    if (c.sweep.gamma_hi_db < c.sweep.gamma_lo_db)
      fail(origin, "sweep gamma_hi_db must be >= gamma_lo_db");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path);
}

std::vector<double> load_weights(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open weights \"" + path + "\"");
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      w.push_back(std::stod(line.substr(start)));
    } catch (const std::exception&) {
      throw ConfigError(path + ": bad weight line \"" + line + "\"");
    }
  }
  if (w.size() != expected)
    throw ConfigError(path + ": expected " + std::to_string(expected) + " weights, found " +
                      std::to_string(w.size()));
  return w;
}

}  // namespace mmwp
