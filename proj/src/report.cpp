#include "mmwp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mmwp {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    // Trim to the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[40];
      std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
      std::sscanf(shorter, "%lf", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << content;
  if (!out) throw std::runtime_error("write failed for \"" + path + "\"");
}

nlohmann::ordered_json channel_json(const ChannelParams& ch) {
  nlohmann::ordered_json j;
  j["fc_ghz"] = ch.fc_ghz;
  j["ue_height_m"] = ch.ue_height;
  j["gnb_height_m"] = ch.gnb_height;
  j["los_model"] =
      ch.los_model == LosProbabilityModel::Standard ? "standard" : "table";
  return j;
}

nlohmann::ordered_json budget_json(const LinkBudget& b) {
  nlohmann::ordered_json j;
  j["tx_power_dbm"] = b.tx_power_dbm;
  j["gnb_gain_dbi"] = b.gnb_gain_dbi;
  j["ue_gain_dbi"] = b.ue_gain_dbi;
  j["cable_loss_db"] = b.cable_loss_db;
  j["body_loss_db"] = b.body_loss_db;
  j["foliage_loss_db"] = b.foliage_loss_db;
  j["rain_ice_loss_db"] = b.rain_ice_loss_db;
  j["interference_margin_db"] = b.interference_margin_db;
  j["shadow_fading_db"] = b.shadow_fading_db;
  j["other_losses_db"] = b.other_losses_db;
  j["bandwidth_hz"] = b.bandwidth_hz;
  j["noise_floor_dbm"] = b.noise_floor_dbm();
  j["ue_noise_figure_db"] = b.ue_noise_figure_db;
  j["target_sinr_db"] = b.target_sinr_db;
  j["mapl_db"] = mapl(b);
  j["mapl_note"] =
      "budget arithmetic gives 120 - SINR dB for the default entries; a commonly "
      "quoted figure for the same table is 121 - SINR (one dB apart)";
  return j;
}

void write_coverage_csv(const std::string& path, const GridSet& service, const Bitset& covered,
                        const Eigen::VectorXd* metric, const std::string& metric_name) {
  if (covered.size() != service.size())
    throw std::invalid_argument("coverage csv: bitset/grid size mismatch");
  if (metric && static_cast<std::size_t>(metric->size()) != service.size())
    throw std::invalid_argument("coverage csv: metric/grid size mismatch");
  std::string out = "index,x,y,covered";
  if (metric) out += "," + metric_name;
  out += "\n";
  for (std::size_t i = 0; i < service.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(service.points[i].x());
    out += ',';
    out += format_double(service.points[i].y());
    out += ',';
    out += covered.test(i) ? '1' : '0';
    if (metric) {
      out += ',';
      out += format_double((*metric)[i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_coverage_pgm(const std::string& path, const Scenario& s, const GridSet& service,
                        const Bitset& covered) {
  if (covered.size() != service.size())
    throw std::invalid_argument("coverage pgm: bitset/grid size mismatch");
  const double res = s.grid_resolution;
  const int nx = static_cast<int>(std::floor(s.width() / res + 1e-9));
  const int ny = static_cast<int>(std::floor(s.depth() / res + 1e-9));
  std::vector<int> value(static_cast<std::size_t>(nx) * ny, 32);
  std::size_t idx = 0;
  for (int jy = 0; jy < ny; ++jy)
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 p(s.bounds_min.x() + (ix + 0.5) * res, s.bounds_min.y() + (jy + 0.5) * res);
      bool inside = false;
      for (const auto& b : s.buildings)
        if (point_in_polygon(p, b.footprint)) {
          inside = true;
          break;
        }
      if (inside) continue;
      if (idx >= service.size())
        throw std::invalid_argument("coverage pgm: grid does not match scenario");
      value[static_cast<std::size_t>(jy) * nx + ix] = covered.test(idx) ? 255 : 96;
      ++idx;
    }
  if (idx != service.size())
    throw std::invalid_argument("coverage pgm: grid does not match scenario");
  std::string out = "P2\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  for (int jy = ny - 1; jy >= 0; --jy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (ix) out += ' ';
      out += std::to_string(value[static_cast<std::size_t>(jy) * nx + ix]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_sweep_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("sweep csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_report_json(const std::string& path, const nlohmann::ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace mmwp
