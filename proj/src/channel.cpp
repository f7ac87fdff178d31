#include "mmwp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmwp {

double LinkBudget::noise_floor_dbm() const {
  return -174.0 + 10.0 * std::log10(bandwidth_hz);
}

double pl_los(double d3d_m, double fc_ghz) {
  if (!(d3d_m > 0.0)) throw std::domain_error("pl_los: distance must be positive");
  return 28.0 + 22.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
}

double pl_nlos(double d3d_m, double fc_ghz, double z_sa_m) {
  if (!(d3d_m > 0.0)) throw std::domain_error("pl_nlos: distance must be positive");
  const double nlos = 13.54 + 39.08 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz) -
                      0.6 * (z_sa_m - 1.5);
  return std::max(pl_los(d3d_m, fc_ghz), nlos);
}

double p_los(double d2d_m, LosProbabilityModel model) {
  if (model == LosProbabilityModel::TableVariant) {
    const double knee = d2d_m > 0.0 ? std::min(18.0 / d2d_m, 1.0) : 1.0;
    const double e = std::exp(-d2d_m / 63.0);
    return std::clamp(knee * (1.0 + e) + e, 0.0, 1.0);
  }
  if (d2d_m <= 18.0) return 1.0;
  const double knee = 18.0 / d2d_m;
  return knee + std::exp(-d2d_m / 63.0) * (1.0 - knee);
}

double breakpoint_distance(double gnb_z_m, double ue_z_m, double fc_ghz) {
  return 4.0 * (gnb_z_m - 1.0) * (ue_z_m - 1.0) * fc_ghz * 1e9 / kSpeedOfLight;
}

double mapl(const LinkBudget& b) {
  const double gains = b.gnb_gain_dbi + b.ue_gain_dbi;
  const double losses = b.cable_loss_db + b.body_loss_db + b.foliage_loss_db +
                        b.rain_ice_loss_db + b.interference_margin_db +
                        b.shadow_fading_db + b.other_losses_db;
  const double sensitivity = b.noise_floor_dbm() + b.ue_noise_figure_db + b.target_sinr_db;
  return b.tx_power_dbm + gains - losses - sensitivity;
}

double gb_plm(bool direct, bool indirect, double d2d_m, double d3d_m,
              const ChannelParams& params) {
  if (direct && indirect)
    throw std::invalid_argument("gb_plm: direct and indirect flags are mutually exclusive");
  if (direct) {
    const double p = p_los(d2d_m, params.los_model);
    return p * pl_los(d3d_m, params.fc_ghz) +
           (1.0 - p) * pl_nlos(d3d_m, params.fc_ghz, params.ue_height);
  }
  if (indirect) return pl_nlos(d3d_m, params.fc_ghz, params.ue_height);
  return params.pl_out;
}

}  // namespace mmwp
