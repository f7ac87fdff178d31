#pragma once

#include <limits>

namespace mmwp {

inline constexpr double kSpeedOfLight = 299792458.0;

/// LoS probability: the 3GPP TR 38.901 UMa expression, or the table variant
/// some write-ups quote (which exceeds 1 at short range and is clamped here).
enum class LosProbabilityModel { Standard, TableVariant };

struct ChannelParams {
  double fc_ghz = 28.0;
  double ue_height = 1.5;
  double gnb_height = 25.0;
  double pl_out = std::numeric_limits<double>::infinity();
  LosProbabilityModel los_model = LosProbabilityModel::Standard;

  double wavelength() const { return kSpeedOfLight / (fc_ghz * 1e9); }
};

struct LinkBudget {
  double tx_power_dbm = 49.0;
  double gnb_gain_dbi = 21.5;
  double ue_gain_dbi = 5.5;
  double cable_loss_db = 2.0;
  double body_loss_db = 13.0;
  double foliage_loss_db = 16.0;
  double rain_ice_loss_db = 3.0;
  double interference_margin_db = 1.0;
  double shadow_fading_db = 7.0;
  double other_losses_db = 3.0;
  double bandwidth_hz = 100e6;
  double ue_noise_figure_db = 5.0;
  double target_sinr_db = 7.0;

  double noise_floor_dbm() const;  // -174 dBm/Hz + 10 log10(W)
};

/// UMa line-of-sight path loss in dB, fc in GHz. Throws on d3d <= 0.
double pl_los(double d3d_m, double fc_ghz);

/// UMa non-line-of-sight path loss in dB, floored at the LoS value.
double pl_nlos(double d3d_m, double fc_ghz, double z_sa_m);

/// LoS probability as a function of 2D distance; 1 within 18 m.
double p_los(double d2d_m, LosProbabilityModel model = LosProbabilityModel::Standard);

inline double p_nlos(double d2d_m, LosProbabilityModel model = LosProbabilityModel::Standard) {
  return 1.0 - p_los(d2d_m, model);
}

/// Break-point distance 4 (z_gnb - 1)(z_ue - 1) fc / c; the LoS model is
/// calibrated for 2D distances below this.
double breakpoint_distance(double gnb_z_m, double ue_z_m, double fc_ghz);

/// Maximum allowable path loss from the link budget.
double mapl(const LinkBudget& b);

/// Blended path loss driven by the visibility indicators: direct links mix
/// LoS/NLoS by probability in the dB domain, indirect-only links see the NLoS
/// loss, and invisible links get the outage sentinel. direct && indirect is a
/// contract violation (indirect visibility is only evaluated outside the
/// direct region).
double gb_plm(bool direct, bool indirect, double d2d_m, double d3d_m,
              const ChannelParams& params);

}  // namespace mmwp
