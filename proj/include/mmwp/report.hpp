#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "mmwp/bitset.hpp"
#include "mmwp/channel.hpp"
#include "mmwp/scenario.hpp"

#include <Eigen/Dense>

namespace mmwp {

/// Shortest exact decimal for a double ("inf"/"-inf" for infinities); every
/// numeric cell in emitted CSVs goes through this so reruns are byte-identical.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

nlohmann::ordered_json channel_json(const ChannelParams& ch);

/// Budget echo plus the derived threshold. The note records that the same
/// inputs are often quoted one dB higher than this arithmetic yields.
nlohmann::ordered_json budget_json(const LinkBudget& b);

/// index,x,y,covered[,<metric_name>] rows in service-grid order.
void write_coverage_csv(const std::string& path, const GridSet& service, const Bitset& covered,
                        const Eigen::VectorXd* metric = nullptr,
                        const std::string& metric_name = "");

/// Plain P2 raster over the full bounds: 255 covered, 96 uncovered, 32 building.
void write_coverage_pgm(const std::string& path, const Scenario& s, const GridSet& service,
                        const Bitset& covered);

void write_sweep_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Two-space indented dump with trailing newline.
void write_report_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace mmwp
