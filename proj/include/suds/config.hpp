#pragma once

#include <string>

#include "suds/simulate.hpp"
#include "suds/swimmers.hpp"

namespace suds {

/// A complete system definition: physical parameters, the drive gait, and
/// default noise settings.  Loadable from a key/value config file (see the
/// shipped files under configs/ for the schema).
struct SystemConfig {
  SwimmerParams params;
  GaitSpec gait;
  double noise_lambda = 5.0;
  double noise_sigma = 0.0;
};

SystemConfig parse_system_config(const std::string& text);
SystemConfig load_system_config(const std::string& path);

/// Built-in preset by variant name: linear_passive, pushmepullyou, purcell3,
/// purcell9.
SystemConfig preset_config(const std::string& name);

/// Render a config back to the key/value file format.
std::string format_system_config(const SystemConfig& config);

}  // namespace suds
