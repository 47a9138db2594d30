#pragma once

#include "aeolus/est/attitude.hpp"
#include "aeolus/fusion/pipeline.hpp"
#include "aeolus/sim/rig.hpp"
#include "aeolus/sim/trajectory.hpp"
#include "aeolus/sim/vehicle.hpp"

#include <cstdint>
#include <string>

namespace aeolus::flightlog {

/// Optimizer and windowing settings shared by the three network heads.
struct TrainSettings {
    std::size_t batch_size = 512;
    std::size_t max_epochs = 60;
    std::size_t patience = 10;
    double base_lr = 1e-4;
    double max_lr = 3e-3;
    std::size_t cycle_epochs = 8;
    std::size_t train_stride = 32;
    std::size_t val_stride = 64;
    std::size_t inference_stride = 8; ///< ticks between window evaluations
};

struct PathSettings {
    std::string data_dir = "data";
    std::string weights_dir = "weights";
    std::string output_dir = "out";
};

/// Everything a run needs, grouped by the INI sections of the config file.
struct RunConfig {
    sim::ScenarioConfig scenario;
    sim::VehicleParams vehicle;
    sim::SensorRig rig;
    fusion::GainConfig gains;
    double baro_fit_min_s = 2.0;
    est::AttitudeGains attitude;
    double init_window_s = 1.0;
    TrainSettings training;
    PathSettings paths;

    /// Assemble the odometry configuration from the gains/attitude sections.
    fusion::OdometryConfig odometry() const;
};

/// Parse the INI-style config: full-line comments with '#' or ';',
/// `[section]` groups, `key = value` entries. Unknown sections or keys are
/// rejected with core::ConfigError naming the line.
RunConfig read_runconfig(const std::string& path);

} // namespace aeolus::flightlog
