#pragma once

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace aeolus::sim {

enum class FlightStyle { Hover, Lissajous, Random };

FlightStyle flight_style_from_string(const std::string& s);
std::string to_string(FlightStyle s);

/// Parameters of one synthetic flight. Every flight is: rest on the ground,
/// vertical takeoff, a cruise segment in the chosen style, vertical landing,
/// rest on the ground.
struct ScenarioConfig {
    double duration_s = 200.0;
    double rate_hz = 400.0;

    double dwell_pre_s = 10.0;  ///< motors-off rest before takeoff
    double dwell_post_s = 8.0;  ///< motors-off rest after landing
    double takeoff_s = 6.0;
    double landing_s = 6.0;
    double cruise_altitude_m = 1.5;

    FlightStyle style = FlightStyle::Random;
    std::uint64_t seed = 1;

    // Cruise-motion budgets (per axis, used to scale the excitation).
    double horizontal_amplitude_m = 1.2;
    double vertical_amplitude_m = 0.4;
    double velocity_limit_mps = 1.5;
    double accel_limit_mps2 = 1.0;
    double jerk_limit_mps3 = 0.8;
    double yaw_amplitude_rad = 0.6;

    core::Vec3 wind_mps{0.0, 0.0, 0.0}; ///< constant inertial-frame wind

    void validate() const;

    double takeoff_start() const { return dwell_pre_s; }
    double takeoff_end() const { return dwell_pre_s + takeoff_s; }
    double landing_end() const { return duration_s - dwell_post_s; }
    double landing_start() const { return landing_end() - landing_s; }
};

/// One 400 Hz ground-truth sample. Positions use the inertial frame with +z
/// down, so cruise altitude h appears as p.z = -h.
struct TruthSample {
    double t = 0.0;
    core::Vec3 p, v, a, j;
    core::Rotation rot;  ///< body -> inertial
    core::Vec3 omega;    ///< body-frame angular velocity
    bool in_air = false;
};

struct TruthTrajectory {
    ScenarioConfig config;
    std::vector<TruthSample> samples;
    double takeoff_time = 0.0; ///< instant the vehicle leaves the ground
    double landing_time = 0.0; ///< touchdown instant
};

/// Build the full analytic trajectory. Throws ConfigError when the phase
/// layout does not fit the duration or when the demanded acceleration is
/// dynamically infeasible (|a| > 2g).
TruthTrajectory generate_trajectory(const ScenarioConfig& cfg);

} // namespace aeolus::sim
