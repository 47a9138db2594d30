#pragma once

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"

#include <array>
#include <optional>
#include <vector>

namespace aeolus::sim {

/// Ground-truth block attached to synthetic rows (absent when a record was
/// loaded from a file without truth columns).
struct GroundTruth {
    core::Vec3 p, v, a;
    core::Quat q;
    bool in_air = false;
};

/// One row of the multirate sensor record, on the 400 Hz base grid.
/// Channels that sample slower than the base rate are empty on the
/// off-ticks: pressure every 2nd row, battery every 4th.
struct SensorSample {
    double t = 0.0;
    std::array<double, 4> anemo{};   ///< m/s along each channel axis
    core::Vec3 accel;                ///< m/s^2, body frame
    core::Vec3 gyro;                 ///< rad/s, body frame
    core::Vec3 mag;                  ///< unit-field, body frame
    std::optional<double> pressure_pa;
    std::array<double, 4> esc{};     ///< normalized rotor speed [0, 1]
    std::optional<double> voltage_v;
    std::optional<double> current_a;
    std::optional<GroundTruth> gt;
};

struct FlightRecord {
    double rate_hz = 400.0;
    std::vector<SensorSample> rows;
};

} // namespace aeolus::sim
