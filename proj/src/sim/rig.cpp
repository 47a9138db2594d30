#include "aeolus/sim/rig.hpp"

#include "aeolus/core/errors.hpp"

#include <cmath>

namespace aeolus::sim {

using core::Vec3;

namespace {

bool is_signed_axis(const Vec3& v, const Vec3& unit) {
    const double d = v.dot(unit);
    return std::abs(std::abs(d) - 1.0) < 1e-12 &&
           std::abs(v.norm() - 1.0) < 1e-12;
}

} // namespace

void SensorRig::validate() const {
    if (!is_signed_axis(axes[0], Vec3::unit_x()))
        throw core::ConfigError("anemometer channel 0 must sense along +/-x");
    if (!is_signed_axis(axes[1], Vec3::unit_y()))
        throw core::ConfigError("anemometer channel 1 must sense along +/-y");
    for (int i = 2; i < 4; ++i)
        if (!is_signed_axis(axes[i], Vec3::unit_z()))
            throw core::ConfigError(
                "anemometer channels 2 and 3 must sense along +/-z");
    if (anemo_noise < 0 || accel_noise < 0 || gyro_noise < 0 || mag_noise < 0 ||
        baro_noise_pa < 0 || esc_noise < 0 || voltage_noise < 0 ||
        current_noise < 0 || anemo_noise_speed_gain < 0)
        throw core::ConfigError("sensor noise levels must be non-negative");
    if (std::abs(mag_field.norm() - 1.0) > 1e-6)
        throw core::ConfigError("magnetic field must be a unit vector");
    if (mount.orthonormality_error() > 1e-9)
        throw core::ConfigError("sensor mount rotation is not orthonormal");
}

Vec3 assemble_flow_vector(const std::array<double, 4>& readings,
                          const SensorRig& rig) {
    // axes are validated to be +/- basis vectors, so a single component
    // carries each sign.
    const double x = readings[0] * rig.axes[0].x;
    const double y = readings[1] * rig.axes[1].y;
    const double z =
        0.5 * (readings[2] * rig.axes[2].z + readings[3] * rig.axes[3].z);
    return {x, y, z};
}

} // namespace aeolus::sim
