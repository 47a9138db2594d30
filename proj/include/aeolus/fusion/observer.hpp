#pragma once

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"

#include <optional>

namespace aeolus::fusion {

enum class Status { OnGround = 0, InAir = 1 };

/// Diagonal feedback gains of the ground/air observers. Vec3 fields hold the
/// diagonal of the corresponding gain matrix; baro-related gains are masked
/// to the altitude channel.
struct GainConfig {
    core::Vec3 k0{0.001, 0.001, 0.001}; ///< ground accel-bias integration
    core::Vec3 k1{0.9, 0.9, 0.9};       ///< ground velocity damping
    core::Vec3 k2{0.0, 0.0, 0.01};      ///< position <- baro error
    core::Vec3 k3{0.01, 0.01, 0.01};    ///< velocity <- velocity error
    core::Vec3 k4{0.001, 0.001, 0.001}; ///< accel bias <- velocity error
    core::Vec3 k5{0.0, 0.0, 0.005};     ///< accel bias <- baro error
    core::Vec3 k6{0.0, 0.0, 0.005};     ///< velocity bias <- velocity error
    double alpha = 0.0;                 ///< accel-source blend (1 = IMU only)
    double beta = 0.4;                  ///< baro-bias rate integration scale

    /// Extra vertical-velocity pull toward the baro-consistent rate. The
    /// published law leaves vertical velocity uncorrected by position error,
    /// which lets any persistent velocity-measurement bias drive an unbounded
    /// altitude ramp; this term closes that loop. Masked to the z channel.
    core::Vec3 k_pv{0.0, 0.0, 0.05};

    /// Gain multiplier applied on ticks where a baro sample is present so the
    /// mean correction matches a continuous application (base rate / baro rate).
    double baro_tick_scale = 2.0;

    void validate() const;
};

struct FusionState {
    core::Vec3 p;        ///< m, inertial, z down
    core::Vec3 v;        ///< m/s, inertial
    core::Vec3 a;        ///< m/s^2, inertial (latest estimate)
    core::Vec3 accel_bias;    ///< m/s^2, inertial-frame lumped bias
    core::Vec3 vel_bias;      ///< m/s, velocity-measurement bias (z active)
    double baro_bias = 0.0;      ///< m, bias of the down-position measurement
    double baro_bias_rate = 0.0; ///< m/s
};

/// Per-tick measurement set. Absent fields mean "no sample this tick"; the
/// step functions skip the corresponding corrections.
struct MeasurementBundle {
    double t = 0.0;
    std::optional<core::Vec3> accel_body;   ///< a_m
    std::optional<core::Rotation> rot;      ///< R̂ from the attitude observer
    std::optional<core::Vec3> v_air_body;   ///< velocity-model output v_w
    std::optional<core::Vec3> accel_inertial; ///< acceleration-model output a_p
    std::optional<double> baro_down_m; ///< down-positive baro position (-altitude)
    Status status = Status::OnGround;
};

/// Observer update while the vehicle rests on the ground: velocity is damped
/// to zero and the accelerometer bias integrates the velocity residual. Baro
/// bias states stay frozen.
void ground_step(FusionState& s, const MeasurementBundle& m,
                 const GainConfig& g, double dt);

/// Observer update in the air: velocity steers toward the rotated
/// velocity-model output, position toward the baro altitude, with coupled
/// bias integrators for the velocity model, accelerometer, and barometer.
void air_step(FusionState& s, const MeasurementBundle& m, const GainConfig& g,
              double dt);

} // namespace aeolus::fusion
