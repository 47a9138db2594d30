#pragma once

#include "aeolus/core/rotation.hpp"
#include "aeolus/core/vec3.hpp"

#include <array>

namespace aeolus::sim {

/// Physical parameters of the simulated quadrotor.
struct VehicleParams {
    double mass_kg = 0.5;
    double rotor_radius_m = 0.0635;
    int rotor_count = 4;
    double thrust_coeff = 2.0e-6;  ///< N per (rad/s)^2, per rotor
    double drag_coeff = 0.05;      ///< kg/m, isotropic quadratic body drag
    double rotor_tau_s = 0.05;     ///< first-order rotor speed lag
    double rotor_speed_max = 1200; ///< rad/s
    double air_density = 1.225;    ///< kg/m^3

    void validate() const;
};

using RotorSpeeds = std::array<double, 4>;

/// Exact discrete step of the first-order rotor lag
/// d(omega)/dt = (cmd - omega) / tau.
double rotor_lag_step(double omega, double omega_cmd, double tau_s, double dt_s);

/// Total thrust produced by the four rotors, including ground effect.
double rotor_thrust(const RotorSpeeds& omega, double thrust_coeff,
                    double ground_effect);

/// Thrust amplification factor near the ground for a rotor of radius r at
/// height z above the plane: 1 / (1 - (r / 4z)^2), clamped to [1, 2].
double ground_effect_factor(double height_m, double rotor_radius_m);

/// Momentum-theory induced velocity of a single rotor disk carrying
/// thrust_per_rotor newtons.
double induced_velocity(double thrust_per_rotor_n, double air_density,
                        double rotor_radius_m);

/// Inertial acceleration of the vehicle given attitude, rotor speeds and
/// body-frame air velocity:  A = g*k - R*(T + F_a)/m  with thrust
/// T = (0,0,thrust) along body +z (subtracted, so it pushes "up") and
/// quadratic drag F_a = c_d*|v|*v.
core::Vec3 quad_accel_forward(const core::Rotation& r, const RotorSpeeds& omega,
                              const core::Vec3& v_air_body,
                              const VehicleParams& vp, double height_m);

/// Inverse of the thrust channel of quad_accel_forward: the total thrust
/// magnitude required to realize acceleration a at attitude r with the given
/// airspeed. Clamped to be non-negative.
double required_thrust(const core::Rotation& r, const core::Vec3& accel,
                       const core::Vec3& v_air_body, const VehicleParams& vp);

/// Steady-state rotor speed producing the given total thrust at the given
/// ground-effect factor (all four rotors at the same speed).
double steady_rotor_speed(double thrust_n, const VehicleParams& vp,
                          double ground_effect);

} // namespace aeolus::sim
