#include "aeolus/sim/vehicle.hpp"

#include "aeolus/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aeolus::sim {

using core::Vec3;

void VehicleParams::validate() const {
    if (mass_kg <= 0.0 || rotor_radius_m <= 0.0 || thrust_coeff <= 0.0 ||
        rotor_tau_s <= 0.0 || rotor_speed_max <= 0.0 || air_density <= 0.0 ||
        drag_coeff < 0.0)
        throw core::ConfigError("vehicle parameters must be positive");
    if (rotor_count != 4)
        throw core::ConfigError("only four-rotor vehicles are supported");
    const double hover =
        std::sqrt(mass_kg * core::kGravity / (rotor_count * thrust_coeff));
    if (hover >= rotor_speed_max)
        throw core::ConfigError("vehicle cannot hover: rotor_speed_max too low");
}

double rotor_lag_step(double omega, double omega_cmd, double tau_s, double dt_s) {
    return omega_cmd + (omega - omega_cmd) * std::exp(-dt_s / tau_s);
}

double rotor_thrust(const RotorSpeeds& omega, double thrust_coeff,
                    double ground_effect) {
    double sum_sq = 0.0;
    for (double w : omega)
        sum_sq += w * w;
    return ground_effect * thrust_coeff * sum_sq;
}

double ground_effect_factor(double height_m, double rotor_radius_m) {
    // Image-rotor model diverges as z -> r/4; clamp to a factor of two there.
    const double z_min = rotor_radius_m / 4.0;
    if (height_m <= z_min)
        return 2.0;
    const double ratio = rotor_radius_m / (4.0 * height_m);
    const double f = 1.0 / (1.0 - ratio * ratio);
    return std::clamp(f, 1.0, 2.0);
}

double induced_velocity(double thrust_per_rotor_n, double air_density,
                        double rotor_radius_m) {
    const double disk = std::numbers::pi * rotor_radius_m * rotor_radius_m;
    const double t = std::max(thrust_per_rotor_n, 0.0);
    return std::sqrt(t / (2.0 * air_density * disk));
}

Vec3 quad_accel_forward(const core::Rotation& r, const RotorSpeeds& omega,
                        const Vec3& v_air_body, const VehicleParams& vp,
                        double height_m) {
    const double gef = ground_effect_factor(height_m, vp.rotor_radius_m);
    const double thrust = rotor_thrust(omega, vp.thrust_coeff, gef);
    const Vec3 thrust_body{0.0, 0.0, thrust};
    const Vec3 drag_body = vp.drag_coeff * v_air_body.norm() * v_air_body;
    return core::kGravity * core::down_axis() -
           (1.0 / vp.mass_kg) * (r * (thrust_body + drag_body));
}

double required_thrust(const core::Rotation& r, const Vec3& accel,
                       const Vec3& v_air_body, const VehicleParams& vp) {
    const Vec3 f_body =
        vp.mass_kg * r.rotate_back(core::kGravity * core::down_axis() - accel);
    const Vec3 drag_body = vp.drag_coeff * v_air_body.norm() * v_air_body;
    return std::max(f_body.z - drag_body.z, 0.0);
}

double steady_rotor_speed(double thrust_n, const VehicleParams& vp,
                          double ground_effect) {
    const double denom = vp.rotor_count * vp.thrust_coeff * ground_effect;
    const double w = std::sqrt(std::max(thrust_n, 0.0) / denom);
    return std::min(w, vp.rotor_speed_max);
}

} // namespace aeolus::sim
