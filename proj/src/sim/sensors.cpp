#include "aeolus/sim/sensors.hpp"

#include "aeolus/est/altitude.hpp"
#include "aeolus/est/lever_arm.hpp"
#include "aeolus/sim/rng.hpp"

#include <algorithm>
#include <cmath>

namespace aeolus::sim {

using core::Vec3;

FlightRecord synthesize_sensors(const TruthTrajectory& truth,
                                const VehicleParams& vehicle,
                                const SensorRig& rig, std::uint64_t seed) {
    vehicle.validate();
    rig.validate();

    StreamRng rng_anemo(seed, "anemo");
    StreamRng rng_accel(seed, "accel");
    StreamRng rng_gyro(seed, "gyro");
    StreamRng rng_mag(seed, "mag");
    StreamRng rng_baro(seed, "baro");
    StreamRng rng_esc(seed, "esc");
    StreamRng rng_batt(seed, "battery");

    const double dt = 1.0 / truth.config.rate_hz;
    const double dt_rotor = 0.5 * dt; // rotor loop runs at twice the base rate
    const est::AtmosphereParams atm{};

    FlightRecord rec;
    rec.rate_hz = truth.config.rate_hz;
    rec.rows.resize(truth.samples.size());

    RotorSpeeds omega_rotor{0, 0, 0, 0};

    for (std::size_t i = 0; i < truth.samples.size(); ++i) {
        const TruthSample& s = truth.samples[i];
        SensorSample& row = rec.rows[i];
        row.t = s.t;

        const double altitude = std::max(-s.p.z, 0.0);
        const double gef =
            ground_effect_factor(altitude, vehicle.rotor_radius_m);
        const Vec3 v_air_body = s.rot.rotate_back(s.v - truth.config.wind_mps);

        // Rotor command: hover the demanded acceleration while airborne,
        // motors off on the ground.
        double omega_cmd = 0.0;
        if (s.in_air) {
            const double t_req =
                required_thrust(s.rot, s.a, v_air_body, vehicle);
            omega_cmd = steady_rotor_speed(t_req, vehicle, gef);
        }

        // Two rotor-loop substeps per base tick; the ESC reports normalized
        // speed at both and the logger averages the pair onto the base grid.
        std::array<double, 4> esc_sum{0, 0, 0, 0};
        for (int sub = 0; sub < 2; ++sub) {
            for (int r = 0; r < 4; ++r) {
                omega_rotor[r] = rotor_lag_step(omega_rotor[r], omega_cmd,
                                                vehicle.rotor_tau_s, dt_rotor);
                esc_sum[r] += omega_rotor[r] / vehicle.rotor_speed_max +
                              rng_esc.gauss(rig.esc_noise);
            }
        }
        for (int r = 0; r < 4; ++r)
            row.esc[r] = 0.5 * esc_sum[r];

        // Rotor wake at the sensor head: momentum-theory induced velocity of
        // one rotor, amplified by ground effect, scaled per channel.
        double sum_sq = 0.0;
        for (double w : omega_rotor)
            sum_sq += w * w;
        const double thrust_rotor = vehicle.thrust_coeff * sum_sq / 4.0;
        const double wake = gef * induced_velocity(thrust_rotor,
                                                   vehicle.air_density,
                                                   vehicle.rotor_radius_m);

        const Vec3 flow_s =
            est::sensor_frame_flow(v_air_body, s.omega, rig.mount,
                                   rig.lever_arm);
        const double axis_flow[4] = {
            rig.axes[0].dot(flow_s), rig.axes[1].dot(flow_s),
            rig.axes[2].dot(flow_s), rig.axes[3].dot(flow_s)};
        for (int c = 0; c < 4; ++c) {
            const double clean =
                axis_flow[c] + rig.downwash_coupling[c] * wake;
            const double sigma =
                rig.anemo_noise *
                (1.0 + rig.anemo_noise_speed_gain * flow_s.norm());
            row.anemo[c] = clean + rng_anemo.gauss(sigma);
        }

        const Vec3 g_down = core::kGravity * core::down_axis();
        const Vec3 a_body = s.rot.rotate_back(s.a - g_down);
        row.accel = {a_body.x + rig.accel_bias.x + rng_accel.gauss(rig.accel_noise),
                     a_body.y + rig.accel_bias.y + rng_accel.gauss(rig.accel_noise),
                     a_body.z + rig.accel_bias.z + rng_accel.gauss(rig.accel_noise)};
        row.gyro = {s.omega.x + rig.gyro_bias.x + rng_gyro.gauss(rig.gyro_noise),
                    s.omega.y + rig.gyro_bias.y + rng_gyro.gauss(rig.gyro_noise),
                    s.omega.z + rig.gyro_bias.z + rng_gyro.gauss(rig.gyro_noise)};
        const Vec3 m_body = s.rot.rotate_back(rig.mag_field);
        row.mag = {m_body.x + rng_mag.gauss(rig.mag_noise),
                   m_body.y + rng_mag.gauss(rig.mag_noise),
                   m_body.z + rng_mag.gauss(rig.mag_noise)};

        if (i % 2 == 0) {
            const double alt_meas = (-s.p.z) + rig.baro_alt_bias_m +
                                    rig.baro_alt_drift_mps * s.t;
            row.pressure_pa = est::altitude_to_pressure(alt_meas, atm) +
                              rng_baro.gauss(rig.baro_noise_pa);
        }
        if (i % 4 == 0) {
            const double load =
                sum_sq / (4.0 * vehicle.rotor_speed_max * vehicle.rotor_speed_max);
            row.voltage_v = rig.battery_voltage_full -
                            rig.battery_voltage_sag * load +
                            rng_batt.gauss(rig.voltage_noise);
            row.current_a = rig.battery_current_idle +
                            rig.battery_current_gain * load +
                            rng_batt.gauss(rig.current_noise);
        }

        GroundTruth gt;
        gt.p = s.p;
        gt.v = s.v;
        gt.a = s.a;
        gt.q = s.rot.to_quaternion();
        gt.in_air = s.in_air;
        row.gt = gt;
    }
    return rec;
}

} // namespace aeolus::sim
