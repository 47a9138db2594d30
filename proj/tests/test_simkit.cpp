#include "doctest.h"

#include "aeolus/core/errors.hpp"
#include "aeolus/est/altitude.hpp"
#include "aeolus/est/lever_arm.hpp"
#include "aeolus/sim/rng.hpp"
#include "aeolus/sim/sensors.hpp"
#include "aeolus/sim/trajectory.hpp"
#include "aeolus/sim/vehicle.hpp"
#include "oracles/reference_math.hpp"

#include <cmath>

using namespace aeolus;
using core::Rotation;
using core::Vec3;

TEST_SUITE("simkit") {

TEST_CASE("noise streams are deterministic and separated") {
    sim::StreamRng a1(42, "accel"), a2(42, "accel"), b(42, "gyro"), c(43, "accel");
    double worst = 0.0;
    bool any_diff_name = false, any_diff_seed = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a1.gauss();
        worst = std::max(worst, std::abs(x - a2.gauss()));
        any_diff_name |= x != b.gauss();
        any_diff_seed |= x != c.gauss();
    }
    CHECK(worst == 0.0);
    CHECK(any_diff_name);
    CHECK(any_diff_seed);
}

TEST_CASE("gaussian stream has unit variance and zero mean") {
    sim::StreamRng rng(5, "stats");
    const int n = 40000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gauss();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("rotor lag step matches ODE integration and decay law") {
    const double tau = 0.05;
    const double cmd = 700.0;
    // Oracle: RK4 on d(omega)/dt = (cmd - omega)/tau.
    auto rhs = [&](double, const std::vector<double>& y) {
        return std::vector<double>{(cmd - y[0]) / tau};
    };
    double omega = 0.0;
    const int steps = 400;
    const double dt = 1.0 / 400;
    auto ode = oracle::rk4(rhs, {0.0}, 0.0, steps * dt, steps * 50);
    for (int i = 0; i < steps; ++i)
        omega = sim::rotor_lag_step(omega, cmd, tau, dt);
    CHECK(omega == doctest::Approx(ode[0]).epsilon(1e-9));

    // Equilibrium and half-life sanity.
    CHECK(sim::rotor_lag_step(cmd, cmd, tau, 0.123) == doctest::Approx(cmd));
    const double gap0 = 100.0;
    const double one_step =
        sim::rotor_lag_step(cmd - gap0, cmd, tau, tau * std::log(2.0));
    CHECK(cmd - one_step == doctest::Approx(gap0 / 2).epsilon(1e-12));
}

TEST_CASE("momentum-theory induced velocity at hover") {
    sim::VehicleParams vp;
    const double thrust_per_rotor = vp.mass_kg * core::kGravity / 4.0;
    const double vi =
        sim::induced_velocity(thrust_per_rotor, vp.air_density, vp.rotor_radius_m);
    CHECK(vi == doctest::Approx(6.28469).epsilon(1e-4));
    CHECK(sim::induced_velocity(0.0, vp.air_density, vp.rotor_radius_m) == 0.0);
}

TEST_CASE("ground effect factor profile") {
    sim::VehicleParams vp;
    const double r = vp.rotor_radius_m;
    CHECK(sim::ground_effect_factor(0.0, r) == 2.0);
    CHECK(sim::ground_effect_factor(r / 4.0, r) == 2.0);
    // Clamp boundary: factor reaches 2 at z = r*sqrt(2)/4.
    const double z2 = r * std::sqrt(2.0) / 4.0;
    CHECK(sim::ground_effect_factor(z2 * 0.999, r) == 2.0);
    CHECK(sim::ground_effect_factor(z2 * 1.001, r) < 2.0);
    CHECK(sim::ground_effect_factor(10.0 * r, r) ==
          doctest::Approx(1.000625391).epsilon(1e-9));
    CHECK(sim::ground_effect_factor(100.0, r) == doctest::Approx(1.0));
}

TEST_CASE("hover equilibrium of the forward acceleration model") {
    sim::VehicleParams vp;
    const double h = 10.0;
    const double gef = sim::ground_effect_factor(h, vp.rotor_radius_m);
    const double w =
        sim::steady_rotor_speed(vp.mass_kg * core::kGravity, vp, gef);
    CHECK(w == doctest::Approx(782.9).epsilon(1e-3));
    const Vec3 a = sim::quad_accel_forward(Rotation::identity(), {w, w, w, w},
                                           Vec3::zero(), vp, h);
    CHECK(a.norm() < 1e-9);
}

TEST_CASE("drag-only acceleration") {
    sim::VehicleParams vp;
    const Vec3 v_air{2.0, 0.0, 0.0};
    const Vec3 a = sim::quad_accel_forward(Rotation::identity(), {0, 0, 0, 0},
                                           v_air, vp, 100.0);
    // A = g*k - (c_d*|v|*v)/m; drag opposes the airspeed.
    CHECK(a.x == doctest::Approx(-vp.drag_coeff * 2.0 * 2.0 / vp.mass_kg));
    CHECK(a.y == doctest::Approx(0.0));
    CHECK(a.z == doctest::Approx(core::kGravity));
}

TEST_CASE("required thrust inverts the vertical force channel") {
    sim::VehicleParams vp;
    sim::StreamRng rng(11, "thrust-roundtrip");
    const double h = 50.0;
    const double gef = sim::ground_effect_factor(h, vp.rotor_radius_m);
    for (int i = 0; i < 200; ++i) {
        const Rotation r = Rotation::from_rpy(
            rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-3, 3));
        const Vec3 v_air{rng.uniform(-2, 2), rng.uniform(-2, 2),
                         rng.uniform(-1, 1)};
        const double thrust = rng.uniform(1.0, 8.0);
        const double w = sim::steady_rotor_speed(thrust, vp, gef);
        const Vec3 a = sim::quad_accel_forward(r, {w, w, w, w}, v_air, vp, h);
        const double back = sim::required_thrust(r, a, v_air, vp);
        CHECK(back == doctest::Approx(thrust).epsilon(1e-9));
    }
}

TEST_CASE("trajectory: velocity is the derivative of position") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 60.0;
    cfg.dwell_pre_s = 5.0;
    cfg.dwell_post_s = 4.0;
    cfg.style = sim::FlightStyle::Random;
    cfg.seed = 9;
    const auto traj = sim::generate_trajectory(cfg);
    const double dt = 1.0 / cfg.rate_hz;
    double worst_v = 0.0, worst_a = 0.0;
    for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
        const Vec3 v_fd =
            (traj.samples[i + 1].p - traj.samples[i - 1].p) / (2.0 * dt);
        const Vec3 a_fd =
            (traj.samples[i + 1].v - traj.samples[i - 1].v) / (2.0 * dt);
        worst_v = std::max(worst_v, (v_fd - traj.samples[i].v).norm());
        worst_a = std::max(worst_a, (a_fd - traj.samples[i].a).norm());
    }
    CHECK(worst_v < 1e-6);
    CHECK(worst_a < 5e-3);
}

TEST_CASE("trajectory: jerk budget and feasibility") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 12345ULL}) {
        sim::ScenarioConfig cfg;
        cfg.duration_s = 80.0;
        cfg.seed = seed;
        const auto traj = sim::generate_trajectory(cfg);
        double worst_j = 0.0, worst_a = 0.0;
        for (const auto& s : traj.samples) {
            worst_j = std::max(worst_j, s.j.norm());
            worst_a = std::max(worst_a, s.a.norm());
        }
        CHECK(worst_j <= cfg.jerk_limit_mps3 * (1 + 1e-12));
        CHECK(worst_a < 2.0 * core::kGravity);
    }
}

TEST_CASE("trajectory: dwells are at rest on the ground") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 50.0;
    cfg.dwell_pre_s = 6.0;
    cfg.dwell_post_s = 5.0;
    cfg.seed = 4;
    const auto traj = sim::generate_trajectory(cfg);
    CHECK(traj.takeoff_time == cfg.dwell_pre_s);
    CHECK(traj.landing_time == cfg.duration_s - cfg.dwell_post_s);
    for (const auto& s : traj.samples) {
        if (s.t <= traj.takeoff_time || s.t >= traj.landing_time) {
            CHECK(!s.in_air);
            CHECK(s.p.z == 0.0);
            CHECK(s.v.norm() == 0.0);
        }
        if (s.t > traj.takeoff_time + 1.5 && s.t < traj.landing_time - 1.5)
            CHECK(-s.p.z > 0.05);
    }
    const auto& first = traj.samples.front();
    CHECK(first.p.norm() == 0.0);
    // Altitude hits the cruise setpoint exactly when takeoff ends.
    const std::size_t i_end = static_cast<std::size_t>(
        std::llround(cfg.takeoff_end() * cfg.rate_hz));
    CHECK(-traj.samples[i_end].p.z ==
          doctest::Approx(cfg.cruise_altitude_m).epsilon(1e-12));
}

TEST_CASE("trajectory: hover style keeps identity attitude and zero motion") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 40.0;
    cfg.dwell_pre_s = 5.0;
    cfg.dwell_post_s = 5.0;
    cfg.style = sim::FlightStyle::Hover;
    const auto traj = sim::generate_trajectory(cfg);
    for (const auto& s : traj.samples) {
        CHECK(s.rot.angle_to(Rotation::identity()) < 1e-12);
        CHECK(s.omega.norm() < 1e-12);
        CHECK(std::abs(s.p.x) < 1e-15);
        CHECK(std::abs(s.p.y) < 1e-15);
    }
    // Mid-cruise: parked at the hover point.
    const auto& mid = traj.samples[traj.samples.size() / 2];
    CHECK(-mid.p.z == doctest::Approx(cfg.cruise_altitude_m));
    CHECK(mid.v.norm() < 1e-15);
}

TEST_CASE("trajectory: angular velocity matches attitude increments") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 40.0;
    cfg.dwell_pre_s = 3.0;
    cfg.dwell_post_s = 3.0;
    cfg.takeoff_s = 4.0;
    cfg.landing_s = 4.0;
    cfg.seed = 21;
    // Midpoint truncation error is O(dt^3) per step; sample finely so the
    // residual isolates errors in the analytic rates rather than the rule.
    cfg.rate_hz = 2000.0;
    const auto traj = sim::generate_trajectory(cfg);
    const double dt = 1.0 / cfg.rate_hz;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const auto& a = traj.samples[i];
        const auto& b = traj.samples[i + 1];
        const Vec3 w_mid = 0.5 * (a.omega + b.omega);
        const Rotation pred = a.rot.integrated(w_mid, dt);
        worst = std::max(worst, pred.angle_to(b.rot));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("trajectory: determinism and seed separation") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 30.0;
    cfg.dwell_pre_s = 3.0;
    cfg.dwell_post_s = 3.0;
    cfg.seed = 77;
    const auto t1 = sim::generate_trajectory(cfg);
    const auto t2 = sim::generate_trajectory(cfg);
    cfg.seed = 78;
    const auto t3 = sim::generate_trajectory(cfg);
    bool differs = false;
    for (std::size_t i = 0; i < t1.samples.size(); i += 97) {
        CHECK(t1.samples[i].p.x == t2.samples[i].p.x);
        CHECK(t1.samples[i].v.z == t2.samples[i].v.z);
        differs |= t1.samples[i].p.x != t3.samples[i].p.x;
    }
    CHECK(differs);
}

TEST_CASE("trajectory: config validation") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 20.0; // phases: 10 + 6 + 6 + 8 don't fit
    CHECK_THROWS_AS((void)sim::generate_trajectory(cfg), core::ConfigError);
    cfg = sim::ScenarioConfig{};
    cfg.vertical_amplitude_m = 1.6; // would reach the ground
    CHECK_THROWS_AS((void)sim::generate_trajectory(cfg), core::ConfigError);
    CHECK_THROWS_AS((void)sim::flight_style_from_string("zigzag"),
                    core::ConfigError);
    CHECK(sim::flight_style_from_string("lissajous") ==
          sim::FlightStyle::Lissajous);
}

// ---- sensor synthesis ----

namespace {

sim::SensorRig quiet_rig() {
    sim::SensorRig rig;
    rig.anemo_noise = rig.accel_noise = rig.gyro_noise = rig.mag_noise = 0.0;
    rig.baro_noise_pa = rig.esc_noise = rig.voltage_noise = rig.current_noise =
        0.0;
    rig.accel_bias = Vec3::zero();
    rig.gyro_bias = Vec3::zero();
    rig.baro_alt_bias_m = 0.0;
    rig.baro_alt_drift_mps = 0.0;
    return rig;
}

} // namespace

TEST_CASE("sensor record structure and rates") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 10.0;
    cfg.dwell_pre_s = 2.0;
    cfg.dwell_post_s = 2.0;
    cfg.takeoff_s = 2.0;
    cfg.landing_s = 2.0;
    const auto traj = sim::generate_trajectory(cfg);
    const auto rec = sim::synthesize_sensors(traj, {}, {}, 1);
    CHECK(rec.rows.size() == 4000);
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        CHECK(rec.rows[i].pressure_pa.has_value() == (i % 2 == 0));
        CHECK(rec.rows[i].voltage_v.has_value() == (i % 4 == 0));
        CHECK(rec.rows[i].current_a.has_value() == (i % 4 == 0));
        CHECK(rec.rows[i].gt.has_value());
        CHECK(rec.rows[i].t == doctest::Approx(i / 400.0));
    }
}

TEST_CASE("zero-noise anemometer channels equal projected lever-arm flow") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 20.0;
    cfg.dwell_pre_s = 2.0;
    cfg.dwell_post_s = 2.0;
    cfg.takeoff_s = 3.0;
    cfg.landing_s = 3.0;
    cfg.seed = 5;
    const auto traj = sim::generate_trajectory(cfg);
    auto rig = quiet_rig();
    rig.downwash_coupling = {0.0, 0.0, 0.0, 0.0};
    const auto rec = sim::synthesize_sensors(traj, {}, rig, 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const auto& s = traj.samples[i];
        const Vec3 v_air_body = s.rot.rotate_back(s.v);
        const Vec3 flow =
            est::sensor_frame_flow(v_air_body, s.omega, rig.mount, rig.lever_arm);
        for (int c = 0; c < 4; ++c)
            worst = std::max(worst,
                             std::abs(rec.rows[i].anemo[c] -
                                      rig.axes[c].dot(flow)));
        // And the assembled 3-vector inverts back to body air velocity.
        const Vec3 back = est::lever_arm_velocity(
            sim::assemble_flow_vector(rec.rows[i].anemo, rig), s.omega,
            rig.mount, rig.lever_arm);
        worst = std::max(worst, (back - v_air_body).norm());
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("zero-noise IMU matches analytic model") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 15.0;
    cfg.dwell_pre_s = 2.0;
    cfg.dwell_post_s = 2.0;
    cfg.takeoff_s = 2.0;
    cfg.landing_s = 2.0;
    cfg.seed = 6;
    const auto traj = sim::generate_trajectory(cfg);
    const auto rec = sim::synthesize_sensors(traj, {}, quiet_rig(), 1);
    const Vec3 g_down = core::kGravity * core::down_axis();
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const auto& s = traj.samples[i];
        const Vec3 a_expect = s.rot.rotate_back(s.a - g_down);
        worst = std::max(worst, (rec.rows[i].accel - a_expect).norm());
        worst = std::max(worst, (rec.rows[i].gyro - s.omega).norm());
    }
    CHECK(worst < 1e-12);
    // At rest the accelerometer magnitude is exactly g.
    CHECK(rec.rows[10].accel.norm() == doctest::Approx(core::kGravity));
}

TEST_CASE("baro channel encodes altitude plus drifting bias") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 20.0;
    cfg.dwell_pre_s = 2.0;
    cfg.dwell_post_s = 2.0;
    cfg.takeoff_s = 3.0;
    cfg.landing_s = 3.0;
    auto rig = quiet_rig();
    rig.baro_alt_bias_m = 0.2;
    rig.baro_alt_drift_mps = 0.01;
    const auto traj = sim::generate_trajectory(cfg);
    const auto rec = sim::synthesize_sensors(traj, {}, rig, 1);
    const est::AtmosphereParams atm{};
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.rows.size(); i += 2) {
        const double alt = est::pressure_to_altitude(*rec.rows[i].pressure_pa, atm);
        const double expect =
            -traj.samples[i].p.z + 0.2 + 0.01 * traj.samples[i].t;
        worst = std::max(worst, std::abs(alt - expect));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("rotors follow hover command in cruise and stay off on the ground") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 40.0;
    cfg.dwell_pre_s = 4.0;
    cfg.dwell_post_s = 4.0;
    cfg.style = sim::FlightStyle::Hover;
    sim::VehicleParams vp;
    const auto traj = sim::generate_trajectory(cfg);
    const auto rec = sim::synthesize_sensors(traj, vp, quiet_rig(), 1);
    // Ground dwell: motors off.
    for (std::size_t i = 0; i < 4 * 400; ++i)
        for (int r = 0; r < 4; ++r)
            CHECK(rec.rows[i].esc[r] == 0.0);
    // Mid-cruise hover: ESC near the hover fraction.
    const double hover_cmd =
        std::sqrt(vp.mass_kg * core::kGravity / (4.0 * vp.thrust_coeff)) /
        vp.rotor_speed_max;
    const auto& mid = rec.rows[rec.rows.size() / 2];
    for (int r = 0; r < 4; ++r)
        CHECK(mid.esc[r] == doctest::Approx(hover_cmd).epsilon(5e-3));
    // Battery: sagged in flight vs. at rest.
    CHECK(*rec.rows[0].voltage_v == doctest::Approx(16.8));
    CHECK(*rec.rows[0].current_a == doctest::Approx(0.3));
    const std::size_t mid4 = (rec.rows.size() / 2 / 4) * 4;
    CHECK(*rec.rows[mid4].voltage_v < 16.8 - 0.1);
    CHECK(*rec.rows[mid4].current_a > 1.0);
}

TEST_CASE("vertical channels see downwash in flight") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 30.0;
    cfg.dwell_pre_s = 3.0;
    cfg.dwell_post_s = 3.0;
    cfg.style = sim::FlightStyle::Hover;
    const auto traj = sim::generate_trajectory(cfg);
    const auto rec = sim::synthesize_sensors(traj, {}, quiet_rig(), 1);
    const auto& mid = rec.rows[rec.rows.size() / 2];
    // Hover: no body airflow, so the whole reading is wake pickup.
    CHECK(mid.anemo[2] < -4.0);               // strong coupling, c = -1
    CHECK(mid.anemo[3] < -2.0);               // weaker opposed channel
    CHECK(mid.anemo[3] > mid.anemo[2]);       // asymmetry preserved
    CHECK(std::abs(mid.anemo[0]) < 0.5);      // horizontal: small pickup
    // On the ground all channels are silent.
    CHECK(rec.rows[100].anemo[2] == 0.0);
}

TEST_CASE("sensor synthesis is deterministic in the seed") {
    sim::ScenarioConfig cfg;
    cfg.duration_s = 12.0;
    cfg.dwell_pre_s = 2.0;
    cfg.dwell_post_s = 2.0;
    cfg.takeoff_s = 2.0;
    cfg.landing_s = 2.0;
    const auto traj = sim::generate_trajectory(cfg);
    const auto r1 = sim::synthesize_sensors(traj, {}, {}, 99);
    const auto r2 = sim::synthesize_sensors(traj, {}, {}, 99);
    const auto r3 = sim::synthesize_sensors(traj, {}, {}, 100);
    bool differs = false;
    for (std::size_t i = 0; i < r1.rows.size(); i += 131) {
        CHECK(r1.rows[i].anemo[0] == r2.rows[i].anemo[0]);
        CHECK(r1.rows[i].accel.x == r2.rows[i].accel.x);
        differs |= r1.rows[i].anemo[0] != r3.rows[i].anemo[0];
    }
    CHECK(differs);
}

TEST_CASE("rig validation rejects bad geometry") {
    sim::SensorRig rig;
    rig.axes[0] = Vec3{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(rig.validate(), core::ConfigError);
    rig = sim::SensorRig{};
    rig.mag_field = Vec3{2.0, 0.0, 0.0};
    CHECK_THROWS_AS(rig.validate(), core::ConfigError);
    rig = sim::SensorRig{};
    rig.anemo_noise = -0.1;
    CHECK_THROWS_AS(rig.validate(), core::ConfigError);
}

} // TEST_SUITE
