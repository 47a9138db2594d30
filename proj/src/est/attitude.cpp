#include "aeolus/est/attitude.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/core/mat3.hpp"

namespace aeolus::est {

using core::Mat3;
using core::Rotation;
using core::Vec3;

void AttitudeGains::validate() const {
    if (bias_gain < 0 || accel_gain < 0 || mag_gain < 0)
        throw core::ConfigError("attitude gains must be non-negative");
    if (mean_window == 0)
        throw core::ConfigError("attitude mean window must be at least 1");
}

AttitudeObserver::AttitudeObserver(const AttitudeGains& gains,
                                   const Vec3& mag_field)
    : gains_(gains), mag_field_(mag_field) {
    gains_.validate();
}

void AttitudeObserver::initialize_from_rest(const Vec3& accel_mean,
                                            const Vec3& mag_mean) {
    // At rest the accelerometer reads -g in body coordinates, so body-frame
    // "down" is the negated mean. Heading comes from the field component
    // orthogonal to down.
    const Vec3 down_b = (-1.0 * accel_mean).normalized();
    Vec3 east_b = down_b.cross(mag_mean);
    if (east_b.norm() < 1e-9)
        east_b = down_b.cross(Vec3::unit_x());
    east_b = east_b.normalized();
    const Vec3 north_b = east_b.cross(down_b);
    // Rows are the body-frame coordinates of the inertial axes.
    state_.rot = Rotation::from_matrix(Mat3::from_rows(north_b, east_b, down_b));
    state_.gyro_bias = Vec3::zero();
    accel_buf_.clear();
    mag_buf_.clear();
}

Vec3 AttitudeObserver::filtered(std::deque<Vec3>& buf, const Vec3& sample) {
    buf.push_back(sample);
    if (buf.size() > gains_.mean_window)
        buf.pop_front();
    Vec3 mean = Vec3::zero();
    for (const Vec3& v : buf)
        mean += v;
    return mean / static_cast<double>(buf.size());
}

void AttitudeObserver::step(const ImuSample& imu, const Vec3& v_dot_est,
                            double dt) {
    const Vec3 a_bar = filtered(accel_buf_, imu.accel);
    const Vec3 m_bar = filtered(mag_buf_, imu.mag);
    const Rotation& r = state_.rot;

    // Gravity-direction term: compare the predicted specific force
    // R̂ᵀ(v̂dot − g·k0) with the measured one; the cross product with the
    // estimated down direction yields a body-frame steering rotation.
    const Vec3 g_down = core::kGravity * core::down_axis();
    const Vec3 accel_pred = r.rotate_back(v_dot_est - g_down);
    const Vec3 down_est = r.rotate_back(core::down_axis());
    const Vec3 gamma_accel = (gains_.accel_gain / core::kGravity) *
                             down_est.cross(accel_pred - a_bar);

    // Magnetic term: predicted field direction crossed with the measured one.
    const Vec3 mag_est = r.rotate_back(mag_field_);
    const Vec3 gamma_mag = (gains_.mag_gain / mag_field_.norm_squared()) *
                           mag_est.cross(m_bar);

    gamma_ = gamma_accel + gamma_mag;

    const Vec3 rate = imu.gyro - state_.gyro_bias - gamma_;
    state_.rot = r.integrated(rate, dt);
    state_.gyro_bias += gains_.bias_gain * dt * gamma_;
}

} // namespace aeolus::est
