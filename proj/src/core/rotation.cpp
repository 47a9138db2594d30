#include "aeolus/core/rotation.hpp"

#include <algorithm>
#include <cmath>

namespace aeolus::core {

namespace {
constexpr double kDriftTolerance = 1e-9;
}

Rotation Rotation::from_matrix(const Mat3& m) {
    Rotation r;
    r.r_ = m;
    r.renormalize_if_drifted();
    return r;
}

Rotation Rotation::exp(const Vec3& w) {
    const double theta2 = w.norm_squared();
    // sin(t)/t and (1-cos(t))/t^2 with series fallbacks near zero.
    double a, b;
    if (theta2 < 1e-8) {
        a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
        b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    } else {
        const double theta = std::sqrt(theta2);
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / theta2;
    }
    const Mat3 K = skew(w);
    Rotation r;
    r.r_ = Mat3::identity() + a * K + b * (K * K);
    return r;
}

Rotation Rotation::from_axis_angle(const Vec3& axis, double angle) {
    return exp(axis.normalized() * angle);
}

Rotation Rotation::from_rpy(double roll, double pitch, double yaw) {
    return exp(Vec3::unit_z() * yaw) * exp(Vec3::unit_y() * pitch) * exp(Vec3::unit_x() * roll);
}

Rotation Rotation::from_quaternion(const Quat& q) {
    const double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    const double w = q.w / n, x = q.x / n, y = q.y / n, z = q.z / n;
    Mat3 m;
    m(0, 0) = 1.0 - 2.0 * (y * y + z * z);
    m(0, 1) = 2.0 * (x * y - w * z);
    m(0, 2) = 2.0 * (x * z + w * y);
    m(1, 0) = 2.0 * (x * y + w * z);
    m(1, 1) = 1.0 - 2.0 * (x * x + z * z);
    m(1, 2) = 2.0 * (y * z - w * x);
    m(2, 0) = 2.0 * (x * z - w * y);
    m(2, 1) = 2.0 * (y * z + w * x);
    m(2, 2) = 1.0 - 2.0 * (x * x + y * y);
    return from_matrix(m);
}

Quat Rotation::to_quaternion() const {
    // Shepperd's method: pick the largest diagonal combination for stability.
    const Mat3& m = r_;
    const double tr = m(0, 0) + m(1, 1) + m(2, 2);
    Quat q;
    if (tr > 0.0) {
        double s = std::sqrt(tr + 1.0) * 2.0;
        q.w = 0.25 * s;
        q.x = (m(2, 1) - m(1, 2)) / s;
        q.y = (m(0, 2) - m(2, 0)) / s;
        q.z = (m(1, 0) - m(0, 1)) / s;
    } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
        double s = std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2)) * 2.0;
        q.w = (m(2, 1) - m(1, 2)) / s;
        q.x = 0.25 * s;
        q.y = (m(0, 1) + m(1, 0)) / s;
        q.z = (m(0, 2) + m(2, 0)) / s;
    } else if (m(1, 1) > m(2, 2)) {
        double s = std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2)) * 2.0;
        q.w = (m(0, 2) - m(2, 0)) / s;
        q.x = (m(0, 1) + m(1, 0)) / s;
        q.y = 0.25 * s;
        q.z = (m(1, 2) + m(2, 1)) / s;
    } else {
        double s = std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1)) * 2.0;
        q.w = (m(1, 0) - m(0, 1)) / s;
        q.x = (m(0, 2) + m(2, 0)) / s;
        q.y = (m(1, 2) + m(2, 1)) / s;
        q.z = 0.25 * s;
    }
    // Canonical sign: non-negative w keeps serialized attitudes continuous
    // along gentle trajectories.
    if (q.w < 0.0) {
        q.w = -q.w; q.x = -q.x; q.y = -q.y; q.z = -q.z;
    }
    return q;
}

Rotation Rotation::operator*(const Rotation& o) const {
    Rotation r;
    r.r_ = r_ * o.r_;
    r.renormalize_if_drifted();
    return r;
}

Rotation Rotation::inverse() const {
    Rotation r;
    r.r_ = r_.transposed();
    return r;
}

Rotation Rotation::integrated(const Vec3& omega, double dt) const {
    return (*this) * exp(omega * dt);
}

double Rotation::orthonormality_error() const {
    return (r_.transposed() * r_ - Mat3::identity()).frobenius_norm();
}

double Rotation::angle_to(const Rotation& other) const {
    const Mat3 rel = r_.transposed() * other.r_;
    // atan2(sin, cos) keeps full precision for small angles where acos(trace)
    // loses half the significant digits.
    const double s = vex(rel).norm();
    const double c = 0.5 * (rel(0, 0) + rel(1, 1) + rel(2, 2) - 1.0);
    return std::atan2(s, c);
}

void Rotation::renormalize_if_drifted() {
    if (orthonormality_error() <= kDriftTolerance) return;
    Vec3 c0 = r_.col(0).normalized();
    Vec3 c1 = (r_.col(1) - c0 * c0.dot(r_.col(1))).normalized();
    Vec3 c2 = c0.cross(c1);
    r_ = Mat3::from_cols(c0, c1, c2);
}

} // namespace aeolus::core
