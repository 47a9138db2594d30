#pragma once

#include "aeolus/core/mat3.hpp"
#include "aeolus/core/vec3.hpp"

namespace aeolus::core {

/// Standard gravity, m/s^2. Positive along the inertial down axis (NED).
inline constexpr double kGravity = 9.80665;

/// Inertial down basis vector k0 in NED coordinates.
inline constexpr Vec3 down_axis() { return {0.0, 0.0, 1.0}; }

/// Coordinate frames used throughout. NED inertial; body x forward, z down;
/// sensor frame fixed to the anemometer mast. Conversions between two frames
/// go only through a Rotation declared for that pair.
enum class Frame { Inertial, Body, Sensor };

/// Unit quaternion (w, x, y, z); storage format for attitude ground truth
/// and network input channels.
struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;
};

/// Proper rotation matrix with drift control. Composition and integration
/// re-orthonormalize (modified Gram-Schmidt on columns) whenever
/// ||R^T R - I||_F exceeds 1e-9.
class Rotation {
public:
    Rotation() : r_(Mat3::identity()) {}

    static Rotation identity() { return Rotation(); }

    /// Wraps a matrix expected to already be orthonormal; renormalizes if
    /// drifted. Not a projection for arbitrary matrices.
    static Rotation from_matrix(const Mat3& m);

    /// Rodrigues closed form of exp(skew(w)).
    static Rotation exp(const Vec3& w);

    static Rotation from_axis_angle(const Vec3& axis, double angle);

    /// ZYX Euler composition: yaw about z, then pitch about y, then roll about x.
    static Rotation from_rpy(double roll, double pitch, double yaw);

    static Rotation from_quaternion(const Quat& q);
    Quat to_quaternion() const;

    const Mat3& matrix() const { return r_; }

    Vec3 operator*(const Vec3& v) const { return r_ * v; }
    Rotation operator*(const Rotation& o) const;

    /// R^T, which is also R^-1.
    Rotation inverse() const;
    Vec3 rotate_back(const Vec3& v) const { return r_.transposed() * v; }

    /// One attitude step: R * exp(skew(omega * dt)).
    Rotation integrated(const Vec3& omega, double dt) const;

    double orthonormality_error() const;

    /// Angle of the relative rotation between this and other, radians.
    double angle_to(const Rotation& other) const;

private:
    explicit Rotation(const Mat3& m) : r_(m) {}
    void renormalize_if_drifted();

    Mat3 r_;
};

} // namespace aeolus::core
