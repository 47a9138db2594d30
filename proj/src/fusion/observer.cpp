#include "aeolus/fusion/observer.hpp"

#include "aeolus/core/errors.hpp"

namespace aeolus::fusion {

using core::Vec3;

void GainConfig::validate() const {
    const Vec3* all[] = {&k0, &k1, &k2, &k3, &k4, &k5, &k6, &k_pv};
    for (const Vec3* k : all)
        if (k->x < 0 || k->y < 0 || k->z < 0)
            throw core::ConfigError("observer gains must be non-negative");
    if (alpha < 0.0 || alpha > 1.0)
        throw core::ConfigError("alpha must lie in [0, 1]");
    if (beta < 0.0 || baro_tick_scale <= 0.0)
        throw core::ConfigError("beta and baro_tick_scale must be positive");
}

void ground_step(FusionState& s, const MeasurementBundle& m,
                 const GainConfig& g, double dt) {
    if (m.accel_body && m.rot)
        s.a = core::kGravity * core::down_axis() + (*m.rot) * (*m.accel_body) -
              s.accel_bias;
    // else: hold the previous acceleration estimate.

    const Vec3 v_old = s.v;
    s.v += (s.a - g.k1.cwise(v_old)) * dt;
    s.accel_bias += g.k0.cwise(v_old) * dt;
    s.p += v_old * dt;
    // Baro bias states frozen on the ground.
}

void air_step(FusionState& s, const MeasurementBundle& m, const GainConfig& g,
              double dt) {
    const Vec3 g_down = core::kGravity * core::down_axis();

    // Acceleration estimate: blend of IMU path and acceleration-model path.
    // A missing model output degrades to the IMU-only path for this tick.
    // imu_weight is the weight the IMU path actually carried in the blend.
    const bool have_imu = m.accel_body && m.rot;
    double imu_weight = 0.0;
    if (m.accel_inertial && have_imu && g.alpha > 0.0) {
        const Vec3 imu_acc = g_down + (*m.rot) * (*m.accel_body) - s.accel_bias;
        s.a = g.alpha * imu_acc + (1.0 - g.alpha) * (*m.accel_inertial);
        imu_weight = g.alpha;
    } else if (m.accel_inertial && g.alpha < 1.0) {
        s.a = *m.accel_inertial;
    } else if (have_imu) {
        s.a = g_down + (*m.rot) * (*m.accel_body) - s.accel_bias;
        imu_weight = 1.0;
    }
    // else: hold.

    const bool have_ev = m.v_air_body && m.rot;
    const Vec3 e_v = have_ev ? s.v - (*m.rot) * (*m.v_air_body) + s.vel_bias
                             : Vec3::zero();
    const bool have_ep = m.baro_down_m.has_value();
    // The baro residual is meaningful only on the altitude channel; the x/y
    // components below are masked to zero by the F-patterned gains.
    const Vec3 e_p = have_ep
                         ? s.p - (*m.baro_down_m) * core::down_axis() +
                               s.baro_bias * core::down_axis()
                         : Vec3::zero();
    const double bf = have_ep ? g.baro_tick_scale : 0.0;

    // The baro->accel-bias loop is unstable whenever the accel-bias estimate
    // feeds back through the IMU path with weight w: the e_p->bias->accel
    // chain is a near-triple integrator, and Routh requires
    // w*k5 < (k2 + k3)(k2 k3 + k_pv) ~ 0.003 against k5 = 0.01 here. Scaling
    // the term by (1 - w) keeps the closed loop stable for every blend weight
    // and leaves it untouched (w = 0) in the model-driven configuration.
    const double k5_scale = (1.0 - imu_weight) * bf;

    const FusionState old = s;
    s.p += (old.v - bf * g.k2.cwise(e_p)) * dt;
    s.v += (old.a - g.k3.cwise(e_v) - bf * g.k_pv.cwise(e_p)) * dt;
    s.accel_bias += (g.k4.cwise(e_v) + k5_scale * g.k5.cwise(e_p)) * dt;
    s.vel_bias += -1.0 * g.k6.cwise(e_v) * dt;
    s.baro_bias += old.baro_bias_rate * dt;
    s.baro_bias_rate += -g.beta * bf * g.k5.z * e_p.z * dt;
}

} // namespace aeolus::fusion
