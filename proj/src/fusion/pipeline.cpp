#include "aeolus/fusion/pipeline.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/est/altitude.hpp"

#include <cmath>

namespace aeolus::fusion {

using core::Vec3;

std::optional<Vec3> GroundTruthProvider::air_velocity_body(std::size_t tick) {
    const auto& gt = rec_->rows[tick].gt;
    if (!gt)
        return std::nullopt;
    core::Rotation r = core::Rotation::from_quaternion(gt->q);
    return r.rotate_back(gt->v) + vel_bias_;
}

std::optional<Vec3> GroundTruthProvider::accel_inertial(std::size_t tick) {
    const auto& gt = rec_->rows[tick].gt;
    if (!gt)
        return std::nullopt;
    return gt->a + accel_bias_;
}

std::optional<double> GroundTruthProvider::in_air_probability(std::size_t tick) {
    const auto& gt = rec_->rows[tick].gt;
    if (!gt)
        return std::nullopt;
    return gt->in_air ? 1.0 : 0.0;
}

namespace {

/// Least-squares line fit y = a + b*(t - t_ref); returns {a, b}.
struct LineFit {
    double sum_t = 0, sum_t2 = 0, sum_y = 0, sum_ty = 0;
    std::size_t n = 0;
    double t_ref = 0;

    void reset(double tr) { *this = LineFit{}; t_ref = tr; }
    void add(double t, double y) {
        const double x = t - t_ref;
        sum_t += x;
        sum_t2 += x * x;
        sum_y += y;
        sum_ty += x * y;
        ++n;
    }
    bool solve(double t_eval, double& value, double& slope) const {
        if (n < 2)
            return false;
        const double nn = static_cast<double>(n);
        const double det = nn * sum_t2 - sum_t * sum_t;
        if (std::abs(det) < 1e-12)
            return false;
        const double a = (sum_y * sum_t2 - sum_t * sum_ty) / det;
        const double b = (nn * sum_ty - sum_t * sum_y) / det;
        slope = b;
        value = a + b * (t_eval - t_ref);
        return true;
    }
};

} // namespace

OdometryResult run_odometry(const sim::FlightRecord& rec,
                            MeasurementProvider& provider,
                            const OdometryConfig& cfg) {
    cfg.gains.validate();
    cfg.attitude_gains.validate();
    if (rec.rows.empty())
        throw core::DataError("odometry needs a non-empty record");

    const double dt = 1.0 / rec.rate_hz;
    const std::size_t init_ticks = std::max<std::size_t>(
        1, std::min(rec.rows.size(),
                    static_cast<std::size_t>(
                        std::llround(cfg.init_window_s * rec.rate_hz))));

    // Rest-window means for attitude init and the first baro fix.
    Vec3 accel_mean = Vec3::zero(), mag_mean = Vec3::zero();
    for (std::size_t i = 0; i < init_ticks; ++i) {
        accel_mean += rec.rows[i].accel;
        mag_mean += rec.rows[i].mag;
    }
    accel_mean = accel_mean / static_cast<double>(init_ticks);
    mag_mean = mag_mean / static_cast<double>(init_ticks);

    const est::AtmosphereParams atm{};
    std::optional<double> first_baro;
    for (const auto& row : rec.rows) {
        if (row.pressure_pa) {
            first_baro = -est::pressure_to_altitude(*row.pressure_pa, atm);
            break;
        }
    }

    est::AttitudeObserver attitude(cfg.attitude_gains, cfg.mag_field);
    attitude.initialize_from_rest(accel_mean, mag_mean);

    FusionState state;
    // The power-on point defines the navigation origin, so P̂ starts at zero
    // and the first baro reading is carried by the baro bias state instead of
    // leaking into position. The observer only ever sees P̂_z + b̂_b, so this
    // is a pure re-gauging; it keeps the unobservable baro datum out of the
    // position estimate.
    state.baro_bias = first_baro.value_or(0.0);

    StatusFilter status_filter(cfg.status);
    LineFit baro_fit;
    baro_fit.reset(0.0);

    // Ground-dwell mean of the rotated velocity-model output. True velocity
    // is zero at rest, so this mean *is* the model's output bias and seeds
    // b̂_w at takeoff far faster than the in-air k6 loop (τ = 1/k6 ≈ 200 s)
    // could learn it.
    Vec3 dwell_vel_sum = Vec3::zero();
    std::size_t dwell_vel_n = 0;

    OdometryResult out;
    out.rows.resize(rec.rows.size());

    Status prev_status = cfg.status.initial;

    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const sim::SensorSample& row = rec.rows[i];
        const bool warm = i >= init_ticks;

        provider.observe(i, attitude.state().rot.to_quaternion());

        const auto p_air = provider.in_air_probability(i);
        const Status status = status_filter.feed(p_air.value_or(0.0), dt);

        std::optional<double> baro_down;
        if (row.pressure_pa)
            baro_down = -est::pressure_to_altitude(*row.pressure_pa, atm);

        // Ground-dwell baro residual history for the takeoff initialization
        // of the baro bias states.
        if (status == Status::OnGround && baro_down)
            baro_fit.add(row.t, *baro_down - state.p.z);

        if (status == Status::InAir && prev_status == Status::OnGround) {
            out.takeoff_times.push_back(row.t);
            // Initialize baro bias at takeoff: a line fit over the dwell
            // captures both the instantaneous offset and its drift rate;
            // with too little history fall back to the offset alone.
            double value = 0.0, slope = 0.0;
            const bool enough =
                static_cast<double>(baro_fit.n) >=
                    cfg.baro_fit_min_s * rec.rate_hz / 2.0 &&
                baro_fit.solve(row.t, value, slope);
            if (enough) {
                state.baro_bias = value;
                state.baro_bias_rate = slope;
            } else {
                state.baro_bias =
                    baro_down ? *baro_down - state.p.z
                              : (first_baro.value_or(0.0) - state.p.z);
                state.baro_bias_rate = 0.0;
            }
            // Velocity handoff: the ground bias-learning loop's slow mode
            // (k0/k1, ~minutes) cannot settle within a dwell, leaving V̂ at
            // the residual-over-k1 equilibrium while the vehicle sits still.
            // At rest the equilibrium itself identifies the bias, so finish
            // the learning instantly: move k1∘V̂ into the accel bias and
            // zero the velocity.
            state.accel_bias += cfg.gains.k1.cwise(state.v);
            state.v = Vec3::zero();
            if (static_cast<double>(dwell_vel_n) >= 0.5 * rec.rate_hz)
                state.vel_bias =
                    dwell_vel_sum / static_cast<double>(dwell_vel_n);
        } else if (status == Status::OnGround && prev_status == Status::InAir) {
            out.landing_times.push_back(row.t);
            baro_fit.reset(row.t);
            dwell_vel_sum = Vec3::zero();
            dwell_vel_n = 0;
        }
        prev_status = status;

        const auto v_w = provider.air_velocity_body(i);
        const auto a_p = provider.accel_inertial(i);

        // Attitude uses the fused acceleration estimate from the previous
        // tick — but only in the air. On the ground the vehicle is at rest,
        // so v̇ = 0 exactly; feeding the fused estimate back instead closes
        // an unstable loop (tilt error → acceleration residual → feedforward
        // → more tilt) that winds up several degrees over a long dwell.
        const Vec3 v_dot = (warm && status == Status::InAir) ? state.a
                                                             : Vec3::zero();
        attitude.step({row.accel, row.gyro, row.mag}, v_dot, dt);

        MeasurementBundle bundle;
        bundle.t = row.t;
        bundle.accel_body = row.accel;
        bundle.rot = attitude.state().rot;
        bundle.v_air_body = v_w;
        bundle.accel_inertial = a_p;
        bundle.baro_down_m = baro_down;
        bundle.status = status;

        if (status == Status::OnGround && v_w) {
            dwell_vel_sum += attitude.state().rot * (*v_w);
            ++dwell_vel_n;
        }

        if (status == Status::OnGround) {
            // A landed vehicle does not translate: hold position through the
            // ground step instead of integrating the (bias-driven) velocity.
            // This keeps the dwell's baro-residual history measuring the
            // baro's own drift rather than the estimator's wander, which the
            // takeoff line fit depends on.
            const Vec3 held_p = state.p;
            ground_step(state, bundle, cfg.gains, dt);
            state.p = held_p;
        } else {
            air_step(state, bundle, cfg.gains, dt);
        }

        OdometryRow& o = out.rows[i];
        o.t = row.t;
        o.state = state;
        o.attitude = attitude.state().rot.to_quaternion();
        o.gyro_bias = attitude.state().gyro_bias;
        o.status = status;
        o.had_velocity = v_w.has_value();
        o.had_accel = a_p.has_value();
    }
    return out;
}

OdometryResult run_dead_reckoning(const sim::FlightRecord& rec,
                                  const OdometryConfig& cfg) {
    if (rec.rows.empty())
        throw core::DataError("odometry needs a non-empty record");

    const double dt = 1.0 / rec.rate_hz;
    const std::size_t init_ticks = std::max<std::size_t>(
        1, std::min(rec.rows.size(),
                    static_cast<std::size_t>(
                        std::llround(cfg.init_window_s * rec.rate_hz))));

    Vec3 accel_mean = Vec3::zero(), mag_mean = Vec3::zero();
    for (std::size_t i = 0; i < init_ticks; ++i) {
        accel_mean += rec.rows[i].accel;
        mag_mean += rec.rows[i].mag;
    }
    accel_mean = accel_mean / static_cast<double>(init_ticks);
    mag_mean = mag_mean / static_cast<double>(init_ticks);

    const est::AtmosphereParams atm{};
    std::optional<double> first_baro;
    for (const auto& row : rec.rows) {
        if (row.pressure_pa) {
            first_baro = -est::pressure_to_altitude(*row.pressure_pa, atm);
            break;
        }
    }

    est::AttitudeObserver attitude(cfg.attitude_gains, cfg.mag_field);
    attitude.initialize_from_rest(accel_mean, mag_mean);

    FusionState state;
    // Same origin gauge as run_odometry: position starts at zero and the
    // first baro reading lands in the (unused here) baro bias state.
    state.baro_bias = first_baro.value_or(0.0);

    OdometryResult out;
    out.rows.resize(rec.rows.size());
    const Vec3 g_down = core::kGravity * core::down_axis();

    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const sim::SensorSample& row = rec.rows[i];
        const Vec3 v_dot = i >= init_ticks ? state.a : Vec3::zero();
        attitude.step({row.accel, row.gyro, row.mag}, v_dot, dt);

        state.a = g_down + attitude.state().rot * row.accel;
        state.p += state.v * dt;
        state.v += state.a * dt;

        OdometryRow& o = out.rows[i];
        o.t = row.t;
        o.state = state;
        o.attitude = attitude.state().rot.to_quaternion();
        o.gyro_bias = attitude.state().gyro_bias;
        o.status = Status::InAir;
    }
    return out;
}

} // namespace aeolus::fusion
