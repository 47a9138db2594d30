#include "aeolus/sim/trajectory.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/core/mat3.hpp"
#include "aeolus/sim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aeolus::sim {

using core::Mat3;
using core::Rotation;
using core::Vec3;

namespace {

/// Value and first three derivatives of a scalar signal.
struct D3 {
    double p = 0, v = 0, a = 0, j = 0;
};

D3 operator+(const D3& l, const D3& r) {
    return {l.p + r.p, l.v + r.v, l.a + r.a, l.j + r.j};
}

/// Seventh-order smoothstep from `from` to `to` over [t0, t0+T]; constant
/// (with zero derivatives) outside. Velocity, acceleration, and jerk all
/// vanish at both endpoints, so concatenated segments stay jerk-continuous
/// and the flatness-derived angular velocity has no steps.
D3 smooth_step(double t, double t0, double dur, double from, double to) {
    if (t <= t0)
        return {from, 0, 0, 0};
    if (t >= t0 + dur)
        return {to, 0, 0, 0};
    const double u = (t - t0) / dur;
    const double d = to - from;
    const double s = (((-20 * u + 70) * u - 84) * u + 35) * u * u * u * u;
    const double s1 = (((-140 * u + 420) * u - 420) * u + 140) * u * u * u;
    const double s2 = (((-840 * u + 2100) * u - 1680) * u + 420) * u * u;
    const double s3 = (((-4200 * u + 8400) * u - 5040) * u + 840) * u;
    return {from + d * s, d * s1 / dur, d * s2 / (dur * dur),
            d * s3 / (dur * dur * dur)};
}

/// Smooth 0->1->0 window over [t0, t1] with smoothstep ramps of length ramp.
D3 envelope(double t, double t0, double t1, double ramp) {
    if (t <= t0 || t >= t1)
        return {0, 0, 0, 0};
    if (t < t0 + ramp)
        return smooth_step(t, t0, ramp, 0.0, 1.0);
    if (t > t1 - ramp)
        return smooth_step(t, t1 - ramp, ramp, 1.0, 0.0);
    return {1, 0, 0, 0};
}

struct SineTerm {
    double amp = 0, omega = 0, phase = 0;
};

struct SineBank {
    std::vector<SineTerm> terms;

    D3 eval(double t) const {
        D3 r;
        for (const auto& s : terms) {
            const double arg = s.omega * t + s.phase;
            const double sn = std::sin(arg), cs = std::cos(arg);
            r.p += s.amp * sn;
            r.v += s.amp * s.omega * cs;
            r.a -= s.amp * s.omega * s.omega * sn;
            r.j -= s.amp * s.omega * s.omega * s.omega * cs;
        }
        return r;
    }

    double sum(int deriv) const {
        double m = 0;
        for (const auto& s : terms)
            m += std::abs(s.amp) * std::pow(s.omega, deriv);
        return m;
    }

    void scale(double f) {
        for (auto& s : terms)
            s.amp *= f;
    }

    /// Shift so the bank and its window product start from zero offset:
    /// subtracting p(t0) keeps the cruise motion centered on the hover point.
    double offset_at(double t) const { return eval(t).p; }
};

/// Product of an envelope window and a sine bank, with the bank value at the
/// window start subtracted so the signal starts at zero.
D3 windowed(const D3& env, const D3& bank, double bank_offset) {
    const double b = bank.p - bank_offset;
    D3 r;
    r.p = env.p * b;
    r.v = env.v * b + env.p * bank.v;
    r.a = env.a * b + 2 * env.v * bank.v + env.p * bank.a;
    r.j = env.j * b + 3 * env.a * bank.v + 3 * env.v * bank.a + env.p * bank.j;
    return r;
}

struct MotionPlan {
    ScenarioConfig cfg;
    SineBank bank_x, bank_y, bank_z, bank_yaw;
    double off_x = 0, off_y = 0, off_z = 0, off_yaw = 0;
    double ramp = 0;

    /// Inertial position (z down) and derivatives at time t.
    void eval(double t, D3& x, D3& y, D3& z, D3& yaw) const {
        const double t2 = cfg.takeoff_end(), t3 = cfg.landing_start();
        const D3 env = envelope(t, t2, t3, ramp);
        x = windowed(env, bank_x.eval(t), off_x);
        y = windowed(env, bank_y.eval(t), off_y);
        yaw = windowed(env, bank_yaw.eval(t), off_yaw);
        // Altitude: up-step plus down-step plus cruise excitation.
        const D3 up = smooth_step(t, cfg.takeoff_start(), cfg.takeoff_s, 0.0,
                                  cfg.cruise_altitude_m);
        const D3 dn = smooth_step(t, cfg.landing_start(), cfg.landing_s, 0.0,
                                  -cfg.cruise_altitude_m);
        const D3 alt = up + dn + windowed(env, bank_z.eval(t), off_z);
        // p.z is down, altitude is up.
        z = {-alt.p, -alt.v, -alt.a, -alt.j};
    }
};

void cap_bank(SineBank& bank, double amp, double vel, double acc, double jerk) {
    double f = 1.0;
    if (bank.sum(0) > amp)
        f = std::min(f, amp / bank.sum(0));
    if (bank.sum(1) > vel)
        f = std::min(f, vel / bank.sum(1));
    if (bank.sum(2) > acc)
        f = std::min(f, acc / bank.sum(2));
    if (bank.sum(3) > jerk)
        f = std::min(f, jerk / bank.sum(3));
    bank.scale(f);
}

SineBank random_bank(StreamRng& rng, int terms, double w_lo, double w_hi) {
    SineBank b;
    for (int i = 0; i < terms; ++i) {
        SineTerm s;
        s.amp = rng.uniform(0.3, 1.0);
        s.omega = rng.uniform(w_lo, w_hi);
        s.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        b.terms.push_back(s);
    }
    return b;
}

MotionPlan build_plan(const ScenarioConfig& cfg) {
    MotionPlan plan;
    plan.cfg = cfg;
    const double cruise = cfg.landing_start() - cfg.takeoff_end();
    plan.ramp = std::min(8.0, cruise / 3.0);

    switch (cfg.style) {
    case FlightStyle::Hover:
        break;
    case FlightStyle::Lissajous: {
        plan.bank_x.terms = {{cfg.horizontal_amplitude_m, 0.50, 0.0}};
        plan.bank_y.terms = {
            {0.8 * cfg.horizontal_amplitude_m, 0.35, std::numbers::pi / 2}};
        plan.bank_z.terms = {{cfg.vertical_amplitude_m, 0.30, 0.0}};
        break;
    }
    case FlightStyle::Random: {
        StreamRng rng(cfg.seed, "trajectory");
        plan.bank_x = random_bank(rng, 5, 0.15, 0.75);
        plan.bank_y = random_bank(rng, 5, 0.15, 0.75);
        plan.bank_z = random_bank(rng, 4, 0.15, 0.60);
        plan.bank_yaw = random_bank(rng, 2, 0.10, 0.30);
        break;
    }
    }

    const double v = cfg.velocity_limit_mps, a = cfg.accel_limit_mps2,
                 j = cfg.jerk_limit_mps3;
    cap_bank(plan.bank_x, cfg.horizontal_amplitude_m, 0.7 * v, 0.5 * a, 0.35 * j);
    cap_bank(plan.bank_y, cfg.horizontal_amplitude_m, 0.7 * v, 0.5 * a, 0.35 * j);
    cap_bank(plan.bank_z, cfg.vertical_amplitude_m, 0.4 * v, 0.3 * a, 0.2 * j);
    cap_bank(plan.bank_yaw, cfg.yaw_amplitude_rad, 0.3, 0.15, 0.1);

    const double t2 = cfg.takeoff_end();
    plan.off_x = plan.bank_x.offset_at(t2);
    plan.off_y = plan.bank_y.offset_at(t2);
    plan.off_z = plan.bank_z.offset_at(t2);
    plan.off_yaw = plan.bank_yaw.offset_at(t2);
    return plan;
}

/// Differential-flatness attitude: body z along the mass-normalized thrust
/// direction f = g*k - a, heading from the yaw signal. Returns R and the
/// body angular velocity derived analytically from (a, j, yaw, yaw_rate).
void flat_attitude(const Vec3& accel, const Vec3& jerk, double yaw,
                   double yaw_rate, Rotation& rot, Vec3& omega) {
    const Vec3 f = core::kGravity * core::down_axis() - accel;
    const double fn = f.norm();
    if (f.z <= 0.1 * core::kGravity)
        throw core::ConfigError("trajectory demands near-inverted attitude");
    const Vec3 zb = f / fn;
    const Vec3 xc{std::cos(yaw), std::sin(yaw), 0.0};
    const Vec3 yr = zb.cross(xc);
    const double yrn = yr.norm();
    const Vec3 yb = yr / yrn;
    const Vec3 xb = yb.cross(zb);
    rot = Rotation::from_matrix(Mat3::from_cols(xb, yb, zb));

    // Time derivatives of the frame vectors.
    const Vec3 fdot = -1.0 * jerk;
    const Vec3 zb_dot = (1.0 / fn) * (fdot - zb.dot(fdot) * zb);
    const Vec3 xc_dot = yaw_rate * Vec3{-std::sin(yaw), std::cos(yaw), 0.0};
    const Vec3 yr_dot = zb_dot.cross(xc) + zb.cross(xc_dot);
    const Vec3 yb_dot = (1.0 / yrn) * (yr_dot - yb.dot(yr_dot) * yb);
    const Vec3 xb_dot = yb_dot.cross(zb) + yb.cross(zb_dot);
    const Mat3 rdot = Mat3::from_cols(xb_dot, yb_dot, zb_dot);
    // R^T * Rdot is skew; vex discards the numerical symmetric residue.
    omega = core::vex(rot.matrix().transposed() * rdot);
}

} // namespace

FlightStyle flight_style_from_string(const std::string& s) {
    if (s == "hover")
        return FlightStyle::Hover;
    if (s == "lissajous")
        return FlightStyle::Lissajous;
    if (s == "random")
        return FlightStyle::Random;
    throw core::ConfigError("unknown flight style: " + s);
}

std::string to_string(FlightStyle s) {
    switch (s) {
    case FlightStyle::Hover:
        return "hover";
    case FlightStyle::Lissajous:
        return "lissajous";
    case FlightStyle::Random:
        return "random";
    }
    return "random";
}

void ScenarioConfig::validate() const {
    if (rate_hz <= 0 || duration_s <= 0)
        throw core::ConfigError("duration and rate must be positive");
    if (dwell_pre_s < 0.5 || dwell_post_s < 0.5)
        throw core::ConfigError("ground dwells must be at least 0.5 s");
    if (takeoff_s < 0.5 || landing_s < 0.5)
        throw core::ConfigError("takeoff and landing must take at least 0.5 s");
    if (cruise_altitude_m < 0.3)
        throw core::ConfigError("cruise altitude must be at least 0.3 m");
    const double cruise = landing_start() - takeoff_end();
    if (cruise < 1.0)
        throw core::ConfigError(
            "flight phases do not fit the duration (cruise < 1 s)");
    if (vertical_amplitude_m > cruise_altitude_m - 0.2)
        throw core::ConfigError(
            "vertical excitation would reach the ground during cruise");
    if (horizontal_amplitude_m < 0 || vertical_amplitude_m < 0 ||
        velocity_limit_mps <= 0 || accel_limit_mps2 <= 0 ||
        jerk_limit_mps3 <= 0 || yaw_amplitude_rad < 0)
        throw core::ConfigError("motion budgets must be positive");
}

TruthTrajectory generate_trajectory(const ScenarioConfig& cfg) {
    cfg.validate();
    MotionPlan plan = build_plan(cfg);
    const double dt = 1.0 / cfg.rate_hz;
    const std::size_t n = static_cast<std::size_t>(
        std::llround(cfg.duration_s * cfg.rate_hz));

    // The sine banks were capped through conservative coefficient sums; a
    // measured pass tightens the actual jerk peak so discrete checks of
    // dP/dt stay inside finite-difference tolerance.
    for (int pass = 0; pass < 4; ++pass) {
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            D3 x, y, z, yaw;
            plan.eval(static_cast<double>(i) * dt, x, y, z, yaw);
            peak = std::max(peak, Vec3{x.j, y.j, z.j}.norm());
        }
        if (peak <= cfg.jerk_limit_mps3)
            break;
        const double f = 0.9 * cfg.jerk_limit_mps3 / peak;
        plan.bank_x.scale(f);
        plan.bank_y.scale(f);
        plan.bank_z.scale(f);
        const double t2 = cfg.takeoff_end();
        plan.off_x = plan.bank_x.offset_at(t2);
        plan.off_y = plan.bank_y.offset_at(t2);
        plan.off_z = plan.bank_z.offset_at(t2);
    }

    TruthTrajectory out;
    out.config = cfg;
    out.takeoff_time = cfg.takeoff_start();
    out.landing_time = cfg.landing_end();
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        D3 x, y, z, yaw;
        plan.eval(t, x, y, z, yaw);
        TruthSample& s = out.samples[i];
        s.t = t;
        s.p = {x.p, y.p, z.p};
        s.v = {x.v, y.v, z.v};
        s.a = {x.a, y.a, z.a};
        s.j = {x.j, y.j, z.j};
        s.in_air = t > out.takeoff_time && t < out.landing_time;
        if (s.a.norm() > 2.0 * core::kGravity)
            throw core::ConfigError("trajectory demands |a| > 2g");
        flat_attitude(s.a, s.j, yaw.p, yaw.v, s.rot, s.omega);
    }
    return out;
}

} // namespace aeolus::sim
