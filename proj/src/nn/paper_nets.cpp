#include "aeolus/nn/paper_nets.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/est/altitude.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace aeolus::nn {

using core::Vec3;

namespace {

LayerSpec conv(const char* name, std::size_t filters, std::size_t kernel) {
    LayerSpec l;
    l.kind = LayerSpec::Kind::Conv1d;
    l.name = name;
    l.units = filters;
    l.kernel = kernel;
    l.activation = Activation::Relu;
    return l;
}

LayerSpec gru(const char* name, std::size_t units, bool seq) {
    LayerSpec l;
    l.kind = LayerSpec::Kind::Gru;
    l.name = name;
    l.units = units;
    l.return_sequences = seq;
    return l;
}

LayerSpec dense(const char* name, std::size_t units, Activation act) {
    LayerSpec l;
    l.kind = LayerSpec::Kind::Dense;
    l.name = name;
    l.units = units;
    l.activation = act;
    return l;
}

void require_truth(const sim::FlightRecord& rec, const char* net) {
    for (std::size_t i = 0; i < rec.rows.size(); ++i)
        if (!rec.rows[i].gt)
            throw core::DataError(
                std::string("training the ") + net +
                " network needs ground-truth columns; row " +
                std::to_string(i) + " has none");
}

/// Forward-fill helper: updates hold when the cell is present.
double ffill(const std::optional<double>& cell, double& hold) {
    if (cell)
        hold = *cell;
    return hold;
}

} // namespace

NetworkSpec velocity_network_spec() {
    NetworkSpec s;
    s.name = "velocity";
    s.input_channels = 7;
    s.window_len = 400;
    s.layers = {conv("conv1", 16, 5), conv("conv2", 16, 5),
                gru("gru1", 16, true), gru("gru2", 16, true),
                dense("out", 3, Activation::Linear)};
    return s;
}

NetworkSpec acceleration_network_spec() {
    NetworkSpec s;
    s.name = "acceleration";
    s.input_channels = 14;
    s.window_len = 200;
    s.layers = {conv("conv1", 5, 12), conv("conv2", 5, 12),
                gru("gru1", 12, true), gru("gru2", 12, false),
                dense("out", 3, Activation::Linear)};
    return s;
}

NetworkSpec status_network_spec() {
    NetworkSpec s;
    s.name = "status";
    s.input_channels = 8;
    s.window_len = 200;
    s.layers = {conv("conv1", 4, 5), gru("gru1", 6, false),
                dense("out", 2, Activation::Softmax)};
    return s;
}

std::vector<core::Quat> attitude_pass(const sim::FlightRecord& rec,
                                      const est::AttitudeGains& gains,
                                      const core::Vec3& mag_field,
                                      double init_window_s) {
    if (rec.rows.empty())
        throw core::DataError("attitude pass needs a non-empty record");
    const double dt = 1.0 / rec.rate_hz;
    const std::size_t init_ticks = std::max<std::size_t>(
        1, std::min(rec.rows.size(),
                    static_cast<std::size_t>(
                        std::llround(init_window_s * rec.rate_hz))));
    Vec3 accel_mean = Vec3::zero(), mag_mean = Vec3::zero();
    for (std::size_t i = 0; i < init_ticks; ++i) {
        accel_mean += rec.rows[i].accel;
        mag_mean += rec.rows[i].mag;
    }
    accel_mean = accel_mean / static_cast<double>(init_ticks);
    mag_mean = mag_mean / static_cast<double>(init_ticks);

    est::AttitudeObserver obs(gains, mag_field);
    obs.initialize_from_rest(accel_mean, mag_mean);

    std::vector<core::Quat> out(rec.rows.size());
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const auto& row = rec.rows[i];
        obs.step({row.accel, row.gyro, row.mag}, Vec3::zero(), dt);
        out[i] = obs.state().rot.to_quaternion();
    }
    return out;
}

SessionChannels velocity_channels(const sim::FlightRecord& rec,
                                  bool with_targets) {
    SessionChannels s;
    s.rows = rec.rows.size();
    s.channels = 7;
    s.values.resize(s.rows * s.channels);
    if (with_targets) {
        require_truth(rec, "velocity");
        s.target_dim = 3;
        s.targets.resize(s.rows * 3);
    }
    for (std::size_t i = 0; i < s.rows; ++i) {
        const auto& row = rec.rows[i];
        double* v = &s.values[i * 7];
        for (int c = 0; c < 4; ++c)
            v[c] = row.anemo[static_cast<std::size_t>(c)];
        v[4] = row.gyro.x;
        v[5] = row.gyro.y;
        v[6] = row.gyro.z;
        if (with_targets) {
            const auto& gt = *row.gt;
            const Vec3 body =
                core::Rotation::from_quaternion(gt.q).rotate_back(gt.v);
            s.targets[i * 3 + 0] = body.x;
            s.targets[i * 3 + 1] = body.y;
            s.targets[i * 3 + 2] = body.z;
        }
    }
    return s;
}

SessionChannels acceleration_channels(const sim::FlightRecord& rec,
                                      const std::vector<core::Quat>& attitude,
                                      bool with_targets) {
    if (attitude.size() != rec.rows.size())
        throw core::ConfigError(
            "attitude series length does not match the record");
    SessionChannels s;
    s.rows = rec.rows.size();
    s.channels = 14;
    s.values.resize(s.rows * s.channels);
    if (with_targets) {
        require_truth(rec, "acceleration");
        s.target_dim = 3;
        s.targets.resize(s.rows * 3);
    }
    double hold_v = 0.0, hold_i = 0.0;
    for (std::size_t i = 0; i < s.rows; ++i) {
        const auto& row = rec.rows[i];
        double* v = &s.values[i * 14];
        for (std::size_t c = 0; c < 4; ++c) {
            v[c] = row.anemo[c];
            v[4 + c] = row.esc[c];
        }
        v[8] = attitude[i].w;
        v[9] = attitude[i].x;
        v[10] = attitude[i].y;
        v[11] = attitude[i].z;
        v[12] = ffill(row.voltage_v, hold_v);
        v[13] = ffill(row.current_a, hold_i);
        if (with_targets) {
            const auto& gt = *row.gt;
            s.targets[i * 3 + 0] = gt.a.x;
            s.targets[i * 3 + 1] = gt.a.y;
            s.targets[i * 3 + 2] = gt.a.z;
        }
    }
    return s;
}

SessionChannels status_channels(const sim::FlightRecord& rec,
                                bool with_targets) {
    SessionChannels s;
    s.rows = rec.rows.size();
    s.channels = 8;
    s.shift_channel = 5;
    s.values.resize(s.rows * s.channels);
    if (with_targets) {
        require_truth(rec, "status");
        s.target_dim = 2;
        s.targets.resize(s.rows * 2);
    }
    const est::AtmosphereParams atm{};
    double hold_v = 0.0, hold_i = 0.0, hold_alt = 0.0;
    for (std::size_t i = 0; i < s.rows; ++i) {
        const auto& row = rec.rows[i];
        double* v = &s.values[i * 8];
        v[0] = 0.5 * (row.anemo[2] + row.anemo[3]);
        v[1] = row.anemo[2] - row.anemo[3];
        v[2] = 0.25 * (row.esc[0] + row.esc[1] + row.esc[2] + row.esc[3]);
        v[3] = ffill(row.voltage_v, hold_v);
        v[4] = ffill(row.current_a, hold_i);
        std::optional<double> alt;
        if (row.pressure_pa)
            alt = est::pressure_to_altitude(*row.pressure_pa, atm);
        v[5] = ffill(alt, hold_alt);
        v[6] = row.accel.norm();
        v[7] = row.gyro.norm();
        if (with_targets) {
            const bool air = row.gt->in_air;
            s.targets[i * 2 + 0] = air ? 0.0 : 1.0;
            s.targets[i * 2 + 1] = air ? 1.0 : 0.0;
        }
    }
    return s;
}

NetworkInference::NetworkInference(const sim::FlightRecord& rec,
                                   std::optional<Weights> velocity,
                                   std::optional<Weights> acceleration,
                                   std::optional<Weights> status,
                                   std::size_t stride)
    : stride_(stride == 0 ? 1 : stride),
      vel_spec_(velocity_network_spec()),
      acc_spec_(acceleration_network_spec()),
      status_spec_(status_network_spec()),
      vel_w_(std::move(velocity)),
      acc_w_(std::move(acceleration)),
      status_w_(std::move(status)) {
    if (vel_w_)
        vel_ch_ = velocity_channels(rec, false);
    if (acc_w_) {
        // The attitude columns (8..11) are filled from observe() at
        // assembly time; build the static channels with identity attitude.
        const std::vector<core::Quat> ident(rec.rows.size());
        acc_ch_ = acceleration_channels(rec, ident, false);
    }
    if (status_w_)
        status_ch_ = status_channels(rec, false);
    quats_.reserve(rec.rows.size());
}

void NetworkInference::observe(std::size_t tick, const core::Quat& attitude) {
    if (quats_.size() <= tick)
        quats_.resize(tick + 1);
    quats_[tick] = attitude;
}

bool NetworkInference::due(std::size_t tick, std::size_t window_len,
                           const Held& h) const {
    return tick + 1 >= window_len &&
           (tick + 1 - window_len) % stride_ == 0 && h.eval_tick != tick;
}

Tensor NetworkInference::window_at(const SessionChannels& ch, std::size_t tick,
                                   std::size_t window_len) const {
    Tensor x = Tensor::zeros3(1, window_len, ch.channels);
    const std::size_t start = tick + 1 - window_len;
    for (std::size_t t = 0; t < window_len; ++t)
        for (std::size_t c = 0; c < ch.channels; ++c)
            x.at(0, t, c) = ch.value(start + t, c);
    if (ch.shift_channel >= 0) {
        const auto sc = static_cast<std::size_t>(ch.shift_channel);
        const double base = ch.value(start, sc);
        for (std::size_t t = 0; t < window_len; ++t)
            x.at(0, t, sc) -= base;
    }
    return x;
}

std::optional<Vec3> NetworkInference::air_velocity_body(std::size_t tick) {
    if (!vel_w_)
        return std::nullopt;
    if (due(tick, vel_spec_.window_len, vel_held_)) {
        const Tensor x = window_at(vel_ch_, tick, vel_spec_.window_len);
        const Tensor y = network_forward(vel_spec_, *vel_w_, x);
        vel_held_.vec = Vec3{y.at(0, 0), y.at(0, 1), y.at(0, 2)};
        vel_held_.eval_tick = tick;
    }
    return vel_held_.vec;
}

std::optional<Vec3> NetworkInference::accel_inertial(std::size_t tick) {
    if (!acc_w_)
        return std::nullopt;
    if (due(tick, acc_spec_.window_len, acc_held_)) {
        Tensor x = window_at(acc_ch_, tick, acc_spec_.window_len);
        const std::size_t start = tick + 1 - acc_spec_.window_len;
        for (std::size_t t = 0; t < acc_spec_.window_len; ++t) {
            const std::size_t row = start + t;
            const core::Quat q =
                row < quats_.size() ? quats_[row] : core::Quat{};
            x.at(0, t, 8) = q.w;
            x.at(0, t, 9) = q.x;
            x.at(0, t, 10) = q.y;
            x.at(0, t, 11) = q.z;
        }
        const Tensor y = network_forward(acc_spec_, *acc_w_, x);
        acc_held_.vec = Vec3{y.at(0, 0), y.at(0, 1), y.at(0, 2)};
        acc_held_.eval_tick = tick;
    }
    return acc_held_.vec;
}

std::optional<double> NetworkInference::in_air_probability(std::size_t tick) {
    if (!status_w_)
        return std::nullopt;
    if (due(tick, status_spec_.window_len, status_held_)) {
        const Tensor x = window_at(status_ch_, tick, status_spec_.window_len);
        const Tensor y = network_forward(status_spec_, *status_w_, x);
        status_held_.scalar = y.at(0, 1);
        status_held_.has_scalar = true;
        status_held_.eval_tick = tick;
    }
    if (!status_held_.has_scalar)
        return std::nullopt;
    return status_held_.scalar;
}

} // namespace aeolus::nn
