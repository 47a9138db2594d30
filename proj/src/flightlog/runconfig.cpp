#include "aeolus/flightlog/runconfig.hpp"

#include "aeolus/core/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

namespace aeolus::flightlog {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

/// Cut a '#'/';' comment that starts the line or follows whitespace, so
/// values can carry unit annotations without a separate comment line.
std::string_view strip_comment(std::string_view s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((s[i] == '#' || s[i] == ';') &&
            (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t'))
            return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void line_error(std::size_t line, const std::string& what) {
    throw core::ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view v, std::size_t line) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() ||
        !std::isfinite(out))
        line_error(line, "expected a number, got '" + std::string(v) + "'");
    return out;
}

std::size_t parse_count(std::string_view v, std::size_t line) {
    std::size_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        line_error(line, "expected a non-negative integer, got '" +
                             std::string(v) + "'");
    return out;
}

/// Uniform diagonal gain: one scalar fills all three axes.
core::Vec3 splat(double v) { return core::Vec3{v, v, v}; }

} // namespace

fusion::OdometryConfig RunConfig::odometry() const {
    fusion::OdometryConfig cfg;
    cfg.gains = gains;
    cfg.attitude_gains = attitude;
    cfg.mag_field = rig.mag_field;
    cfg.init_window_s = init_window_s;
    cfg.baro_fit_min_s = baro_fit_min_s;
    return cfg;
}

RunConfig read_runconfig(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw core::ConfigError("cannot open config '" + path + "'");

    RunConfig cfg;
    std::string section;
    std::string raw;
    std::size_t lineno = 0;

    while (std::getline(f, raw)) {
        ++lineno;
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                line_error(lineno, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "scenario" && section != "vehicle" &&
                section != "rig" && section != "gains" &&
                section != "attitude" && section != "training" &&
                section != "paths")
                line_error(lineno, "unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            line_error(lineno, "expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty())
            line_error(lineno, "key '" + key + "' outside any section");

        const auto num = [&] { return parse_double(value, lineno); };
        const auto cnt = [&] { return parse_count(value, lineno); };

        if (section == "scenario") {
            auto& s = cfg.scenario;
            if (key == "duration_s") s.duration_s = num();
            else if (key == "rate_hz") s.rate_hz = num();
            else if (key == "dwell_pre_s") s.dwell_pre_s = num();
            else if (key == "dwell_post_s") s.dwell_post_s = num();
            else if (key == "takeoff_s") s.takeoff_s = num();
            else if (key == "landing_s") s.landing_s = num();
            else if (key == "cruise_altitude_m") s.cruise_altitude_m = num();
            else if (key == "style")
                s.style = sim::flight_style_from_string(std::string(value));
            else if (key == "horizontal_amplitude_m") s.horizontal_amplitude_m = num();
            else if (key == "vertical_amplitude_m") s.vertical_amplitude_m = num();
            else if (key == "velocity_limit_mps") s.velocity_limit_mps = num();
            else if (key == "accel_limit_mps2") s.accel_limit_mps2 = num();
            else if (key == "jerk_limit_mps3") s.jerk_limit_mps3 = num();
            else if (key == "yaw_amplitude_rad") s.yaw_amplitude_rad = num();
            else if (key == "wind_x_mps") s.wind_mps.x = num();
            else if (key == "wind_y_mps") s.wind_mps.y = num();
            else if (key == "wind_z_mps") s.wind_mps.z = num();
            else line_error(lineno, "unknown key '" + key + "' in [scenario]");
        } else if (section == "vehicle") {
            auto& v = cfg.vehicle;
            if (key == "mass_kg") v.mass_kg = num();
            else if (key == "rotor_radius_m") v.rotor_radius_m = num();
            else if (key == "thrust_coeff") v.thrust_coeff = num();
            else if (key == "drag_coeff") v.drag_coeff = num();
            else if (key == "rotor_tau_s") v.rotor_tau_s = num();
            else if (key == "rotor_speed_max") v.rotor_speed_max = num();
            else if (key == "air_density") v.air_density = num();
            else line_error(lineno, "unknown key '" + key + "' in [vehicle]");
        } else if (section == "rig") {
            auto& r = cfg.rig;
            if (key == "lever_arm_x_m") r.lever_arm.x = num();
            else if (key == "lever_arm_y_m") r.lever_arm.y = num();
            else if (key == "lever_arm_z_m") r.lever_arm.z = num();
            else if (key == "anemo_noise_mps") r.anemo_noise = num();
            else if (key == "anemo_noise_speed_gain") r.anemo_noise_speed_gain = num();
            else if (key == "accel_noise_mps2") r.accel_noise = num();
            else if (key == "gyro_noise_rad_s") r.gyro_noise = num();
            else if (key == "mag_noise") r.mag_noise = num();
            else if (key == "baro_noise_pa") r.baro_noise_pa = num();
            else if (key == "esc_noise") r.esc_noise = num();
            else if (key == "voltage_noise_v") r.voltage_noise = num();
            else if (key == "current_noise_a") r.current_noise = num();
            else if (key == "accel_bias_x_mps2") r.accel_bias.x = num();
            else if (key == "accel_bias_y_mps2") r.accel_bias.y = num();
            else if (key == "accel_bias_z_mps2") r.accel_bias.z = num();
            else if (key == "gyro_bias_x_rad_s") r.gyro_bias.x = num();
            else if (key == "gyro_bias_y_rad_s") r.gyro_bias.y = num();
            else if (key == "gyro_bias_z_rad_s") r.gyro_bias.z = num();
            else if (key == "baro_alt_bias_m") r.baro_alt_bias_m = num();
            else if (key == "baro_alt_drift_mps") r.baro_alt_drift_mps = num();
            else line_error(lineno, "unknown key '" + key + "' in [rig]");
        } else if (section == "gains") {
            auto& g = cfg.gains;
            if (key == "k0") g.k0 = splat(num());
            else if (key == "k1") g.k1 = splat(num());
            else if (key == "k2_z") g.k2 = core::Vec3{0.0, 0.0, num()};
            else if (key == "k3") g.k3 = splat(num());
            else if (key == "k4") g.k4 = splat(num());
            else if (key == "k5_z") g.k5 = core::Vec3{0.0, 0.0, num()};
            else if (key == "k6_z") g.k6 = core::Vec3{0.0, 0.0, num()};
            else if (key == "imu_weight") g.alpha = num();
            else if (key == "baro_rate_gain") g.beta = num();
            else if (key == "k_pv_z") g.k_pv = core::Vec3{0.0, 0.0, num()};
            else if (key == "baro_tick_scale") g.baro_tick_scale = num();
            else if (key == "baro_fit_min_s") cfg.baro_fit_min_s = num();
            else line_error(lineno, "unknown key '" + key + "' in [gains]");
        } else if (section == "attitude") {
            auto& a = cfg.attitude;
            if (key == "bias_gain") a.bias_gain = num();
            else if (key == "accel_gain") a.accel_gain = num();
            else if (key == "mag_gain") a.mag_gain = num();
            else if (key == "mean_window") a.mean_window = cnt();
            else if (key == "init_window_s") cfg.init_window_s = num();
            else line_error(lineno, "unknown key '" + key + "' in [attitude]");
        } else if (section == "training") {
            auto& t = cfg.training;
            if (key == "batch_size") t.batch_size = cnt();
            else if (key == "max_epochs") t.max_epochs = cnt();
            else if (key == "patience") t.patience = cnt();
            else if (key == "base_lr") t.base_lr = num();
            else if (key == "max_lr") t.max_lr = num();
            else if (key == "cycle_epochs") t.cycle_epochs = cnt();
            else if (key == "train_stride") t.train_stride = cnt();
            else if (key == "val_stride") t.val_stride = cnt();
            else if (key == "inference_stride") t.inference_stride = cnt();
            else line_error(lineno, "unknown key '" + key + "' in [training]");
        } else { // paths
            auto& p = cfg.paths;
            if (key == "data_dir") p.data_dir = std::string(value);
            else if (key == "weights_dir") p.weights_dir = std::string(value);
            else if (key == "output_dir") p.output_dir = std::string(value);
            else line_error(lineno, "unknown key '" + key + "' in [paths]");
        }
    }
    cfg.gains.validate();
    return cfg;
}

} // namespace aeolus::flightlog
