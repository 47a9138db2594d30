#include "commands.hpp"
#include "estimates_io.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/est/altitude.hpp"
#include "aeolus/flightlog/dataset.hpp"
#include "aeolus/flightlog/logging.hpp"
#include "aeolus/flightlog/runconfig.hpp"
#include "aeolus/fusion/metrics.hpp"
#include "aeolus/fusion/pipeline.hpp"
#include "aeolus/nn/paper_nets.hpp"
#include "aeolus/nn/weights_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

namespace aeolus::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw core::DataError("cannot open '" + path.string() +
                              "' for writing");
    f << text;
}

/// Figure CSVs: estimated vs true velocity/position and the bias traces.
/// Truth columns are present only when the record carries them.
void write_figures(const fs::path& dir, const fusion::OdometryResult& odo,
                   const sim::FlightRecord& rec) {
    bool has_gt = true;
    for (const auto& r : rec.rows)
        if (!r.gt) {
            has_gt = false;
            break;
        }

    std::string vel = has_gt ? "t,vx,vy,vz,gt_vx,gt_vy,gt_vz\n"
                             : "t,vx,vy,vz\n";
    std::string pos = has_gt ? "t,px,py,pz,gt_px,gt_py,gt_pz,baro_alt_m\n"
                             : "t,px,py,pz,baro_alt_m\n";
    std::string bias =
        "t,accel_bias_x,accel_bias_y,accel_bias_z,"
        "vel_bias_x,vel_bias_y,vel_bias_z,baro_bias,baro_bias_rate,"
        "gyro_bias_x,gyro_bias_y,gyro_bias_z\n";

    double last_alt = 0.0;
    bool have_alt = false;
    for (std::size_t i = 0; i < odo.rows.size(); ++i) {
        const auto& o = odo.rows[i];
        const auto& s = rec.rows[i];
        const auto cell = [](std::string& out, double v) {
            out.push_back(',');
            append_g17(out, v);
        };

        append_g17(vel, o.t);
        for (int k = 0; k < 3; ++k)
            cell(vel, o.state.v[k]);
        if (has_gt)
            for (int k = 0; k < 3; ++k)
                cell(vel, s.gt->v[k]);
        vel.push_back('\n');

        if (s.pressure_pa) {
            last_alt = est::pressure_to_altitude(*s.pressure_pa,
                                                 est::AtmosphereParams{});
            have_alt = true;
        }
        append_g17(pos, o.t);
        for (int k = 0; k < 3; ++k)
            cell(pos, o.state.p[k]);
        if (has_gt)
            for (int k = 0; k < 3; ++k)
                cell(pos, s.gt->p[k]);
        pos.push_back(',');
        if (have_alt)
            append_g17(pos, last_alt);
        pos.push_back('\n');

        append_g17(bias, o.t);
        for (int k = 0; k < 3; ++k)
            cell(bias, o.state.accel_bias[k]);
        for (int k = 0; k < 3; ++k)
            cell(bias, o.state.vel_bias[k]);
        cell(bias, o.state.baro_bias);
        cell(bias, o.state.baro_bias_rate);
        for (int k = 0; k < 3; ++k)
            cell(bias, o.gyro_bias[k]);
        bias.push_back('\n');
    }
    write_text(dir / "velocity_vs_truth.csv", vel);
    write_text(dir / "position_vs_truth.csv", pos);
    write_text(dir / "bias_traces.csv", bias);
}

std::optional<nn::Weights> maybe_load(const nn::NetworkSpec& spec,
                                      const std::string& path,
                                      const char* which) {
    if (path.empty()) {
        flightlog::log_warn(std::string("no ") + which +
                            " weights given; that channel will be absent");
        return std::nullopt;
    }
    return nn::load_weights(path, spec);
}

} // namespace

int cmd_estimate(const EstimateOptions& opts) {
    flightlog::RunConfig cfg;
    if (!opts.config_path.empty())
        cfg = flightlog::read_runconfig(opts.config_path);
    if (!opts.gains_path.empty()) {
        // A gains file is a config whose [gains] section wins; the rest of
        // the run setup still comes from --config.
        const flightlog::RunConfig gains_cfg =
            flightlog::read_runconfig(opts.gains_path);
        cfg.gains = gains_cfg.gains;
        cfg.baro_fit_min_s = gains_cfg.baro_fit_min_s;
    }

    const sim::FlightRecord rec = flightlog::read_dataset(opts.dataset);

    std::unique_ptr<fusion::MeasurementProvider> provider;
    if (opts.no_networks) {
        for (const auto& r : rec.rows)
            if (!r.gt)
                throw core::DataError(
                    "oracle mode (--no-networks) needs ground-truth columns "
                    "on every row");
        provider = std::make_unique<fusion::GroundTruthProvider>(rec);
    } else {
        provider = std::make_unique<nn::NetworkInference>(
            rec,
            maybe_load(nn::velocity_network_spec(), opts.weights_velocity,
                       "velocity"),
            maybe_load(nn::acceleration_network_spec(),
                       opts.weights_acceleration, "acceleration"),
            maybe_load(nn::status_network_spec(), opts.weights_status,
                       "status"),
            cfg.training.inference_stride);
    }

    const fusion::OdometryConfig ocfg = cfg.odometry();
    const fusion::OdometryResult odo = run_odometry(rec, *provider, ocfg);
    const fusion::OdometryResult dead = run_dead_reckoning(rec, ocfg);

    const fusion::RunMetrics metrics = fusion::compute_metrics(odo, rec);
    const fusion::RunMetrics dead_metrics =
        fusion::compute_metrics(dead, rec);
    const std::string metrics_json = fusion::metrics_to_json(metrics);

    fs::create_directories(opts.out_dir);
    const fs::path dir(opts.out_dir);
    write_estimates(odo, (dir / "estimates.csv").string());
    write_text(dir / "metrics.json", metrics_json + "\n");
    write_text(dir / "dead_reckoning.json",
               fusion::metrics_to_json(dead_metrics) + "\n");
    write_figures(dir, odo, rec);

    std::printf("%s\n", metrics_json.c_str());
    std::printf("dead-reckoning drift_m: %.17g\n", dead_metrics.drift_m);
    flightlog::log_info("estimate artifacts written to " + opts.out_dir);
    return 0;
}

} // namespace aeolus::cli
