#include "commands.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/flightlog/dataset.hpp"
#include "aeolus/flightlog/logging.hpp"
#include "aeolus/flightlog/runconfig.hpp"
#include "aeolus/flightlog/split.hpp"
#include "aeolus/nn/paper_nets.hpp"
#include "aeolus/nn/train.hpp"
#include "aeolus/nn/weights_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace aeolus::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> list_sessions(const std::string& data_dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(data_dir))
        throw core::ConfigError("data directory '" + data_dir +
                                "' does not exist");
    for (const auto& entry : fs::directory_iterator(data_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path().string());
    if (files.empty())
        throw core::DataError("no .csv sessions found in '" + data_dir + "'");
    return files;
}

nn::SessionChannels channels_for(const std::string& which,
                                 const sim::FlightRecord& rec,
                                 const flightlog::RunConfig& cfg) {
    if (which == "velocity")
        return nn::velocity_channels(rec, true);
    if (which == "acceleration") {
        const auto attitude = nn::attitude_pass(
            rec, cfg.attitude, cfg.rig.mag_field, cfg.init_window_s);
        return nn::acceleration_channels(rec, attitude, true);
    }
    return nn::status_channels(rec, true);
}

void append_g17(std::string& out, double v) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void write_history(const std::vector<nn::EpochStats>& history,
                   const std::string& path) {
    std::string out = "epoch,train_loss,val_loss,lr\n";
    for (const auto& e : history) {
        out += std::to_string(e.epoch);
        out.push_back(',');
        append_g17(out, e.train_loss);
        out.push_back(',');
        append_g17(out, e.val_loss);
        out.push_back(',');
        append_g17(out, e.lr);
        out.push_back('\n');
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw core::DataError("cannot open '" + path + "' for writing");
    f << out;
}

/// Validation-set forward pass: per-axis RMSE for the regression heads,
/// argmax accuracy for the classifier.
void report_validation(const std::string& which, const nn::NetworkSpec& spec,
                       const nn::Weights& w,
                       const std::vector<nn::SessionChannels>& sessions,
                       std::size_t stride) {
    const auto windows = nn::make_windows(sessions, spec.window_len, stride);
    const std::size_t C = spec.output_dim();
    std::vector<double> sq(C, 0.0);
    std::size_t correct = 0;
    constexpr std::size_t kBatch = 256;
    for (std::size_t at = 0; at < windows.size(); at += kBatch) {
        const std::size_t B = std::min(kBatch, windows.size() - at);
        nn::Tensor x = nn::Tensor::zeros3(B, spec.window_len,
                                          spec.input_channels);
        nn::Tensor t = nn::Tensor::zeros2(B, C);
        for (std::size_t b = 0; b < B; ++b) {
            const auto& ref = windows[at + b];
            nn::assemble_window(sessions[ref.session], ref, spec.window_len, x,
                                t, b);
        }
        const nn::Tensor y = nn::network_forward(spec, w, x);
        for (std::size_t b = 0; b < B; ++b) {
            std::size_t best = 0, truth = 0;
            for (std::size_t c = 0; c < C; ++c) {
                const double d = y.at(b, c) - t.at(b, c);
                sq[c] += d * d;
                if (y.at(b, c) > y.at(b, best))
                    best = c;
                if (t.at(b, c) > t.at(b, truth))
                    truth = c;
            }
            if (best == truth)
                ++correct;
        }
    }
    const double n = static_cast<double>(windows.size());
    if (which == "status") {
        std::printf("validation accuracy: %.4f over %zu windows\n",
                    static_cast<double>(correct) / n, windows.size());
    } else {
        const char* unit = (which == "velocity") ? "m/s" : "m/s^2";
        std::printf("validation rmse [%s]: x=%.4f y=%.4f z=%.4f\n", unit,
                    std::sqrt(sq[0] / n), std::sqrt(sq[1] / n),
                    std::sqrt(sq[2] / n));
    }
}

} // namespace

int cmd_train(const std::string& which, const std::string& data_dir,
              const std::string& config_path, std::uint64_t seed,
              const std::string& out_weights) {
    if (which != "velocity" && which != "acceleration" && which != "status")
        throw core::ConfigError("unknown network '" + which +
                                "', expected velocity|acceleration|status");

    flightlog::RunConfig cfg;
    if (!config_path.empty())
        cfg = flightlog::read_runconfig(config_path);

    const auto split = flightlog::split_sessions(list_sessions(data_dir));
    flightlog::log_info("training on " + std::to_string(split.train.size()) +
                        " session(s), validating on " +
                        std::to_string(split.validation.size()));

    std::vector<nn::SessionChannels> train_sessions, val_sessions;
    for (const auto& path : split.train)
        train_sessions.push_back(
            channels_for(which, flightlog::read_dataset(path), cfg));
    for (const auto& path : split.validation)
        val_sessions.push_back(
            channels_for(which, flightlog::read_dataset(path), cfg));

    const nn::NetworkSpec spec = (which == "velocity")
                                     ? nn::velocity_network_spec()
                                 : (which == "acceleration")
                                     ? nn::acceleration_network_spec()
                                     : nn::status_network_spec();

    nn::TrainConfig tc;
    tc.batch_size = cfg.training.batch_size;
    tc.max_epochs = cfg.training.max_epochs;
    tc.patience = cfg.training.patience;
    tc.base_lr = cfg.training.base_lr;
    tc.max_lr = cfg.training.max_lr;
    tc.cycle_epochs = cfg.training.cycle_epochs;
    tc.train_stride = cfg.training.train_stride;
    tc.val_stride = cfg.training.val_stride;
    tc.seed = seed;
    tc.loss = (which == "status") ? nn::Loss::CrossEntropy : nn::Loss::Mse;

    const nn::TrainResult result =
        nn::train_network(spec, train_sessions, val_sessions, tc);

    if (const fs::path parent = fs::path(out_weights).parent_path();
        !parent.empty())
        fs::create_directories(parent);
    nn::save_weights(out_weights, spec, result.weights);

    fs::path history_path(out_weights);
    history_path.replace_extension();
    history_path += "_history.csv";
    write_history(result.history, history_path.string());

    std::printf("trained %s: %zu epochs, best epoch %zu, val loss %.6g\n",
                which.c_str(), result.history.size(), result.best_epoch,
                result.best_val_loss);
    report_validation(which, spec, result.weights, val_sessions,
                      cfg.training.val_stride);
    std::printf("weights: %s\nhistory: %s\n", out_weights.c_str(),
                history_path.string().c_str());
    return 0;
}

} // namespace aeolus::cli
