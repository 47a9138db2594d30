#pragma once

#include <cstdint>
#include <string>

namespace aeolus::cli {

int cmd_simulate(const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir, std::size_t sessions);

int cmd_train(const std::string& which, const std::string& data_dir,
              const std::string& config_path, std::uint64_t seed,
              const std::string& out_weights);

struct EstimateOptions {
    std::string dataset;
    std::string config_path;  ///< full run config (optional)
    std::string gains_path;   ///< gains-section override file (optional)
    std::string weights_velocity;
    std::string weights_acceleration;
    std::string weights_status;
    bool no_networks = false; ///< replay ground truth instead of networks
    std::string out_dir;
};

int cmd_estimate(const EstimateOptions& opts);

int cmd_evaluate(const std::string& estimates_path,
                 const std::string& truth_path, const std::string& out_path);

} // namespace aeolus::cli
