#include "commands.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/flightlog/logging.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"airflow-inertial odometry toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 1;

    // --- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand(
        "simulate", "generate synthetic flight sessions");
    std::string sim_out = "data";
    std::size_t sim_sessions = 4;
    sim->add_option("--config", config_path, "run configuration file");
    sim->add_option("--seed", seed, "base RNG seed (session i uses seed+i)");
    sim->add_option("--out", sim_out, "output directory for session CSVs");
    sim->add_option("--sessions", sim_sessions, "number of sessions");

    // --- train ------------------------------------------------------------
    auto* train = app.add_subcommand("train", "train one network head");
    std::string train_which, train_data, train_out = "weights.json";
    train->add_option("which", train_which,
                      "network: velocity | acceleration | status")
        ->required();
    train->add_option("data", train_data, "directory of session CSVs")
        ->required();
    train->add_option("--config", config_path, "run configuration file");
    train->add_option("--seed", seed, "training seed");
    train->add_option("--out", train_out, "output weights JSON path");

    // --- estimate ---------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "run odometry over a dataset");
    aeolus::cli::EstimateOptions eo;
    est->add_option("dataset", eo.dataset, "input session CSV")->required();
    est->add_option("--config", eo.config_path, "run configuration file");
    est->add_option("--gains", eo.gains_path,
                    "config whose [gains] section overrides --config");
    est->add_option("--weights-velocity", eo.weights_velocity,
                    "velocity network weights JSON");
    est->add_option("--weights-acceleration", eo.weights_acceleration,
                    "acceleration network weights JSON");
    est->add_option("--weights-status", eo.weights_status,
                    "status network weights JSON");
    est->add_flag("--no-networks", eo.no_networks,
                  "oracle mode: replay ground-truth measurements");
    est->add_option("--out", eo.out_dir, "output directory")->required();

    // --- evaluate ---------------------------------------------------------
    auto* eval = app.add_subcommand(
        "evaluate", "recompute metrics from an estimates file");
    std::string eval_estimates, eval_truth, eval_out;
    eval->add_option("estimates", eval_estimates, "estimates CSV")->required();
    eval->add_option("truth", eval_truth, "ground-truth session CSV")
        ->required();
    eval->add_option("--out", eval_out, "also write the report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed())
            return aeolus::cli::cmd_simulate(config_path, seed, sim_out,
                                             sim_sessions);
        if (train->parsed())
            return aeolus::cli::cmd_train(train_which, train_data, config_path,
                                          seed, train_out);
        if (est->parsed())
            return aeolus::cli::cmd_estimate(eo);
        return aeolus::cli::cmd_evaluate(eval_estimates, eval_truth, eval_out);
    } catch (const aeolus::core::ConfigError& e) {
        aeolus::flightlog::log_error(e.what());
        return kExitUsage;
    } catch (const aeolus::core::NumericError& e) {
        aeolus::flightlog::log_error(e.what());
        return kExitNumeric;
    } catch (const aeolus::core::DataError& e) {
        aeolus::flightlog::log_error(e.what());
        return kExitData;
    } catch (const std::exception& e) {
        aeolus::flightlog::log_error(e.what());
        return kExitData;
    }
}
