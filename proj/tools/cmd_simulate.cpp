#include "commands.hpp"

#include "aeolus/flightlog/dataset.hpp"
#include "aeolus/flightlog/logging.hpp"
#include "aeolus/flightlog/runconfig.hpp"
#include "aeolus/sim/sensors.hpp"
#include "aeolus/sim/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

namespace aeolus::cli {

namespace fs = std::filesystem;

int cmd_simulate(const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir, std::size_t sessions) {
    flightlog::RunConfig cfg;
    if (!config_path.empty())
        cfg = flightlog::read_runconfig(config_path);

    fs::create_directories(out_dir);

    for (std::size_t i = 0; i < sessions; ++i) {
        sim::ScenarioConfig sc = cfg.scenario;
        sc.seed = seed + i;
        const sim::TruthTrajectory truth = sim::generate_trajectory(sc);
        const sim::FlightRecord rec =
            sim::synthesize_sensors(truth, cfg.vehicle, cfg.rig, sc.seed);

        char name[32];
        std::snprintf(name, sizeof(name), "session_%03zu.csv", i + 1);
        const fs::path out = fs::path(out_dir) / name;
        flightlog::write_dataset(rec, out.string());

        // Path length of the truth trajectory, for the run summary.
        double distance = 0.0;
        for (std::size_t k = 1; k < truth.samples.size(); ++k) {
            const double dt = truth.samples[k].t - truth.samples[k - 1].t;
            distance += truth.samples[k].v.norm() * dt;
        }
        std::printf(
            "wrote %s: %.1f s, %zu rows, %.2f m flown, takeoff %.2f s, "
            "landing %.2f s\n",
            out.string().c_str(), sc.duration_s, rec.rows.size(), distance,
            truth.takeoff_time, truth.landing_time);
    }
    flightlog::log_info("simulated " + std::to_string(sessions) +
                        " session(s) into " + out_dir);
    return 0;
}

} // namespace aeolus::cli
