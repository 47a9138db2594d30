#include "commands.hpp"
#include "estimates_io.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/flightlog/dataset.hpp"
#include "aeolus/flightlog/logging.hpp"
#include "aeolus/fusion/metrics.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace aeolus::cli {

int cmd_evaluate(const std::string& estimates_path,
                 const std::string& truth_path, const std::string& out_path) {
    const fusion::OdometryResult est = read_estimates(estimates_path);
    const sim::FlightRecord rec = flightlog::read_dataset(truth_path);

    if (est.rows.size() != rec.rows.size())
        throw core::DataError(
            "estimates and truth disagree on row count (" +
            std::to_string(est.rows.size()) + " vs " +
            std::to_string(rec.rows.size()) + ")");
    for (std::size_t i = 0; i < est.rows.size(); ++i)
        if (est.rows[i].t != rec.rows[i].t)
            throw core::DataError("timestamp mismatch at row " +
                                  std::to_string(i + 1));

    const std::string report =
        fusion::metrics_to_json(fusion::compute_metrics(est, rec));
    std::printf("%s\n", report.c_str());
    if (!out_path.empty()) {
        if (const auto parent = std::filesystem::path(out_path).parent_path();
            !parent.empty())
            std::filesystem::create_directories(parent);
        std::ofstream f(out_path, std::ios::binary);
        if (!f)
            throw core::DataError("cannot open '" + out_path +
                                  "' for writing");
        f << report << '\n';
    }
    return 0;
}

} // namespace aeolus::cli
