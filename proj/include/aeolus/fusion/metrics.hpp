#pragma once

#include "aeolus/fusion/pipeline.hpp"
#include "aeolus/sim/record.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aeolus::fusion {

/// Run-level accuracy summary. Ground-truth-relative entries are absent when
/// the record carries no truth columns; vertical error then falls back to the
/// baro reference.
struct RunMetrics {
    double duration_s = 0.0;
    double drift_m = 0.0;                 ///< final position error magnitude
    std::optional<core::Vec3> drift_axis; ///< final per-axis error (gt only)
    std::optional<double> horizontal_drift_m;
    double vertical_max_error_m = 0.0; ///< max |ẑ − z| (gt, else vs baro)
    std::optional<core::Vec3> vel_rmse;
    std::optional<core::Vec3> pos_rmse;
    std::optional<double> status_accuracy;
    std::vector<double> takeoff_time_errors_s;
    std::vector<double> landing_time_errors_s;
};

RunMetrics compute_metrics(const OdometryResult& result,
                           const sim::FlightRecord& rec);

/// Deterministic JSON rendering (sorted keys, shortest-round-trip doubles,
/// null for unavailable entries).
std::string metrics_to_json(const RunMetrics& m);

} // namespace aeolus::fusion
