#include "aeolus/fusion/metrics.hpp"

#include "aeolus/core/errors.hpp"
#include "aeolus/est/altitude.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aeolus::fusion {

using core::Vec3;

namespace {

/// Transition instants of the ground-truth status signal.
void truth_transitions(const sim::FlightRecord& rec,
                       std::vector<double>& takeoffs,
                       std::vector<double>& landings) {
    bool prev = false;
    bool have_prev = false;
    for (const auto& row : rec.rows) {
        if (!row.gt)
            continue;
        if (have_prev && row.gt->in_air != prev) {
            (row.gt->in_air ? takeoffs : landings).push_back(row.t);
        }
        prev = row.gt->in_air;
        have_prev = true;
    }
}

std::vector<double> pair_errors(const std::vector<double>& truth,
                                const std::vector<double>& est) {
    std::vector<double> errs;
    for (double t : truth) {
        if (est.empty()) {
            errs.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (double e : est)
            best = std::min(best, std::abs(e - t));
        errs.push_back(best);
    }
    return errs;
}

} // namespace

RunMetrics compute_metrics(const OdometryResult& result,
                           const sim::FlightRecord& rec) {
    if (result.rows.size() != rec.rows.size())
        throw core::DataError("estimate/record row count mismatch");
    if (result.rows.empty())
        throw core::DataError("empty run");

    RunMetrics m;
    m.duration_s = result.rows.back().t - result.rows.front().t;

    const bool has_gt =
        std::all_of(rec.rows.begin(), rec.rows.end(),
                    [](const sim::SensorSample& r) { return r.gt.has_value(); });

    if (has_gt) {
        Vec3 sq_v = Vec3::zero(), sq_p = Vec3::zero();
        double vmax = 0.0;
        std::size_t status_hits = 0;
        for (std::size_t i = 0; i < rec.rows.size(); ++i) {
            const auto& gt = *rec.rows[i].gt;
            const auto& est = result.rows[i];
            const Vec3 pe = est.state.p - gt.p;
            const Vec3 ve = est.state.v - gt.v;
            sq_p += pe.cwise(pe);
            sq_v += ve.cwise(ve);
            vmax = std::max(vmax, std::abs(pe.z));
            if ((est.status == Status::InAir) == gt.in_air)
                ++status_hits;
        }
        const double n = static_cast<double>(rec.rows.size());
        m.pos_rmse = Vec3{std::sqrt(sq_p.x / n), std::sqrt(sq_p.y / n),
                          std::sqrt(sq_p.z / n)};
        m.vel_rmse = Vec3{std::sqrt(sq_v.x / n), std::sqrt(sq_v.y / n),
                          std::sqrt(sq_v.z / n)};
        m.vertical_max_error_m = vmax;
        m.status_accuracy = status_hits / n;

        const Vec3 final_err =
            result.rows.back().state.p - rec.rows.back().gt->p;
        m.drift_axis = final_err;
        m.drift_m = final_err.norm();
        m.horizontal_drift_m = std::hypot(final_err.x, final_err.y);

        std::vector<double> tk, ld;
        truth_transitions(rec, tk, ld);
        m.takeoff_time_errors_s = pair_errors(tk, result.takeoff_times);
        m.landing_time_errors_s = pair_errors(ld, result.landing_times);
    } else {
        // No truth: report vertical error against the (biased) baro reference.
        const est::AtmosphereParams atm{};
        double vmax = 0.0;
        double last_offset = 0.0;
        for (std::size_t i = 0; i < rec.rows.size(); ++i) {
            if (!rec.rows[i].pressure_pa)
                continue;
            const double baro_down =
                -est::pressure_to_altitude(*rec.rows[i].pressure_pa, atm);
            last_offset = result.rows[i].state.p.z - baro_down;
            vmax = std::max(vmax, std::abs(last_offset));
        }
        m.vertical_max_error_m = vmax;
        m.drift_m = std::abs(last_offset);
    }
    return m;
}

std::string metrics_to_json(const RunMetrics& m) {
    using json = nlohmann::ordered_json;
    auto vec = [](const std::optional<Vec3>& v) -> json {
        if (!v)
            return nullptr;
        return json{{"x", v->x}, {"y", v->y}, {"z", v->z}};
    };
    auto opt = [](const std::optional<double>& v) -> json {
        if (!v)
            return nullptr;
        return *v;
    };
    json j;
    j["duration_s"] = m.duration_s;
    j["drift_m"] = m.drift_m;
    j["drift_axis"] = vec(m.drift_axis);
    j["horizontal_drift_m"] = opt(m.horizontal_drift_m);
    j["vertical_max_error_m"] = m.vertical_max_error_m;
    j["vel_rmse"] = vec(m.vel_rmse);
    j["pos_rmse"] = vec(m.pos_rmse);
    j["status_accuracy"] = opt(m.status_accuracy);
    j["takeoff_time_errors_s"] = m.takeoff_time_errors_s;
    j["landing_time_errors_s"] = m.landing_time_errors_s;
    return j.dump(2) + "\n";
}

} // namespace aeolus::fusion
