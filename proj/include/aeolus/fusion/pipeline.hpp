#pragma once

#include "aeolus/est/attitude.hpp"
#include "aeolus/fusion/observer.hpp"
#include "aeolus/fusion/status_filter.hpp"
#include "aeolus/sim/record.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace aeolus::fusion {

/// Source of the three learned quantities, one query per base tick. The
/// odometry loop calls observe() every tick (so implementations can keep
/// attitude history for their input windows), then polls the outputs.
/// Returning nullopt means "no estimate this tick" (e.g. warm-up).
class MeasurementProvider {
public:
    virtual ~MeasurementProvider() = default;

    virtual void observe(std::size_t tick, const core::Quat& attitude) {
        (void)tick;
        (void)attitude;
    }
    virtual std::optional<core::Vec3> air_velocity_body(std::size_t tick) = 0;
    virtual std::optional<core::Vec3> accel_inertial(std::size_t tick) = 0;
    virtual std::optional<double> in_air_probability(std::size_t tick) = 0;
};

/// Provider that replays ground truth from the record itself — isolates
/// observer behavior from model quality. Optional additive corruptions
/// support bias-convergence experiments.
class GroundTruthProvider : public MeasurementProvider {
public:
    explicit GroundTruthProvider(const sim::FlightRecord& rec)
        : rec_(&rec) {}

    /// Inject a constant body-frame bias into the replayed air velocity.
    void set_velocity_bias(const core::Vec3& b) { vel_bias_ = b; }
    /// Inject a constant inertial bias into the replayed acceleration.
    void set_accel_bias(const core::Vec3& b) { accel_bias_ = b; }

    std::optional<core::Vec3> air_velocity_body(std::size_t tick) override;
    std::optional<core::Vec3> accel_inertial(std::size_t tick) override;
    std::optional<double> in_air_probability(std::size_t tick) override;

private:
    const sim::FlightRecord* rec_;
    core::Vec3 vel_bias_, accel_bias_;
};

struct OdometryConfig {
    GainConfig gains;
    est::AttitudeGains attitude_gains;
    StatusFilter::Config status;
    core::Vec3 mag_field{0.5, 0.0, 0.8660254037844386};
    double init_window_s = 1.0; ///< rest window used for R̂ and v̂dot warm-up
    /// Minimum ground-dwell baro history (seconds) for the line-fit
    /// initialization of the baro bias states at takeoff; with less history
    /// the fallback is the instantaneous offset with zero rate.
    double baro_fit_min_s = 2.0;
};

struct OdometryRow {
    double t = 0.0;
    FusionState state;
    core::Quat attitude;
    core::Vec3 gyro_bias;
    Status status = Status::OnGround;
    bool had_velocity = false;
    bool had_accel = false;
};

struct OdometryResult {
    std::vector<OdometryRow> rows;
    std::vector<double> takeoff_times;
    std::vector<double> landing_times;
};

/// Full odometry loop: attitude observer, measurement provider, debounced
/// status, ground/air fusion steps. Initial state: position zero (the
/// power-on point is the navigation origin; the first baro sample seeds the
/// baro bias instead), zero velocity, attitude from the rest window's
/// accelerometer/magnetometer means.
OdometryResult run_odometry(const sim::FlightRecord& rec,
                            MeasurementProvider& provider,
                            const OdometryConfig& cfg);

/// Accelerometer-only dead reckoning with the same attitude observer and
/// initialization: V̇ = g·k0 + R̂·a_m. Drift baseline for comparisons.
OdometryResult run_dead_reckoning(const sim::FlightRecord& rec,
                                  const OdometryConfig& cfg);

} // namespace aeolus::fusion
