#pragma once

#include "aeolus/sim/record.hpp"
#include "aeolus/sim/rig.hpp"
#include "aeolus/sim/trajectory.hpp"
#include "aeolus/sim/vehicle.hpp"

#include <cstdint>

namespace aeolus::sim {

/// Run the closed-loop sensor simulation over a ground-truth trajectory:
/// rotor commands are synthesized from the demanded acceleration, rotor
/// speeds follow the first-order lag at 800 Hz, and every sensor channel is
/// sampled at its own rate with its own deterministic noise stream.
FlightRecord synthesize_sensors(const TruthTrajectory& truth,
                                const VehicleParams& vehicle,
                                const SensorRig& rig, std::uint64_t seed);

} // namespace aeolus::sim
