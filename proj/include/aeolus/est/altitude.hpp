#pragma once

namespace aeolus::est {

/// Linear-temperature atmosphere model constants. Defaults are the
/// international standard atmosphere at sea level.
struct AtmosphereParams {
    double p1 = 101325.0;          ///< Reference pressure, Pa
    double t1 = 288.15;            ///< Reference temperature, K
    double h1 = 0.0;               ///< Reference altitude, m
    double lapse = -0.0065;        ///< Temperature lapse rate, K/m
    double gas_constant = 8.31432; ///< Universal gas constant, J/(mol K)
    double molar_mass = 0.0289644; ///< Molar mass of air, kg/mol
    double gravity = 9.80665;      ///< m/s^2
};

/// Altitude above the reference level for a static pressure reading.
/// Throws DataError for non-positive pressure or out-of-model readings.
double pressure_to_altitude(double pressure, const AtmosphereParams& atm = {});

/// Inverse map, used by the sensor synthesizer. Throws DataError when the
/// altitude leaves the linear-temperature layer (temperature <= 0).
double altitude_to_pressure(double altitude, const AtmosphereParams& atm = {});

} // namespace aeolus::est
