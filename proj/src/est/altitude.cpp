#include "aeolus/est/altitude.hpp"

#include <cmath>
#include <string>

#include "aeolus/core/errors.hpp"

namespace aeolus::est {

double pressure_to_altitude(double pressure, const AtmosphereParams& atm) {
    if (!(pressure > 0.0)) {
        throw core::DataError("pressure_to_altitude: non-positive pressure " + std::to_string(pressure));
    }
    // h = h1 + (T1/L) * ((P/P1)^(-R L / (g M)) - 1)
    const double exponent = -atm.gas_constant * atm.lapse / (atm.gravity * atm.molar_mass);
    return atm.h1 + (atm.t1 / atm.lapse) * (std::pow(pressure / atm.p1, exponent) - 1.0);
}

double altitude_to_pressure(double altitude, const AtmosphereParams& atm) {
    const double temp_ratio = 1.0 + atm.lapse * (altitude - atm.h1) / atm.t1;
    if (!(temp_ratio > 0.0)) {
        throw core::DataError("altitude_to_pressure: altitude " + std::to_string(altitude) +
                        " leaves the linear-temperature layer");
    }
    const double exponent = -atm.gravity * atm.molar_mass / (atm.gas_constant * atm.lapse);
    return atm.p1 * std::pow(temp_ratio, exponent);
}

} // namespace aeolus::est
