#pragma once

namespace mzsim {

// Reference dry-air properties used for capacitances and advection.
inline constexpr double kAirDensity = 1.2;        // kg/m3
inline constexpr double kAirSpecificHeat = 1000.0; // J/(kg K)
inline constexpr double kGravity = 9.81;           // m/s2

// Celsius <-> Kelvin offset.
inline constexpr double kKelvinOffset = 273.15;

// Boundary reference meaning "outdoors" for wall sides and link endpoints.
inline constexpr int kExterior = -1;

} // namespace mzsim
