#pragma once

// Unit conventions.
//
// Internally every frequency is angular, in rad/ps. Times are in ps, sound
// speeds in km/s (= nm/ps), so DOS values are per nm^d per rad/ps.
// Files and the CLI use ordinary frequency nu = omega / 2pi in THz.

#include <numbers>

namespace phonobath {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace codata {
inline constexpr double boltzmann = 1.380649e-23;        // J/K (exact)
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double hbar_mev_ps = 0.6582119569509067;        // meV ps
inline constexpr double thz_per_mev = 0.24179892420849183;       // E = h nu
} // namespace codata

// Angular frequency in rad/ps.
class Frequency {
public:
    constexpr Frequency() = default;
    constexpr explicit Frequency(double rad_per_ps) : value_(rad_per_ps) {}

    static constexpr Frequency from_thz(double nu) { return Frequency(two_pi * nu); }
    static constexpr Frequency from_mev(double e) { return from_thz(codata::thz_per_mev * e); }

    constexpr double rad_per_ps() const { return value_; }
    constexpr double thz() const { return value_ / two_pi; }

    friend constexpr bool operator==(Frequency, Frequency) = default;
    friend constexpr auto operator<=>(Frequency, Frequency) = default;

private:
    double value_ = 0.0;
};

// omega_D = k_B T_D / hbar. Throws InputError for T_D <= 0.
Frequency debye_from_temperature(double debye_temperature_kelvin);

} // namespace phonobath
