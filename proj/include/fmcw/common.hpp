#pragma once

#include <cmath>
#include <complex>

namespace fmcw {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s, exact

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wrap an angle into (-pi, pi].
inline double wrap_phase(double rad) {
    double x = std::remainder(rad, kTwoPi); // [-pi, pi], ties to even
    if (x <= -kPi) {
        x = kPi;
    }
    return x;
}

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double amplitude_to_db(double a) { return 20.0 * std::log10(a); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }

} // namespace fmcw
