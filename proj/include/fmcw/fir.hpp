#pragma once

#include <cstddef>
#include <vector>

namespace fmcw {

// Lowpass design request with frequencies normalized to the sample rate (fs = 1).
struct FirSpec {
    double pass_edge = 0.04;
    double stop_edge = 0.05;
    double delta_pass = 5e-5; // peak passband ripple (linear)
    double delta_stop = 5e-4; // peak stopband ripple (linear), 5e-4 = 66 dB
};

// Equiripple (Parks-McClellan) linear-phase lowpass, always odd length (type I).
// Throws std::runtime_error if the exchange fails to converge.
std::vector<double> design_equiripple_lowpass(const FirSpec& spec);

// Zero-phase amplitude response of a type-I filter at normalized frequency f (fs = 1).
double fir_amplitude_response(const std::vector<double>& taps, double f);

} // namespace fmcw
