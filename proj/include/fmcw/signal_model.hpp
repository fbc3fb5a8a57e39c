#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fmcw/common.hpp"
#include "fmcw/errors.hpp"

namespace fmcw {

// Linear up-chirp sweep description.
//
// The transmitted passband signal is modelled as
//   s(t) = A * cos(2*pi*f_start*t + pi*k*t^2 + phi0),   k = (f_stop - f_start) / t_chirp,
// whose instantaneous frequency f_start + k*t sweeps exactly the bandwidth B over one
// period. All baseband-equivalent math in this library is relative to this local chirp.
struct ChirpConfig {
    double f_start_hz = 0.0;
    double f_stop_hz = 0.0;
    double t_chirp_s = 0.0;
    double amplitude = 1.0; // linear volts, the simulation's unit amplitude reference
    double phi0_rad = 0.0;

    double bandwidth_hz() const { return f_stop_hz - f_start_hz; }
    void validate() const; // throws ScenarioError on violated invariants
};

enum class PathKind { leakage, target };

// One propagation path between TX output and RX input.
// `delay_s` is the full signal travel time on this path (round trip for targets).
// `phase_offset_rad` carries drift-applied excess phase; zero for a pristine path.
struct PathResponse {
    double delay_s = 0.0;
    double gain = 1.0; // linear amplitude ratio relative to the TX amplitude
    PathKind kind = PathKind::leakage;
    double phase_offset_rad = 0.0;
};

// A complex CW tone in the de-chirped (complex envelope) domain.
struct ToneParams {
    double freq_hz = 0.0;
    double amp = 0.0;              // linear amplitude, same units as ChirpConfig::amplitude
    double phase_rad = 0.0;        // canonical in (-pi, pi]
};

// Sweep slope k = B / t_chirp in Hz/s.
double chirp_slope(const ChirpConfig& cfg);

// Beat frequency of a point target at range_m meters: 2*R*B/(c*T).
double beat_frequency(double range_m, const ChirpConfig& cfg);

// De-chirped complex-envelope tone of one path when the transmitted chirp is
// offset by f_off (the de-chirp reference stays un-offset):
//   freq  = k*tau - f_off          (positive beat for positive delay; the offset subtracts)
//   amp   = gain * A
//   phase = -2*pi*(f_start + f_off)*tau + pi*k*tau^2   (+ any drift phase), wrapped
// Throws ToneOutOfBand when |freq| >= rx_bandwidth_hz.
ToneParams dechirped_tone(const PathResponse& path, double f_off_hz, const ChirpConfig& cfg,
                          double rx_bandwidth_hz = std::numeric_limits<double>::infinity());

// Render a tone set to complex samples: x[m] = sum_j amp_j * exp(i*(2*pi*f_j*m/fs + phase_j)).
// Tones are accumulated in list order so superposition is bit-reproducible.
// Throws AliasError when any |freq| >= fs/2.
std::vector<cplx> synthesize_beat_signal(std::span<const ToneParams> tones, double fs_hz,
                                         std::size_t n);

} // namespace fmcw
