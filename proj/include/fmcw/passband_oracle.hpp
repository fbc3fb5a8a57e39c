#pragma once

#include <cstdint>
#include <vector>

#include "fmcw/signal_model.hpp"

namespace fmcw {

struct OracleMeasurement {
    ToneParams tone;       // beat reported positive-for-positive-delay, like the model
    double resolution_hz;  // effective analysis resolution (1 / valid window)
};

// Brute-force reference for the envelope model at toy scale: synthesizes the real
// passband chirp sample-by-sample (delayed analytically, TX offset applied to the
// transmitted chirp only), downconverts with the complex conjugate local chirp,
// lowpass-filters (windowed-sinc FIR, independent of the production decimator),
// and measures the dominant tone by direct DTFT peak search. Phases are referenced
// to t = 0 through the filter's group delay. The complex downconversion places the
// beat of a positive delay at negative frequency; the measurement is reported on
// the model's positive-for-delay axis (frequency negated, phase and amplitude as
// measured, amplitude doubled to undo the mixer halving).
//
// Requires fs_high >= 10 * (2 * f_stop). Throws OracleResolutionError when the
// window cannot resolve the tone or the peak leaves the scanned band.
OracleMeasurement passband_oracle(const ChirpConfig& cfg_toy, const PathResponse& path,
                                  double f_off_hz, double fs_high_hz);

struct OracleCase {
    ChirpConfig cfg;
    PathResponse path;
    double f_off_hz = 0.0;
    double freq_err_rel_rbw = 0.0; // |model - oracle| / (oracle RBW)
    double phase_err_rad = 0.0;
    double amp_rel_err = 0.0;
};

struct OracleReport {
    std::vector<OracleCase> cases;
    double max_freq_err_rel_rbw = 0.0;
    double max_phase_err_rad = 0.0;
    double max_amp_rel_err = 0.0;
    bool pass = true; // freq < 1% of RBW and phase < 1e-2 rad on every case

    static constexpr double kFreqTolRelRbw = 0.01;
    static constexpr double kPhaseTolRad = 1e-2;
};

// Randomized toy-scale equivalence suite: envelope model vs passband oracle.
// inject_sign_flip negates the model's offset convention (a deliberate bug the
// suite must catch; used as a negative control).
OracleReport run_oracle_suite(int n_cases, std::uint64_t seed, bool inject_sign_flip = false);

} // namespace fmcw
