#pragma once

#include <stdexcept>
#include <string>

namespace fmcw {

// Base class for all simulator errors so callers can catch the family at once.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A de-chirped tone landed outside the configured receive band.
struct ToneOutOfBand : SimError {
    using SimError::SimError;
};

// A tone at or above Nyquist cannot be rendered at the requested rate.
struct AliasError : SimError {
    using SimError::SimError;
};

// Two sample vectors that must be combined have different lengths.
struct LengthMismatch : SimError {
    using SimError::SimError;
};

// Sample count not compatible with the requested decimation factor.
struct LengthError : SimError {
    using SimError::SimError;
};

// Invalid or inconsistent scenario description.
struct ScenarioError : SimError {
    using SimError::SimError;
};

// No spectral peak above the detection threshold.
struct NoLeakageFound : SimError {
    using SimError::SimError;
};

// A calibration sweep produced no usable minimum.
struct SweepFailed : SimError {
    using SimError::SimError;
};

// Leakage estimate too close to the noise floor to trust.
struct EstimateBelowNoise : SimError {
    using SimError::SimError;
};

// Two leakage beat frequencies closer than the calibration can separate.
struct PathsTooClose : SimError {
    using SimError::SimError;
};

// The oracle's measurement window cannot resolve the tone.
struct OracleResolutionError : SimError {
    using SimError::SimError;
};

} // namespace fmcw
