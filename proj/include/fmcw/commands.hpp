#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "fmcw/dsp.hpp"

namespace fmcw {

// Exit codes shared by the CLI surface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;      // schema / parameter errors
inline constexpr int kExitSimulation = 3; // simulation failures
inline constexpr int kExitCalibration = 4; // sweep failed / no leakage found
inline constexpr int kExitOracle = 5;     // oracle tolerance breach

struct RunOptions {
    std::string scenario;
    bool cancel = false;
    Window window = Window::rectangular;
    std::string out_dir;
    std::string calibration_path; // default: <out_dir>/calibration.txt
};

struct CalibrateOptions {
    std::string scenario;
    bool multipath = false;
    int max_paths = 3;
    int target_bin = 1;
    int chirps_averaged = 1;
    std::string out_dir;
};

struct SweepOptions {
    std::string scenario;
    std::string param; // phase_error | target_range | leakage_delay | leakage_coupling
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    std::string out_dir;
};

struct OracleOptions {
    int cases = 20;
    std::uint64_t seed = 1;
    bool inject_sign_flip = false; // negative-control fixture
};

int cmd_run(const RunOptions& opts, std::ostream& log);
int cmd_calibrate(const CalibrateOptions& opts, std::ostream& log);
int cmd_sweep(const SweepOptions& opts, std::ostream& log);
int cmd_oracle_check(const OracleOptions& opts, std::ostream& log);

// Resolve the effective output directory: explicit flag, else $FMCWSIM_OUT_DIR,
// else "out". The directory is created when missing.
std::string resolve_out_dir(const std::string& flag_value);

} // namespace fmcw
