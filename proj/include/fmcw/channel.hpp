#pragma once

#include <cstdint>
#include <vector>

#include "fmcw/common.hpp"
#include "fmcw/signal_model.hpp"

namespace fmcw {

struct Scenario;

// Link-budget inputs shared by all paths.
struct LinkBudget {
    double tx_power_dbm = 10.0;
    double tx_ant_gain_dbi = 0.0;
    double rx_ant_gain_dbi = 0.0;
    double nf_db = 15.0;
    double carrier_hz = 140e9; // center frequency used for lambda
};

struct TargetSpec {
    double range_m = 0.0;
    double rcs_dbsm = 0.0; // dB relative to 1 m^2
};

struct LeakageSpec {
    double delay_s = 0.0;
    double coupling_db = -30.0; // negative; TX-to-RX power ratio
};

// Slow per-chirp parameter drift of the leakage paths (abstract temperature model).
struct DriftConfig {
    bool enabled = false;
    double phase_drift_rad_per_chirp = 0.0;
    double gain_drift_db_per_chirp = 0.0;
};

struct NoiseConfig {
    bool enabled = true;
    double flicker_corner_hz = 0.0; // 0 disables the 1/f shaping
};

// Received power of a point target by the radar range equation:
//   Pr = Pt + Gt + Gr + 10*log10(lambda^2 * sigma / ((4*pi)^3 * R^4)),  lambda = c / carrier.
double target_received_power_dbm(const TargetSpec& target, const LinkBudget& lb);

// Linear amplitude ratio of a leakage coupling; power at RX input is Pt + coupling_db.
double leakage_amplitude(const LeakageSpec& leak, const LinkBudget& lb);

// Thermal noise floor: -174 dBm/Hz + 10*log10(bandwidth) + NF.
double noise_floor_dbm(double nf_db, double bandwidth_hz);

// Expand a scenario into propagation paths: leakage paths first (sorted by delay),
// then targets (sorted by range). Throws ScenarioError on duplicate delays.
std::vector<PathResponse> scenario_to_paths(const Scenario& s);

// Rotate/scale leakage paths by chirp_index steps of drift; targets pass through.
std::vector<PathResponse> apply_drift(const std::vector<PathResponse>& paths,
                                      std::uint64_t chirp_index, const DriftConfig& d);

// Deterministic white complex Gaussian noise at the RX input reference plane.
// Total power is the kTB+NF floor integrated over fs (the complex sampled band),
// so any bin of width rbw carries noise_floor_dbm(nf, rbw). The stream is derived
// from scenario_seed XOR chirp_index; Box-Muller on a mt19937_64 keeps the
// realization identical across standard libraries. When flicker_corner_hz > 0 the
// block is reshaped to PSD ∝ (1 + fc/|f|): the white floor above the corner stays
// at the kTB+NF level and excess flicker power piles up below it.
std::vector<cplx> make_noise(const NoiseConfig& cfg, const LinkBudget& lb, double fs_hz,
                             std::size_t n, std::uint64_t scenario_seed,
                             std::uint64_t chirp_index);

} // namespace fmcw
