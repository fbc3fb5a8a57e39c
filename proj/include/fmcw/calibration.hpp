#pragma once

#include <string>
#include <vector>

#include "fmcw/frontend.hpp"
#include "fmcw/simulator.hpp"

namespace fmcw {

struct CalibrationConfig {
    int offset_search_halfwidth = 80; // DDS steps either side of the sweep center
    double phase_sweep_halfwidth = 0.1;
    double phase_sweep_step = 0.005;
    int max_paths = 3;
    int chirps_averaged = 1;
    int target_bin = 1;         // alignment bin; >1 shifts the beat past flicker
    int refinement_passes = 4;  // leave-one-out passes for multipath programs

    void validate() const;
};

struct SweepPoint {
    double candidate;
    double metric;
};

struct StepDiagnostics {
    std::string name;
    std::vector<SweepPoint> trace;
};

struct CalibrationResult {
    TxOffsetSetting tx_offset;
    ReplicaProgram program;
    std::vector<double> suppression_db; // per programmed tone
    double residual_bin_dbm = 0.0;
    double rf_residual_dbm = 0.0;
    std::vector<StepDiagnostics> step_diagnostics;
};

// Locate the dominant beat, replica off, offset zero: strongest bin excluding DC,
// refined by iterated 3-point quadratic interpolation on DTFT log-magnitudes.
// Throws NoLeakageFound when the peak sits under noise floor + 10 dB.
double coarse_leakage_frequency(Simulator& sim);

// Sweep the TX offset over the DDS grid around quantize(coarse - target_bin * RBW)
// and pick the offset minimizing the spectral-leakage metric at the target bin
// (ties toward smaller |f_off|). Throws SweepFailed on a flat metric.
TxOffsetSetting step1_tune_tx_offset(Simulator& sim, const CalibrationConfig& cfg,
                                     double coarse_hz, StepDiagnostics* diag = nullptr);

// Read the aligned leakage off the target bin (averaged over chirps_averaged
// chirps) and refer it back to the RX input through the known chain constants.
// Throws EstimateBelowNoise when the bin is under noise floor + 6 dB.
ToneParams step2_estimate_leakage(Simulator& sim, const TxOffsetSetting& tx_offset,
                                  const CalibrationConfig& cfg);

// Sweep the replica phase around the estimate, one chirp per candidate, and return
// the phase minimizing the target-bin magnitude. Throws SweepFailed when every
// candidate exceeds the un-cancelled magnitude.
double step3_fine_tune_phase(Simulator& sim, const TxOffsetSetting& tx_offset,
                             const ToneParams& init, const CalibrationConfig& cfg,
                             StepDiagnostics* diag = nullptr);

// Final comparison runs with and without the replica program.
CalibrationResult step4_apply_and_report(Simulator& sim, const TxOffsetSetting& tx_offset,
                                         const ReplicaProgram& program,
                                         const CalibrationConfig& cfg);

// Per-tone cancellation depth: bin magnitude without the replica minus with it,
// each tone read at its nearest bin (the aligned tone at the target bin itself).
std::vector<double> per_tone_suppression_db(const Spectrum& before, const Spectrum& after,
                                            const ReplicaProgram& program);

// The full four-step single-path procedure.
CalibrationResult calibrate(Simulator& sim, const CalibrationConfig& cfg);

// Multi-path extension: steps 1-4 for the dominant path fix the single global TX
// offset; further paths are appended from the residual spectrum by interpolated
// off-grid estimation, then all tones are polished by leave-one-out re-estimation
// passes until the residual peak falls below noise floor + 6 dB or the pass budget
// runs out. Throws PathsTooClose when two leakage beats are within 2 RBW.
CalibrationResult calibrate_multipath(Simulator& sim, const CalibrationConfig& cfg);

// Persistence for cmd_run --cancel (tx offset + tone program + headline metrics).
std::string calibration_to_text(const CalibrationResult& r);
void save_calibration(const CalibrationResult& r, const std::string& path);
CalibrationResult load_calibration(const std::string& path, const DdsConfig& dds);

} // namespace fmcw
