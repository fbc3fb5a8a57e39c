#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fmcw/calibration.hpp"
#include "fmcw/dsp.hpp"
#include "fmcw/signal_model.hpp"

namespace fmcw {

// Machine-readable single-run summary (stable key order; wall time is the only
// field expected to vary between identical runs).
struct RunSummary {
    std::vector<double> suppression_db; // empty when the replica path is off
    double residual_bin_dbm = 0.0;
    double rf_residual_dbm = 0.0;
    double tx_offset_hz = 0.0;
    std::vector<ToneParams> tones;
    bool clipped = false;
    double wall_time_s = 0.0;
};

// Columns: bin,freq_hz,mag_dbm,phase_rad. LF line endings, 12 significant digits.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);

void write_run_summary(std::ostream& out, const RunSummary& summary);

// Columns: candidate,metric.
void write_sweep_trace_csv(std::ostream& out, const StepDiagnostics& diag);

// dBm formatting with the "below -200 dBm" sentinel for vanishing power.
std::string format_dbm(double dbm);

} // namespace fmcw
