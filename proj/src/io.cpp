#include "fmcw/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace fmcw {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

std::string format_dbm(double dbm) {
    if (std::isinf(dbm) || dbm <= -200.0) {
        return "below -200 dBm";
    }
    return fmt12(dbm);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
    out << "bin,freq_hz,mag_dbm,phase_rad\n";
    for (std::size_t k = 0; k < s.n; ++k) {
        const auto [mag_dbm, phase] = bin_reading(s, k);
        out << k << ',' << fmt12(static_cast<double>(k) * s.rbw_hz) << ',' << fmt12(mag_dbm)
            << ',' << fmt12(phase) << '\n';
    }
}

void write_run_summary(std::ostream& out, const RunSummary& summary) {
    out << "suppression_db =";
    if (summary.suppression_db.empty()) {
        out << " none";
    } else {
        for (std::size_t i = 0; i < summary.suppression_db.size(); ++i) {
            out << (i == 0 ? " " : ", ") << fmt12(summary.suppression_db[i]);
        }
    }
    out << "\n";
    out << "residual_bin_dbm = " << format_dbm(summary.residual_bin_dbm) << "\n";
    out << "rf_residual_dbm = " << format_dbm(summary.rf_residual_dbm) << "\n";
    out << "tx_offset_hz = " << fmt12(summary.tx_offset_hz) << "\n";
    out << "tone_count = " << summary.tones.size() << "\n";
    for (std::size_t i = 0; i < summary.tones.size(); ++i) {
        out << "tone" << i << " = " << fmt12(summary.tones[i].freq_hz) << " Hz, "
            << fmt12(summary.tones[i].amp) << ", " << fmt12(summary.tones[i].phase_rad)
            << " rad\n";
    }
    out << "clipped = " << (summary.clipped ? "true" : "false") << "\n";
    out << "wall_time_s = " << fmt12(summary.wall_time_s) << "\n";
}

void write_sweep_trace_csv(std::ostream& out, const StepDiagnostics& diag) {
    out << "candidate,metric\n";
    for (const SweepPoint& p : diag.trace) {
        out << fmt12(p.candidate) << ',' << fmt12(p.metric) << '\n';
    }
}

} // namespace fmcw
