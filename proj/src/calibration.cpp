#include "fmcw/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "fmcw/errors.hpp"

namespace fmcw {

void CalibrationConfig::validate() const {
    if (offset_search_halfwidth <= 0 || max_paths <= 0 || chirps_averaged <= 0 ||
        target_bin < 1 || refinement_passes < 0) {
        throw ScenarioError("calibration: counts must be positive");
    }
    if (!(phase_sweep_step > 0.0) || !(phase_sweep_halfwidth > 0.0) ||
        !(phase_sweep_step < phase_sweep_halfwidth)) {
        throw ScenarioError("calibration: phase sweep step must be positive and smaller "
                            "than the halfwidth");
    }
}

namespace {

double bin_mag_dbm(const Spectrum& s, std::size_t k) { return bin_reading(s, k).first; }

// Strongest bin excluding DC over the positive-frequency half.
std::size_t peak_bin(const Spectrum& s) {
    std::size_t best = 1;
    double best_mag = -1.0;
    for (std::size_t k = 1; k < s.n / 2; ++k) {
        const double m = std::abs(s.bins[k]);
        if (m > best_mag) {
            best_mag = m;
            best = k;
        }
    }
    return best;
}

// Iterated 3-point quadratic interpolation on DTFT log-magnitude around f0.
double refine_peak_quadratic(std::span<const cplx> x, double fs, double f0, double span) {
    double f = f0;
    double h = span;
    for (int iter = 0; iter < 24; ++iter) {
        const double m0 = std::abs(dtft_point(x, fs, f - h));
        const double m1 = std::abs(dtft_point(x, fs, f));
        const double m2 = std::abs(dtft_point(x, fs, f + h));
        if (m0 <= 0.0 || m1 <= 0.0 || m2 <= 0.0) {
            break;
        }
        const double l0 = std::log(m0);
        const double l1 = std::log(m1);
        const double l2 = std::log(m2);
        const double den = l0 - 2.0 * l1 + l2;
        double shift = 0.0;
        if (den < 0.0) {
            shift = 0.5 * (l0 - l2) / den;
            shift = std::clamp(shift, -1.0, 1.0);
            f += shift * h;
        } else {
            // No interior maximum at this span; walk toward the larger side.
            f += (l2 > l0 ? h : -h);
        }
        h *= 0.5;
        if (h < 1e-4) {
            break;
        }
    }
    return f;
}

// Local |DTFT| maximum: coarse scan across [fc-half, fc+half] then quadratic refine.
double local_peak_frequency(std::span<const cplx> x, double fs, double fc, double half) {
    const int points = 41;
    double best_f = fc;
    double best_mag = -1.0;
    for (int i = 0; i < points; ++i) {
        const double f = fc - half + 2.0 * half * static_cast<double>(i) / (points - 1);
        const double m = std::abs(dtft_point(x, fs, f));
        if (m > best_mag) {
            best_mag = m;
            best_f = f;
        }
    }
    return refine_peak_quadratic(x, fs, best_f, half / (points - 1));
}

// RF-referred complex amplitude of the residual at freq (undo chain constants).
cplx rf_referred(const Simulator& sim, std::span<const cplx> dec, double freq) {
    return dtft_point(dec, sim.scenario().decimated_rate_hz(), freq) /
           sim.rx_chain_gain(freq);
}

ToneParams make_replica_tone(const Simulator& sim, double freq_est, cplx rf_amp_phase) {
    const TxOffsetSetting snap = quantize_frequency(freq_est, sim.scenario().dds);
    ToneParams t;
    t.freq_hz = snap.f_off_hz;
    t.amp = std::abs(rf_amp_phase) * sim.replica_port_ratio();
    // Center the frequency-mismatch phase walk on the chirp window.
    t.phase_rad = wrap_phase(std::arg(rf_amp_phase) +
                             kPi * (freq_est - t.freq_hz) * sim.scenario().chirp.t_chirp_s);
    return t;
}

ReplicaProgram without_tone(const ReplicaProgram& prog, std::size_t skip) {
    ReplicaProgram out;
    out.inverted = prog.inverted;
    for (std::size_t i = 0; i < prog.tones.size(); ++i) {
        if (i != skip) {
            out.tones.push_back(prog.tones[i]);
        }
    }
    return out;
}

} // namespace

double coarse_leakage_frequency(Simulator& sim) {
    ChirpOptions opts;
    const ChirpResult r = sim.run_chirp(opts);
    const std::size_t pk = peak_bin(r.spectrum);
    const double peak_dbm = bin_mag_dbm(r.spectrum, pk);
    // With noise disabled the thermal floor is -inf; fall back to an absolute
    // sanity threshold far below any representable signal.
    const double threshold =
        std::max(sim.noise_bin_floor_dbm() + 10.0, sim.ref_power_dbm() - 180.0);
    if (!(peak_dbm >= threshold)) {
        throw NoLeakageFound("strongest bin " + std::to_string(pk) + " at " +
                             std::to_string(peak_dbm) + " dBm is within 10 dB of the noise floor");
    }
    const double fs = sim.scenario().decimated_rate_hz();
    return refine_peak_quadratic(r.decimated, fs, static_cast<double>(pk) * sim.rbw_hz(),
                                 sim.rbw_hz() / 4.0);
}

TxOffsetSetting step1_tune_tx_offset(Simulator& sim, const CalibrationConfig& cfg,
                                     double coarse_hz, StepDiagnostics* diag) {
    cfg.validate();
    const double target_hz = static_cast<double>(cfg.target_bin) * sim.rbw_hz();
    const TxOffsetSetting center = quantize_frequency(coarse_hz - target_hz, sim.scenario().dds);

    TxOffsetSetting best{};
    double best_metric = std::numeric_limits<double>::infinity();
    double worst_metric = -std::numeric_limits<double>::infinity();
    if (diag != nullptr) {
        diag->name = "step1_offset_sweep";
        diag->trace.clear();
    }

    for (int d = -cfg.offset_search_halfwidth; d <= cfg.offset_search_halfwidth; ++d) {
        const TxOffsetSetting cand = make_tx_offset(center.step_index + d, sim.scenario().dds);
        ChirpOptions opts;
        opts.tx_offset = cand;
        const ChirpResult r = sim.run_chirp(opts);
        const double metric =
            spectral_leakage_metric(r.spectrum, static_cast<std::size_t>(cfg.target_bin));
        if (diag != nullptr) {
            diag->trace.push_back({cand.f_off_hz, metric});
        }
        worst_metric = std::max(worst_metric, metric);
        if (metric < best_metric ||
            (metric == best_metric && std::abs(cand.f_off_hz) < std::abs(best.f_off_hz))) {
            best_metric = metric;
            best = cand;
        }
    }

    if (!(worst_metric > best_metric * (1.0 + 1e-9))) {
        throw SweepFailed("offset sweep metric is flat; no leakage to align");
    }
    return best;
}

ToneParams step2_estimate_leakage(Simulator& sim, const TxOffsetSetting& tx_offset,
                                  const CalibrationConfig& cfg) {
    cfg.validate();
    const auto bin = static_cast<std::size_t>(cfg.target_bin);
    cplx acc{0.0, 0.0};
    for (int i = 0; i < cfg.chirps_averaged; ++i) {
        ChirpOptions opts;
        opts.tx_offset = tx_offset;
        const ChirpResult r = sim.run_chirp(opts);
        acc += r.spectrum.bins[bin];
    }
    acc /= static_cast<double>(cfg.chirps_averaged);

    const double mag_dbm = sim.ref_power_dbm() + amplitude_to_db(std::abs(acc));
    if (mag_dbm < sim.noise_bin_floor_dbm() + 6.0) {
        throw EstimateBelowNoise("target bin at " + std::to_string(mag_dbm) +
                                 " dBm is within 6 dB of the noise floor");
    }

    const double f_bin = static_cast<double>(cfg.target_bin) * sim.rbw_hz();
    const cplx rf = acc / sim.rx_chain_gain(f_bin);
    ToneParams est;
    est.freq_hz = f_bin;
    est.amp = std::abs(rf);
    est.phase_rad = wrap_phase(std::arg(rf));
    return est;
}

double step3_fine_tune_phase(Simulator& sim, const TxOffsetSetting& tx_offset,
                             const ToneParams& init, const CalibrationConfig& cfg,
                             StepDiagnostics* diag) {
    cfg.validate();
    const auto bin = static_cast<std::size_t>(cfg.target_bin);

    ChirpOptions base;
    base.tx_offset = tx_offset;
    const double uncancelled = std::abs(sim.run_chirp(base).spectrum.bins[bin]);

    const ToneParams snapped = make_replica_tone(sim, init.freq_hz, cplx{init.amp, 0.0});
    if (diag != nullptr) {
        diag->name = "step3_phase_sweep";
        diag->trace.clear();
    }

    const int steps = static_cast<int>(std::round(cfg.phase_sweep_halfwidth / cfg.phase_sweep_step));
    double best_phase = init.phase_rad;
    double best_mag = std::numeric_limits<double>::infinity();
    for (int i = -steps; i <= steps; ++i) {
        const double cand = init.phase_rad + static_cast<double>(i) * cfg.phase_sweep_step;
        ReplicaProgram prog;
        prog.tones.push_back(
            ToneParams{snapped.freq_hz, snapped.amp, wrap_phase(cand + snapped.phase_rad)});
        ChirpOptions opts;
        opts.tx_offset = tx_offset;
        opts.replica = &prog;
        const double mag = std::abs(sim.run_chirp(opts).spectrum.bins[bin]);
        if (diag != nullptr) {
            diag->trace.push_back(
                {cand, sim.ref_power_dbm() + amplitude_to_db(std::max(mag, 1e-300))});
        }
        if (mag < best_mag) {
            best_mag = mag;
            best_phase = cand;
        }
    }

    if (best_mag > uncancelled) {
        throw SweepFailed("every phase candidate exceeds the un-cancelled magnitude; "
                          "replica misconfigured");
    }
    return best_phase;
}

std::vector<double> per_tone_suppression_db(const Spectrum& before, const Spectrum& after,
                                            const ReplicaProgram& program) {
    std::vector<double> out;
    out.reserve(program.tones.size());
    for (const ToneParams& tone : program.tones) {
        const auto k = static_cast<std::size_t>(std::llround(tone.freq_hz / before.rbw_hz));
        out.push_back(bin_reading(before, k).first - bin_reading(after, k).first);
    }
    return out;
}

CalibrationResult step4_apply_and_report(Simulator& sim, const TxOffsetSetting& tx_offset,
                                         const ReplicaProgram& program,
                                         const CalibrationConfig& cfg) {
    const auto bin = static_cast<std::size_t>(cfg.target_bin);

    ChirpOptions off;
    off.tx_offset = tx_offset;
    const ChirpResult before = sim.run_chirp(off);

    ChirpOptions on = off;
    on.replica = &program;
    const ChirpResult after = sim.run_chirp(on);

    CalibrationResult result;
    result.tx_offset = tx_offset;
    result.program = program;
    result.residual_bin_dbm = bin_mag_dbm(after.spectrum, bin);
    result.rf_residual_dbm = after.rf_residual_dbm;
    result.suppression_db = per_tone_suppression_db(before.spectrum, after.spectrum, program);
    return result;
}

CalibrationResult calibrate(Simulator& sim, const CalibrationConfig& cfg) {
    cfg.validate();
    StepDiagnostics diag1;
    StepDiagnostics diag3;

    const double coarse = coarse_leakage_frequency(sim);
    const TxOffsetSetting tx_offset = step1_tune_tx_offset(sim, cfg, coarse, &diag1);
    ToneParams est = step2_estimate_leakage(sim, tx_offset, cfg);
    // The aligned leakage sits within half a DDS step of the bin, but the grid is
    // offset from the bin centers; snapping from the refined frequency (not the
    // bin) picks the correct side of the grid.
    est.freq_hz = coarse - tx_offset.f_off_hz;
    const double phase = step3_fine_tune_phase(sim, tx_offset, est, cfg, &diag3);

    ReplicaProgram program;
    ToneParams tone = make_replica_tone(sim, est.freq_hz, cplx{est.amp, 0.0});
    tone.phase_rad = wrap_phase(phase + tone.phase_rad);
    program.tones.push_back(tone);

    CalibrationResult result = step4_apply_and_report(sim, tx_offset, program, cfg);
    result.step_diagnostics.push_back(std::move(diag1));
    result.step_diagnostics.push_back(std::move(diag3));
    return result;
}

CalibrationResult calibrate_multipath(Simulator& sim, const CalibrationConfig& cfg) {
    cfg.validate();

    // Separation precondition on the scenario's leakage beats. Tones within one
    // bin of each other cannot be told apart by the successive estimation.
    const double k = sim.slope_hz_per_s();
    const auto& leaks = sim.scenario().leakage;
    for (std::size_t i = 0; i < leaks.size(); ++i) {
        for (std::size_t j = i + 1; j < leaks.size(); ++j) {
            if (std::abs(k * (leaks[i].delay_s - leaks[j].delay_s)) <= sim.rbw_hz()) {
                throw PathsTooClose("leakage beats at " + std::to_string(k * leaks[i].delay_s) +
                                    " and " + std::to_string(k * leaks[j].delay_s) +
                                    " Hz cannot be separated at RBW " +
                                    std::to_string(sim.rbw_hz()) + " Hz");
            }
        }
    }

    CalibrationResult first = calibrate(sim, cfg);
    const TxOffsetSetting tx_offset = first.tx_offset;
    ReplicaProgram program = first.program;
    const double fs = sim.scenario().decimated_rate_hz();
    const double floor = sim.noise_bin_floor_dbm();

    ChirpOptions with_prog;
    with_prog.tx_offset = tx_offset;

    // Alternate leave-one-out re-estimation with appends from the residual.
    // The refinement also repairs the initial tone when neighboring skirts biased
    // the coarse estimate it was snapped from.
    for (int pass = 0; pass < cfg.refinement_passes; ++pass) {
        for (std::size_t i = 0; i < program.tones.size(); ++i) {
            const ReplicaProgram others = without_tone(program, i);
            ChirpOptions opts;
            opts.tx_offset = tx_offset;
            opts.replica = others.tones.empty() ? nullptr : &others;
            const ChirpResult r = sim.run_chirp(opts);
            const double fhat = local_peak_frequency(r.decimated, fs, program.tones[i].freq_hz,
                                                     0.9 * sim.rbw_hz());
            program.tones[i] = make_replica_tone(sim, fhat, rf_referred(sim, r.decimated, fhat));
        }

        // A cancelled pair leaks an irreducible skirt of about
        // a * (step/2)/rbw / distance_in_bins around each tone (the DDS grid
        // mismatch working on the kernel slope); a residual peak is only a new
        // path if it clearly exceeds that ceiling.
        const auto skirt_ceiling = [&](double f) {
            const double half_step = sim.scenario().dds.freq_step_hz() / 2.0;
            double ceiling = 0.0;
            for (const ToneParams& t : program.tones) {
                const double dist = std::max(std::abs(t.freq_hz - f) / sim.rbw_hz(), 0.75);
                ceiling += t.amp * (half_step / sim.rbw_hz()) / dist;
            }
            return 3.0 * ceiling;
        };

        bool appended = false;
        while (program.tones.size() < static_cast<std::size_t>(cfg.max_paths)) {
            with_prog.replica = &program;
            const ChirpResult r = sim.run_chirp(with_prog);
            const std::size_t pk = peak_bin(r.spectrum);
            if (bin_mag_dbm(r.spectrum, pk) < floor + 6.0) {
                break;
            }
            const double fhat = local_peak_frequency(r.decimated, fs,
                                                     static_cast<double>(pk) * sim.rbw_hz(),
                                                     0.7 * sim.rbw_hz());
            double nearest = std::numeric_limits<double>::infinity();
            for (const ToneParams& t : program.tones) {
                nearest = std::min(nearest, std::abs(t.freq_hz - fhat));
            }
            if (nearest < 0.75 * sim.rbw_hz()) {
                break; // residual sits on an existing tone; refinement's job
            }
            const cplx rf = rf_referred(sim, r.decimated, fhat);
            if (std::abs(rf) < skirt_ceiling(fhat)) {
                break; // own-skirt structure, not a new path
            }
            program.tones.push_back(make_replica_tone(sim, fhat, rf));
            appended = true;
        }

        if (!appended) {
            with_prog.replica = &program;
            const ChirpResult r = sim.run_chirp(with_prog);
            if (bin_mag_dbm(r.spectrum, peak_bin(r.spectrum)) < floor + 6.0) {
                break;
            }
        }
    }

    CalibrationResult result = step4_apply_and_report(sim, tx_offset, program, cfg);
    result.step_diagnostics = std::move(first.step_diagnostics);
    return result;
}

} // namespace fmcw
