#include "fmcw/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fmcw/calibration.hpp"
#include "fmcw/errors.hpp"
#include "fmcw/io.hpp"
#include "fmcw/passband_oracle.hpp"
#include "fmcw/simulator.hpp"

namespace fmcw {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw SimError("cannot write '" + p.string() + "'");
    }
    return out;
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

std::string resolve_out_dir(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        if (const char* env = std::getenv("FMCWSIM_OUT_DIR"); env != nullptr && *env != '\0') {
            dir = env;
        } else {
            dir = "out";
        }
    }
    fs::create_directories(dir);
    return dir;
}

int cmd_run(const RunOptions& opts, std::ostream& log) {
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const Scenario scn = load_scenario(opts.scenario);
        const std::string out_dir = resolve_out_dir(opts.out_dir);
        Simulator sim(scn);

        ChirpOptions chirp_opts;
        chirp_opts.window = opts.window;
        RunSummary summary;
        ChirpResult shown;

        if (opts.cancel) {
            const std::string cal_path = opts.calibration_path.empty()
                                             ? (fs::path(out_dir) / "calibration.txt").string()
                                             : opts.calibration_path;
            const CalibrationResult cal = load_calibration(cal_path, scn.dds);
            chirp_opts.tx_offset = cal.tx_offset;

            // Reference chirp without the replica so the summary can report the
            // achieved suppression alongside the cancelled spectrum.
            const ChirpResult before = sim.run_chirp(chirp_opts);
            chirp_opts.replica = &cal.program;
            shown = sim.run_chirp(chirp_opts);

            summary.suppression_db =
                per_tone_suppression_db(before.spectrum, shown.spectrum, cal.program);
            summary.tones = cal.program.tones;
            summary.tx_offset_hz = cal.tx_offset.f_off_hz;
        } else {
            shown = sim.run_chirp(chirp_opts);
        }

        summary.residual_bin_dbm = bin_reading(shown.spectrum, 1).first;
        summary.rf_residual_dbm = shown.rf_residual_dbm;
        summary.clipped = shown.clipped;
        summary.wall_time_s = seconds_since(t0);

        const std::string tag = opts.cancel ? "cancel" : "no_cancel";
        auto csv = open_out(fs::path(out_dir) / ("spectrum_" + tag + ".csv"));
        write_spectrum_csv(csv, shown.spectrum);
        auto sum = open_out(fs::path(out_dir) / ("summary_" + tag + ".txt"));
        write_run_summary(sum, summary);
        log << "wrote spectrum_" << tag << ".csv and summary_" << tag << ".txt to " << out_dir
            << "\n";
        return kExitOk;
    } catch (const ScenarioError& e) {
        log << "scenario error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SimError& e) {
        log << "simulation error: " << e.what() << "\n";
        return kExitSimulation;
    }
}

int cmd_calibrate(const CalibrateOptions& opts, std::ostream& log) {
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const Scenario scn = load_scenario(opts.scenario);
        const std::string out_dir = resolve_out_dir(opts.out_dir);
        Simulator sim(scn);

        CalibrationConfig cfg;
        cfg.max_paths = opts.max_paths;
        cfg.target_bin = opts.target_bin;
        cfg.chirps_averaged = opts.chirps_averaged;

        CalibrationResult result;
        try {
            result = opts.multipath ? calibrate_multipath(sim, cfg) : calibrate(sim, cfg);
        } catch (const NoLeakageFound& e) {
            log << "no leakage found: " << e.what() << "\n";
            return kExitCalibration;
        } catch (const SweepFailed& e) {
            log << "sweep failed: " << e.what() << "\n";
            return kExitCalibration;
        } catch (const EstimateBelowNoise& e) {
            log << "estimate below noise: " << e.what() << "\n";
            return kExitCalibration;
        }

        save_calibration(result, (fs::path(out_dir) / "calibration.txt").string());
        for (const StepDiagnostics& diag : result.step_diagnostics) {
            auto csv = open_out(fs::path(out_dir) / (diag.name + ".csv"));
            write_sweep_trace_csv(csv, diag);
        }

        RunSummary summary;
        summary.suppression_db = result.suppression_db;
        summary.residual_bin_dbm = result.residual_bin_dbm;
        summary.rf_residual_dbm = result.rf_residual_dbm;
        summary.tx_offset_hz = result.tx_offset.f_off_hz;
        summary.tones = result.program.tones;
        summary.wall_time_s = seconds_since(t0);
        auto sum = open_out(fs::path(out_dir) / "summary_calibrate.txt");
        write_run_summary(sum, summary);

        log << "calibrated: tx offset " << result.tx_offset.f_off_hz << " Hz, "
            << result.program.tones.size() << " tone(s)";
        for (double s : result.suppression_db) {
            log << ", " << s << " dB";
        }
        log << "; wrote calibration.txt to " << out_dir << "\n";
        return kExitOk;
    } catch (const ScenarioError& e) {
        log << "scenario error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SimError& e) {
        log << "simulation error: " << e.what() << "\n";
        return kExitSimulation;
    }
}

namespace {

// Residual of a ground-truth replica with an injected phase error, relative to the
// un-cancelled leakage power. Ideal DAC and no noise so the curve is the pure
// 2*sin(delta/2) law.
double phase_error_residual_db(const Scenario& scenario, double delta_rad) {
    Scenario scn = scenario;
    scn.noise.enabled = false;
    scn.dds.dac_bits = 0;
    scn.drift.enabled = false;
    Simulator sim(scn);

    const std::vector<ToneParams> truth = sim.ground_truth_tones(TxOffsetSetting{}, 0);
    const ToneParams& leak = truth.front();

    const std::size_t n = scn.adc_samples_per_chirp();
    const std::vector<cplx> rx =
        synthesize_beat_signal(std::span(&leak, 1), scn.adc.fs_hz, n);

    ReplicaProgram prog;
    prog.tones.push_back(ToneParams{leak.freq_hz, leak.amp * sim.replica_port_ratio(),
                                    wrap_phase(leak.phase_rad + delta_rad)});
    const std::vector<cplx> rep = replica_envelope(prog, scn.dds, scn.adc.fs_hz, n);
    const std::vector<cplx> zeros(n, cplx{0.0, 0.0});

    const double residual =
        rf_residual_power_dbm(rx, rep, scn.combiner, sim.ref_power_dbm());
    const double uncancelled =
        rf_residual_power_dbm(rx, zeros, scn.combiner, sim.ref_power_dbm());
    return residual - uncancelled;
}

} // namespace

int cmd_sweep(const SweepOptions& opts, std::ostream& log) {
    try {
        if (opts.steps < 1) {
            log << "sweep error: --steps must be >= 1\n";
            return kExitUsage;
        }
        const Scenario base = load_scenario(opts.scenario);
        const std::string out_dir = resolve_out_dir(opts.out_dir);

        const bool needs_leakage = opts.param == "phase_error" ||
                                   opts.param == "leakage_delay" ||
                                   opts.param == "leakage_coupling";
        if (needs_leakage && base.leakage.empty()) {
            log << "sweep error: parameter '" << opts.param << "' needs a leakage path\n";
            return kExitUsage;
        }
        if (opts.param == "target_range" && base.targets.empty()) {
            log << "sweep error: parameter 'target_range' needs a target\n";
            return kExitUsage;
        }
        if (opts.param != "phase_error" && opts.param != "target_range" &&
            opts.param != "leakage_delay" && opts.param != "leakage_coupling") {
            log << "sweep error: unknown parameter '" << opts.param << "'\n";
            return kExitUsage;
        }

        auto csv = open_out(fs::path(out_dir) / ("sweep_" + opts.param + ".csv"));
        if (opts.param == "phase_error") {
            csv << "phase_error_rad,residual_rel_db\n";
        } else if (opts.param == "target_range") {
            csv << "range_m,target_peak_dbm\n";
        } else if (opts.param == "leakage_delay") {
            csv << "delay_s,suppression_db,residual_bin_dbm,rf_residual_dbm\n";
        } else {
            csv << "coupling_db,suppression_db,residual_bin_dbm,rf_residual_dbm\n";
        }

        for (int i = 0; i < opts.steps; ++i) {
            const double v = opts.steps == 1
                                 ? opts.from
                                 : opts.from + (opts.to - opts.from) * i / (opts.steps - 1);
            if (opts.param == "phase_error") {
                csv << fmt12(v) << ',' << fmt12(phase_error_residual_db(base, v)) << '\n';
            } else if (opts.param == "target_range") {
                // Isolate the target return: the raw leakage skirt would bury the
                // far-range points and the 16-bit floor would bias the near ones.
                Scenario scn = base;
                scn.targets[0].range_m = v;
                scn.leakage.clear();
                scn.noise.enabled = false;
                scn.adc.bits = 24;
                Simulator sim(scn);
                const ChirpResult r = sim.run_chirp(ChirpOptions{});
                const double f_beat = beat_frequency(v, scn.chirp);
                const double mag =
                    std::abs(dtft_point(r.decimated, scn.decimated_rate_hz(), f_beat));
                csv << fmt12(v) << ','
                    << fmt12(sim.ref_power_dbm() + amplitude_to_db(std::max(mag, 1e-300)))
                    << '\n';
            } else {
                Scenario scn = base;
                if (opts.param == "leakage_delay") {
                    scn.leakage[0].delay_s = v;
                } else {
                    scn.leakage[0].coupling_db = v;
                }
                Simulator sim(scn);
                CalibrationConfig cfg;
                const CalibrationResult r = calibrate(sim, cfg);
                csv << fmt12(v) << ',' << fmt12(r.suppression_db.front()) << ','
                    << fmt12(r.residual_bin_dbm) << ',' << fmt12(r.rf_residual_dbm) << '\n';
            }
        }
        log << "wrote sweep_" << opts.param << ".csv to " << out_dir << "\n";
        return kExitOk;
    } catch (const ScenarioError& e) {
        log << "scenario error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SimError& e) {
        log << "simulation error: " << e.what() << "\n";
        return kExitSimulation;
    }
}

int cmd_oracle_check(const OracleOptions& opts, std::ostream& log) {
    if (opts.cases == 0) {
        log << "oracle-check: no cases requested; trivial pass\n";
        return kExitOk;
    }
    if (opts.cases < 0) {
        log << "oracle-check: --cases must be >= 0\n";
        return kExitUsage;
    }
    const OracleReport report = run_oracle_suite(opts.cases, opts.seed, opts.inject_sign_flip);
    for (std::size_t i = 0; i < report.cases.size(); ++i) {
        const OracleCase& c = report.cases[i];
        log << "case " << i << ": tau " << c.path.delay_s * 1e6 << " us, f_off " << c.f_off_hz
            << " Hz -> freq err " << c.freq_err_rel_rbw * 100.0 << " % RBW, phase err "
            << c.phase_err_rad << " rad, amp err " << c.amp_rel_err * 100.0 << " %\n";
    }
    log << "max freq err: " << report.max_freq_err_rel_rbw * 100.0 << " % of RBW (tol "
        << OracleReport::kFreqTolRelRbw * 100.0 << " %)\n";
    log << "max phase err: " << report.max_phase_err_rad << " rad (tol "
        << OracleReport::kPhaseTolRad << " rad)\n";
    log << "max amp err: " << report.max_amp_rel_err * 100.0 << " %\n";
    if (!report.pass) {
        log << "oracle-check: FAILED tolerance\n";
        return kExitOracle;
    }
    log << "oracle-check: OK\n";
    return kExitOk;
}

} // namespace fmcw
